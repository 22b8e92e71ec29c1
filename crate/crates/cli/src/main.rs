mod selftest;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use stsim::checker::{find_definition_violation, CheckError, DefinitionViolation, Evidence, Witness};
use stsim::io::{parse_ks, parse_relation, serialize_ks, serialize_partition, serialize_result};
use stsim::reference::naive_stuttering_simulation;
use stsim::{check_preorder, generate_random_ks, run_traced, KripkeStructure, StateId, Verdict};

/// Stuttering simulation preorders of Kripke structures.
#[derive(Parser)]
#[command(name = "stsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the stuttering simulation preorder of a structure.
    Compute {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Emit::Preorder)]
        emit: Emit,
        /// List every related pair, including pairs inside one class.
        #[arg(long)]
        full: bool,
        /// Cross-check against the definitional fixpoint.
        #[arg(long)]
        oracle: bool,
        /// Report every refinement iteration on standard error.
        #[arg(long)]
        trace: bool,
    },
    /// Check whether a relation is a stuttering simulation.
    Check {
        file: PathBuf,
        #[arg(long)]
        relation: PathBuf,
        /// Test the definition directly instead of the one-pass check.
        #[arg(long)]
        definition: bool,
    },
    /// Print a random structure.
    Generate {
        #[arg(long)]
        states: usize,
        #[arg(long)]
        density: f64,
        #[arg(long)]
        labels: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Run the built-in golden tests.
    Selftest,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Partition,
    Preorder,
    Quotient,
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Compute {
            file,
            emit,
            full,
            oracle,
            trace,
        } => compute(&file, emit, full, oracle, trace),
        Command::Check {
            file,
            relation,
            definition,
        } => check(&file, &relation, definition),
        Command::Generate {
            states,
            density,
            labels,
            seed,
        } => {
            let k = generate_random_ks(seed, states, density, labels)?;
            print!("{}", serialize_ks(&k));
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest => Ok(if selftest::run() {
            ExitCode::SUCCESS
        } else {
            ExitCode::FAILURE
        }),
    }
}

fn read_structure(path: &Path) -> Result<KripkeStructure> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_ks(&text).with_context(|| format!("{}", path.display()))
}

fn compute(file: &Path, emit: Emit, full: bool, oracle: bool, trace: bool) -> Result<ExitCode> {
    let k = read_structure(file)?;
    let result = run_traced(&k, |step| {
        if trace {
            eprintln!(
                "iteration {}: refiner ({}, {}), splitter size {}, {} blocks",
                step.iteration, step.refiner.0, step.refiner.1, step.splitter_len, step.blocks
            );
        }
    });
    if oracle && result.state_relation() != naive_stuttering_simulation(&k) {
        eprintln!("oracle mismatch: the computed preorder differs from the definitional fixpoint");
        return Ok(ExitCode::FAILURE);
    }
    let quotient = || result.quotient(&k).map(|q| serialize_ks(&q));
    match emit {
        Emit::Partition => print!("{}", serialize_partition(&result)),
        Emit::Preorder => print!("{}", serialize_result(&result, full)),
        Emit::Quotient => print!("{}", quotient()?),
        Emit::All => {
            print!("{}", serialize_result(&result, full));
            println!("# quotient");
            print!("{}", quotient()?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn check(file: &Path, relation: &Path, definition: bool) -> Result<ExitCode> {
    let k = read_structure(file)?;
    let text = fs::read_to_string(relation).with_context(|| format!("cannot read {}", relation.display()))?;
    let r = parse_relation(&text, k.num_states()).with_context(|| format!("{}", relation.display()))?;

    if !definition {
        match check_preorder(&k, &r) {
            Ok(Verdict::Accepted) => {
                println!("accepted");
                return Ok(ExitCode::SUCCESS);
            }
            Ok(Verdict::Rejected(witness)) => {
                println!("rejected");
                print_witness(&witness);
                return Ok(ExitCode::FAILURE);
            }
            Err(e @ (CheckError::NotReflexive(_) | CheckError::NotTransitive(..))) => {
                eprintln!("note: {e}; checking the definition instead");
            }
            Err(e) => return Err(e.into()),
        }
    }
    match find_definition_violation(&k, &r) {
        None => {
            println!("accepted");
            Ok(ExitCode::SUCCESS)
        }
        Some(v) => {
            println!("rejected");
            match v {
                DefinitionViolation::Label { state, simulator } => {
                    println!("state {simulator} is related to state {state} but has another label")
                }
                DefinitionViolation::Move { from, to, simulator } => {
                    println!("state {simulator} is related to state {from} but cannot match {from} -> {to}")
                }
            }
            Ok(ExitCode::FAILURE)
        }
    }
}

fn states(s: &[StateId]) -> String {
    let v: Vec<String> = s.iter().map(ToString::to_string).collect();
    format!("{{{}}}", v.join(" "))
}

fn print_witness(witness: &Witness) {
    match witness {
        Witness::LabelMismatch { state, simulator } => {
            println!("state {simulator} is related to state {state} but has another label")
        }
        Witness::Refiner { block, target, evidence } => {
            println!("refiner: block {} moving into block {}", states(block), states(target));
            match evidence {
                Evidence::LocalBottom(s) => {
                    println!("state {s} of the block can neither stutter nor step into the simulators of the target")
                }
                Evidence::BottomBlock(d) => println!(
                    "simulators {} of the block can neither stutter nor step into the simulators of the target",
                    states(d)
                ),
                Evidence::Unreached(s) => {
                    println!("simulator {s} of the block has no related path into the simulators of the target")
                }
            }
        }
    }
}
