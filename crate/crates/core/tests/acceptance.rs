//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! with a failure status if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use stsim::engine::EngineState;
use stsim::preprocess::is_locally_topological;
use stsim::reference::{basic_ssa, eval_ectl, naive_stuttering_simulation, EctlFormula};
use stsim::{
    check_preorder, generate_random_ks, run, KripkeStructure, Label, Partition, PartitionRelationPair,
    StateId,
};

type Outcome = Result<String, String>;

fn ids(states: &[usize]) -> Vec<StateId> {
    states.iter().map(|&s| StateId(s)).collect()
}

fn fmt_block(b: &[StateId]) -> String {
    let mut b: Vec<usize> = b.iter().map(|s| s.0).collect();
    b.sort();
    let inner: Vec<String> = b.iter().map(ToString::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

/// Blocks as sorted member lists, and the strict part of `⊴` as pairs of
/// such lists.
type Diagram = (BTreeSet<Vec<usize>>, BTreeSet<(Vec<usize>, Vec<usize>)>);

fn diagram(engine: &EngineState) -> Diagram {
    let pr = engine.pair();
    let members = |b| {
        let mut m: Vec<usize> = pr.partition.members(b).iter().map(|s| s.0).collect();
        m.sort();
        m
    };
    let list = pr.partition.block_list();
    let blocks = list.iter().map(|&b| members(b)).collect();
    let edges = list
        .iter()
        .flat_map(|&b| list.iter().map(move |&c| (b, c)))
        .filter(|&(b, c)| b != c && pr.leq(b, c))
        .map(|(b, c)| (members(b), members(c)))
        .collect();
    (blocks, edges)
}

/// Blocks plus the transitive closure of `edges`; pairs listed in `mutual`
/// are related both ways.
fn expected_diagram(blocks: &[&[usize]], edges: &[(&[usize], &[usize])], mutual: &[(&[usize], &[usize])]) -> Diagram {
    let blocks: BTreeSet<Vec<usize>> = blocks.iter().map(|b| b.to_vec()).collect();
    let mut rel: BTreeSet<(Vec<usize>, Vec<usize>)> = edges.iter().map(|(b, c)| (b.to_vec(), c.to_vec())).collect();
    for (b, c) in mutual {
        rel.insert((b.to_vec(), c.to_vec()));
        rel.insert((c.to_vec(), b.to_vec()));
    }
    loop {
        let mut added = false;
        for (a, b) in rel.clone() {
            for (c, d) in rel.clone() {
                if b == c && a != d && rel.insert((a.clone(), d)) {
                    added = true;
                }
            }
        }
        if !added {
            return (blocks, rel);
        }
    }
}

fn describe_diff(label: &str, got: &Diagram, want: &Diagram) -> String {
    let show = |e: &(Vec<usize>, Vec<usize>)| {
        format!("{}◁{}", fmt_block(&ids(&e.0)), fmt_block(&ids(&e.1)))
    };
    let missing: Vec<String> = want.1.difference(&got.1).map(show).collect();
    let extra: Vec<String> = got.1.difference(&want.1).map(show).collect();
    let mut out = format!("{label}: ");
    if got.0 != want.0 {
        out += &format!("blocks {:?} instead of {:?}; ", got.0, want.0);
    }
    out += &format!("missing edges [{}], unexpected edges [{}]", missing.join(" "), extra.join(" "));
    out
}

/// Golden pair refinement: splitting then pruning by S = {3,4,5,8}.
fn criterion_1() -> Outcome {
    let k = KripkeStructure::new(vec![Label::new(["p"]); 10], []).unwrap();
    let blocks: Vec<_> = (0..5).map(|i| ids(&[2 * i, 2 * i + 1])).collect();
    let pr = PartitionRelationPair::from_blocks(10, &blocks, &[(0, 1), (0, 3), (2, 3), (4, 3)]).unwrap();
    let mut engine = EngineState::with_relation(&k, &pr).map_err(|e| e.to_string())?;
    let s = ids(&[3, 4, 5, 8]);

    engine.splitting_procedure(&s);
    engine.check_invariants().map_err(|e| e.to_string())?;
    let middle = expected_diagram(
        &[&[0, 1], &[2], &[3], &[4, 5], &[6, 7], &[8], &[9]],
        &[
            (&[0, 1], &[2]),
            (&[0, 1], &[3]),
            (&[0, 1], &[6, 7]),
            (&[4, 5], &[6, 7]),
            (&[8], &[6, 7]),
            (&[9], &[6, 7]),
        ],
        &[(&[2], &[3]), (&[8], &[9])],
    );
    let got = diagram(&engine);
    if got != middle {
        return Err(describe_diff("after splitting", &got, &middle));
    }

    engine.refine(&s);
    engine.check_invariants().map_err(|e| e.to_string())?;
    let right = expected_diagram(
        &[&[0, 1], &[2], &[3], &[4, 5], &[6, 7], &[8], &[9]],
        &[
            (&[0, 1], &[2]),
            (&[2], &[3]),
            (&[0, 1], &[6, 7]),
            (&[4, 5], &[6, 7]),
            (&[9], &[8]),
            (&[8], &[6, 7]),
        ],
        &[],
    );
    let got = diagram(&engine);
    if got != right {
        return Err(describe_diff("after pruning", &got, &right));
    }
    Ok("split and pruned diagrams match".into())
}

/// Golden ordered split: state list and blocks after splitting by
/// [1,3,4,6,8].
fn criterion_2() -> Outcome {
    let mut p = Partition::from_blocks(10, &[ids(&[0, 1]), ids(&[2, 3, 4, 5, 6, 7]), ids(&[8, 9])]).unwrap();
    // Equally labelled chains whose order the split must keep forward:
    // [1,3,4,6,8] is closed under predecessors.
    let k = KripkeStructure::new(
        vec![Label::new(["p"]); 10],
        [(1, 3), (3, 4), (4, 6), (6, 8), (0, 2), (2, 5), (5, 7), (7, 9)],
    )
    .unwrap();
    let classes = k.label_classes();
    if !is_locally_topological(&k, &classes, p.state_list()) {
        return Err("witness structure is not forward before the split".into());
    }
    p.split(&ids(&[1, 3, 4, 6, 8]));
    let want_list = ids(&[1, 0, 3, 4, 6, 2, 5, 7, 8, 9]);
    if p.state_list() != want_list.as_slice() {
        return Err(format!("state list {:?}", p.state_list()));
    }
    let want_blocks = vec![ids(&[1]), ids(&[0]), ids(&[3, 4, 6]), ids(&[2, 5, 7]), ids(&[8]), ids(&[9])];
    if p.to_blocks() != want_blocks {
        return Err(format!("blocks {:?}", p.to_blocks()));
    }
    p.validate()?;
    if !is_locally_topological(&k, &classes, p.state_list()) {
        return Err("state list has a backward transition after the split".into());
    }
    Ok("state list [1,0,3,4,6,2,5,7,8,9] and six blocks".into())
}

const DENSITIES: [f64; 3] = [0.1, 0.25, 0.5];

fn small_structure(seed: u64, max_states: usize) -> KripkeStructure {
    let n = 1 + (seed as usize % max_states);
    let labels = 1 + (seed as usize / max_states) % 3;
    let density = DENSITIES[(seed as usize / (3 * max_states)) % 3];
    generate_random_ks(seed, n, density, labels).unwrap()
}

/// Engine, explicit refinement and the definitional fixpoint agree.
fn criterion_3() -> Outcome {
    let seeds = 1200;
    for seed in 0..seeds {
        let k = small_structure(seed, 8);
        let naive = naive_stuttering_simulation(&k);
        if run(&k).state_relation() != naive {
            return Err(format!("seed {seed}: engine differs from the fixpoint"));
        }
        if basic_ssa(&k).to_relation() != naive {
            return Err(format!("seed {seed}: explicit refinement differs from the fixpoint"));
        }
    }
    Ok(format!("{seeds} structures, three-way agreement"))
}

/// The checker accepts the computed preorder and rejects every one-pair
/// extension.
fn criterion_4() -> Outcome {
    let mut rejected = 0;
    for seed in 0..200 {
        let k = small_structure(10_000 + seed, 8);
        let r = run(&k).state_relation();
        if !check_preorder(&k, &r).map_err(|e| e.to_string())?.is_accepted() {
            return Err(format!("seed {seed}: computed preorder rejected"));
        }
        for x in k.states() {
            for y in k.states() {
                if k.label(x) != k.label(y) || r.contains(x, y) {
                    continue;
                }
                let mut bigger = r.clone();
                bigger.insert(x, y);
                let bigger = bigger.preorder_closure();
                if check_preorder(&k, &bigger).map_err(|e| e.to_string())?.is_accepted() {
                    return Err(format!("seed {seed}: extension by ({x}, {y}) accepted"));
                }
                rejected += 1;
            }
        }
    }
    Ok(format!("200 structures, {rejected} extensions rejected"))
}

/// Bookkeeping matches brute force at every iteration.
fn criterion_5() -> Outcome {
    let mut boundaries = 0;
    for seed in 0..200 {
        let k = small_structure(20_000 + seed, 15);
        let oracle = naive_stuttering_simulation(&k);
        let mut engine = EngineState::new(&k);
        loop {
            engine
                .check_invariants()
                .map_err(|e| format!("seed {seed}: {e}"))?;
            if !oracle.is_subset(&engine.state_relation()) {
                return Err(format!("seed {seed}: current relation lost a simulation pair"));
            }
            boundaries += 1;
            let found = engine.find_refiner();
            let accepted = check_preorder(&k, &engine.state_relation()).map_err(|e| e.to_string())?;
            if found.is_none() != accepted.is_accepted() {
                return Err(format!("seed {seed}: refiner search and checker disagree"));
            }
            match found {
                Some((b, c)) if !engine.has_escaping_bottom(b, c) => {
                    return Err(format!("seed {seed}: refiner ({b}, {c}) has no escaping bottom state"));
                }
                Some(_) => {
                    engine.step();
                }
                None => break,
            }
        }
    }
    Ok(format!("200 structures, {boundaries} iteration boundaries checked"))
}

/// Iterations and created blocks stay within the counted bounds.
fn criterion_6() -> Outcome {
    let mut runs = 0;
    for seed in 0..1200 {
        let k = if seed < 1000 {
            small_structure(seed, 8)
        } else {
            small_structure(20_000 + seed, 15)
        };
        let r = run(&k);
        let stats = r.stats();
        let final_blocks = stats.blocks;
        let label_blocks = k.labeling_partition().len();
        if final_blocks != r.num_blocks() {
            return Err(format!("seed {seed}: engine ended with {final_blocks} blocks, result has {}", r.num_blocks()));
        }
        if stats.iterations > final_blocks * final_blocks {
            return Err(format!("seed {seed}: {} iterations for {final_blocks} blocks", stats.iterations));
        }
        if stats.new_blocks != 2 * (final_blocks - label_blocks) {
            return Err(format!(
                "seed {seed}: {} new blocks, {final_blocks} final, {label_blocks} initial",
                stats.new_blocks
            ));
        }
        runs += 1;
    }
    Ok(format!("{runs} runs within bounds"))
}

struct FormulaGen {
    state: u64,
}

impl FormulaGen {
    fn next(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.state >> 33
    }

    fn formula(&mut self, atoms: &[String], depth: usize) -> EctlFormula {
        let atom = atoms[self.next() as usize % atoms.len()].clone();
        if depth == 0 || self.next() % 4 == 0 {
            return if self.next() % 2 == 0 {
                EctlFormula::atom(atom)
            } else {
                EctlFormula::not_atom(atom)
            };
        }
        let a = self.formula(atoms, depth - 1);
        let b = self.formula(atoms, depth - 1);
        match self.next() % 3 {
            0 => EctlFormula::and(a, b),
            1 => EctlFormula::or(a, b),
            _ => EctlFormula::until(a, b),
        }
    }
}

/// Equivalent states satisfy the same existential until formulas.
fn criterion_7() -> Outcome {
    let mut gen = FormulaGen { state: 7 };
    for case in 0..500u64 {
        let k = small_structure(30_000 + case, 10);
        let atoms: Vec<String> = k.atoms().into_iter().map(String::from).collect();
        let phi = gen.formula(&atoms, 4);
        let sat = eval_ectl(&k, &phi).map_err(|e| e.to_string())?;
        let result = run(&k);
        for block in result.blocks() {
            let inside = block.iter().filter(|s| sat.contains(s)).count();
            if inside != 0 && inside != block.len() {
                return Err(format!("case {case}: {phi} splits block {}", fmt_block(block)));
            }
        }
    }
    Ok("500 formulas, every satisfaction set is a union of classes".into())
}

/// A hub choosing between two stuttering chains of length `n`, one ending
/// in `q` and one in `r`.
fn stutter_chains(n: usize) -> KripkeStructure {
    let p = Label::new(["p"]);
    let mut labels = vec![p.clone()];
    let mut edges = Vec::new();
    for end in ["q", "r"] {
        let start = labels.len();
        edges.push((0, start));
        for i in 0..n {
            labels.push(p.clone());
            edges.push((start + i, start + i + 1));
        }
        labels.push(Label::new([end]));
    }
    KripkeStructure::new(labels, edges).unwrap()
}

/// Doubling the chains keeps the iteration count flat.
fn criterion_8() -> Outcome {
    let mut seen = Vec::new();
    for n in [4, 8, 16, 32, 64, 128] {
        let k = stutter_chains(n);
        let r = run(&k);
        seen.push((n, r.num_blocks(), r.stats().iterations));
    }
    let (_, blocks, iterations) = seen[0];
    if seen.iter().any(|&(_, b, i)| b != blocks || i != iterations) {
        return Err(format!("(length, classes, iterations): {seen:?}"));
    }
    Ok(format!("{blocks} classes and {iterations} iterations for chain lengths 4 to 128"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("golden pair refinement", criterion_1, Duration::from_secs(1)),
        ("golden ordered split", criterion_2, Duration::from_secs(1)),
        ("oracle equivalence", criterion_3, Duration::from_secs(60)),
        ("checker soundness and completeness", criterion_4, Duration::MAX),
        ("bookkeeping invariants", criterion_5, Duration::MAX),
        ("iteration and block bounds", criterion_6, Duration::MAX),
        ("logic preservation", criterion_7, Duration::MAX),
        ("stutter chain scaling", criterion_8, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => Err(format!("{detail}, but took {elapsed:.2?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail} ({elapsed:.2?})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
