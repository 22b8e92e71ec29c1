//! Deciding whether a given relation is a stuttering simulation.
//!
//! [`check_preorder`] encodes a preorder as a partition-relation pair and
//! runs a single refiner search on it, which costs about as much as one
//! iteration of the refinement engine. [`check_definition`] tests the
//! definition directly and works for any relation.

use thiserror::Error;

use crate::engine::{EngineError, EngineState, RefinerEvidence};
use crate::kripke::{KripkeStructure, StateId, StateSet};
use crate::partition::PartitionRelationPair;
use crate::reference::pos_naive;
use crate::relation::Relation;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CheckError {
    #[error("relation is over {found} states, structure has {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("relation is not reflexive at state {0}")]
    NotReflexive(StateId),
    #[error("relation is not transitive: ({0}, {1}) and ({1}, {2}) but not ({0}, {2})")]
    NotTransitive(StateId, StateId, StateId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Rejected(Witness),
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

/// Why a preorder is not a stuttering simulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `simulator` is related to `state` but carries another label.
    LabelMismatch { state: StateId, simulator: StateId },
    /// `block` moves into `target`, but not every candidate simulator of
    /// `block` can follow that move while staying related.
    Refiner {
        block: Vec<StateId>,
        target: Vec<StateId>,
        evidence: Evidence,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// A state of `block` that cannot stay related nor reach a simulator of
    /// `target` in one step.
    LocalBottom(StateId),
    /// A class of simulators of `block` none of which can stay related or
    /// reach a simulator of `target` in one step.
    BottomBlock(Vec<StateId>),
    /// A simulator of `block` from which no related path reaches a
    /// simulator of `target`.
    Unreached(StateId),
}

/// Is the preorder `r` a stuttering simulation on `k`?
///
/// ```
/// use stsim::checker::{check_preorder, Verdict};
/// use stsim::{KripkeStructure, Label, Relation};
///
/// let k = KripkeStructure::new(vec![Label::new(["p"]), Label::new(["p"])], [(0, 1)])?;
/// assert_eq!(check_preorder(&k, &Relation::identity(2)).unwrap(), Verdict::Accepted);
/// # Ok::<(), stsim::ModelError>(())
/// ```
pub fn check_preorder(k: &KripkeStructure, r: &Relation) -> Result<Verdict, CheckError> {
    if r.size() != k.num_states() {
        return Err(CheckError::SizeMismatch {
            expected: k.num_states(),
            found: r.size(),
        });
    }
    if let Some(s) = r.irreflexive_witness() {
        return Err(CheckError::NotReflexive(s));
    }
    if let Some((x, y, z)) = r.intransitive_witness() {
        return Err(CheckError::NotTransitive(x, y, z));
    }
    if let Some((state, simulator)) = r.pairs().find(|&(x, y)| k.label(x) != k.label(y)) {
        return Ok(Verdict::Rejected(Witness::LabelMismatch { state, simulator }));
    }

    let pr = pair_of_preorder(r);
    match EngineState::for_checking(k, &pr) {
        Ok(mut engine) => Ok(match engine.find_refiner() {
            None => Verdict::Accepted,
            Some((b, c)) => {
                let evidence = match engine.refiner_evidence(b, c) {
                    Some(RefinerEvidence::LocalBottom(s)) => {
                        Evidence::LocalBottom(engine.collapse_map().members(s)[0])
                    }
                    Some(RefinerEvidence::BottomBlock(d)) => Evidence::BottomBlock(engine.original_members(d)),
                    None => unreachable!("reported refiner has evidence"),
                };
                Verdict::Rejected(Witness::Refiner {
                    block: engine.original_members(b),
                    target: engine.original_members(c),
                    evidence,
                })
            }
        }),
        Err(EngineError::SplitsInertCycle(_)) => Ok(search_refiner(k, &pr)),
        Err(e) => unreachable!("preorder with consistent labels was rejected: {e}"),
    }
}

/// Blocks are the classes of `r ∩ r⁻¹` ordered by least member.
fn pair_of_preorder(r: &Relation) -> PartitionRelationPair {
    let n = r.size();
    let mut class = vec![usize::MAX; n];
    let mut blocks: Vec<Vec<StateId>> = Vec::new();
    for x in 0..n {
        if class[x] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        let mut members = Vec::new();
        for y in x..n {
            if r.contains(StateId(x), StateId(y)) && r.contains(StateId(y), StateId(x)) {
                class[y] = id;
                members.push(StateId(y));
            }
        }
        blocks.push(members);
    }
    let leq: Vec<(usize, usize)> = blocks
        .iter()
        .enumerate()
        .flat_map(|(i, b)| blocks.iter().enumerate().map(move |(j, c)| (i, j, b[0], c[0])))
        .filter(|&(_, _, x, y)| r.contains(x, y))
        .map(|(i, j, _, _)| (i, j))
        .collect();
    PartitionRelationPair::from_blocks(n, &blocks, &leq).expect("classes of a preorder partition the states")
}

/// Definition-level refiner search, used when an inert cycle straddles
/// classes and the pair cannot be handed to the engine.
fn search_refiner(k: &KripkeStructure, pr: &PartitionRelationPair) -> Verdict {
    let p = &pr.partition;
    for &b in p.block_list() {
        let mu_b = pr.mu(b);
        for &c in p.block_list() {
            let members: StateSet = p.members(c).iter().copied().collect();
            if !k.exists_transition(p.members(b), &members) {
                continue;
            }
            let reached = pos_naive(k, &mu_b, &pr.mu(c));
            if let Some(&s) = mu_b.iter().find(|s| !reached.contains(s)) {
                return Verdict::Rejected(Witness::Refiner {
                    block: p.members(b).to_vec(),
                    target: p.members(c).to_vec(),
                    evidence: Evidence::Unreached(s),
                });
            }
        }
    }
    Verdict::Accepted
}

/// A failure of the definition of stuttering simulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DefinitionViolation {
    /// `(state, simulator)` is related across labels.
    Label { state: StateId, simulator: StateId },
    /// `simulator` is related to `from` but cannot match `from -> to`.
    Move {
        from: StateId,
        to: StateId,
        simulator: StateId,
    },
}

/// Is `r` a stuttering simulation? `r` may be any relation.
pub fn check_definition(k: &KripkeStructure, r: &Relation) -> bool {
    find_definition_violation(k, r).is_none()
}

pub fn find_definition_violation(k: &KripkeStructure, r: &Relation) -> Option<DefinitionViolation> {
    assert_eq!(r.size(), k.num_states(), "relation and structure sizes differ");
    if let Some((state, simulator)) = r.pairs().find(|&(x, y)| k.label(x) != k.label(y)) {
        return Some(DefinitionViolation::Label { state, simulator });
    }
    for (from, to) in k.transitions() {
        let sims = r.image(from);
        let reached = pos_naive(k, &sims, &r.image(to));
        if let Some(&simulator) = sims.iter().find(|s| !reached.contains(s)) {
            return Some(DefinitionViolation::Move { from, to, simulator });
        }
    }
    None
}
