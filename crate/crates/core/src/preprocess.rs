//! Structural preparation of a structure before refinement: collapsing
//! inert cycles and computing the state and block orders that the engine
//! keeps invariant.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use thiserror::Error;

use crate::kripke::{KripkeStructure, StateId};
use crate::partition::{BlockId, PartitionRelationPair};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PreprocessError {
    #[error("state {0} lies on a cycle of equally labelled states")]
    InertCycle(StateId),
    #[error("block relation has a strict cycle through block {0}")]
    CyclicRelation(BlockId),
}

/// Correspondence between original states and the states of a collapsed
/// structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseMap {
    representative: Vec<StateId>,
    members: Vec<Vec<StateId>>,
}

impl CollapseMap {
    pub fn identity(n: usize) -> Self {
        CollapseMap {
            representative: (0..n).map(StateId).collect(),
            members: (0..n).map(|s| vec![StateId(s)]).collect(),
        }
    }

    /// The collapsed state standing for original state `s`.
    pub fn representative(&self, s: StateId) -> StateId {
        self.representative[s.0]
    }

    /// Original states merged into collapsed state `c`, ascending.
    pub fn members(&self, c: StateId) -> &[StateId] {
        &self.members[c.0]
    }

    pub fn num_original(&self) -> usize {
        self.representative.len()
    }

    pub fn num_collapsed(&self) -> usize {
        self.members.len()
    }

    pub fn is_identity(&self) -> bool {
        self.members.len() == self.representative.len()
    }
}

/// Whether `s -> t` stays inside one class of `classes`.
#[inline]
fn inert(classes: &[usize], s: StateId, t: StateId) -> bool {
    classes[s.0] == classes[t.0]
}

/// Strongly connected components of the inert subgraph, each sorted, listed
/// by least member.
pub fn inert_sccs(k: &KripkeStructure, classes: &[usize]) -> Vec<Vec<StateId>> {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(k.num_states(), k.num_transitions());
    for _ in k.states() {
        g.add_node(());
    }
    for (s, t) in k.transitions() {
        if inert(classes, s, t) {
            g.add_edge(NodeIndex::new(s.0), NodeIndex::new(t.0), ());
        }
    }
    let mut sccs: Vec<Vec<StateId>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut c: Vec<StateId> = c.into_iter().map(|n| StateId(n.index())).collect();
            c.sort();
            c
        })
        .collect();
    sccs.sort_by_key(|c| c[0]);
    sccs
}

/// Collapses every strongly connected component of inert transitions into
/// one state. `classes` assigns each state its class; the labelling
/// partition is the intended argument. The component's least member
/// determines its position, labels are inherited, and transitions are
/// lifted with the resulting inert self-loops dropped.
pub fn collapse_inert_sccs(
    k: &KripkeStructure,
    classes: &[usize],
) -> (KripkeStructure, CollapseMap) {
    let sccs = inert_sccs(k, classes);
    let mut representative = vec![StateId(0); k.num_states()];
    for (c, members) in sccs.iter().enumerate() {
        for s in members {
            representative[s.0] = StateId(c);
        }
    }
    let labels = sccs.iter().map(|c| k.label(c[0]).clone()).collect();
    let edges = k
        .transitions()
        .map(|(s, t)| (representative[s.0].0, representative[t.0].0))
        .filter(|(s, t)| s != t);
    let collapsed = KripkeStructure::new(labels, edges).expect("lifted transitions are in range");
    (
        collapsed,
        CollapseMap {
            representative,
            members: sccs,
        },
    )
}

/// A rank for every state such that every inert transition goes from a
/// lower to a higher rank. Ties are broken by state id, so a structure
/// without inert transitions keeps its natural order.
pub fn inert_topological_rank(
    k: &KripkeStructure,
    classes: &[usize],
) -> Result<Vec<usize>, PreprocessError> {
    let n = k.num_states();
    let mut indegree = vec![0usize; n];
    for (s, t) in k.transitions() {
        if inert(classes, s, t) {
            indegree[t.0] += 1;
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&s| indegree[s] == 0).map(Reverse).collect();
    let mut rank = vec![usize::MAX; n];
    let mut next = 0;
    while let Some(Reverse(s)) = ready.pop() {
        rank[s] = next;
        next += 1;
        for &t in k.successors(StateId(s)) {
            if inert(classes, StateId(s), t) {
                indegree[t.0] -= 1;
                if indegree[t.0] == 0 {
                    ready.push(Reverse(t.0));
                }
            }
        }
    }
    match rank.iter().position(|&r| r == usize::MAX) {
        Some(s) => Err(PreprocessError::InertCycle(StateId(s))),
        None => Ok(rank),
    }
}

/// Orders the states class by class (classes by least member) so that no
/// transition between equally classed states points backwards. Runs in
/// `O(|Σ| log |Σ| + |→|)`.
pub fn sort_states_locally_topological(
    k: &KripkeStructure,
    classes: &[usize],
) -> Result<Vec<StateId>, PreprocessError> {
    let rank = inert_topological_rank(k, classes)?;
    let mut order: Vec<StateId> = k.states().collect();
    order.sort_by_key(|s| (classes[s.0], rank[s.0]));
    Ok(order)
}

/// `TS`: whenever `x` precedes `y` in `list` and both share a class,
/// `y -> x` is not a transition.
pub fn is_locally_topological(k: &KripkeStructure, classes: &[usize], list: &[StateId]) -> bool {
    let mut pos = vec![usize::MAX; k.num_states()];
    for (p, s) in list.iter().enumerate() {
        pos[s.0] = p;
    }
    k.transitions()
        .filter(|&(s, t)| inert(classes, s, t) && pos[s.0] != usize::MAX && pos[t.0] != usize::MAX)
        .all(|(s, t)| pos[s.0] < pos[t.0])
}

/// Orders the block list so that whenever `B ◁ C` holds strictly one way,
/// `C` precedes `B`. Blocks without such a constraint between them keep
/// their current relative order, so the identity relation leaves the list
/// unchanged.
pub fn sort_blocks_reverse_topological(
    pr: &PartitionRelationPair,
) -> Result<Vec<BlockId>, PreprocessError> {
    let list = pr.partition.block_list();
    let n = list.len();
    // must_precede[j] counts blocks that have to come before list[j].
    let mut indegree = vec![0usize; n];
    for (i, &b) in list.iter().enumerate() {
        for (j, &c) in list.iter().enumerate() {
            if i != j && pr.leq(c, b) && !pr.leq(b, c) {
                indegree[j] += 1;
            }
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&j| indegree[j] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(i)) = ready.pop() {
        let b = list[i];
        order.push(b);
        for (j, &c) in list.iter().enumerate() {
            if i != j && pr.leq(c, b) && !pr.leq(b, c) {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    ready.push(Reverse(j));
                }
            }
        }
    }
    if order.len() < n {
        let stuck = (0..n).find(|&j| indegree[j] > 0).expect("some block is left");
        return Err(PreprocessError::CyclicRelation(list[stuck]));
    }
    Ok(order)
}

/// Whether `order` lists `C` before `B` for every one-way pair `B ◁ C`.
pub fn is_reverse_topological(pr: &PartitionRelationPair, order: &[BlockId]) -> bool {
    let mut pos = vec![usize::MAX; pr.partition.id_bound()];
    for (p, b) in order.iter().enumerate() {
        pos[b.0] = p;
    }
    order.iter().all(|&b| {
        order
            .iter()
            .all(|&c| b == c || !pr.leq(b, c) || pr.leq(c, b) || pos[c.0] < pos[b.0])
    })
}
