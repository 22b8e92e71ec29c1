//! Kripke structures: a finite state set, a transition relation and a
//! labelling of states with sets of atomic propositions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Dense index of a state, in `0..num_states`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

impl StateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for StateId {
    fn from(index: usize) -> Self {
        StateId(index)
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of states in ascending order.
pub type StateSet = BTreeSet<StateId>;

/// The set of atomic propositions holding in a state. Two labels are equal
/// iff they contain the same atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(BTreeSet<String>);

impl Label {
    pub fn new<I, S>(atoms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Label(atoms.into_iter().map(Into::into).collect())
    }

    pub fn contains(&self, atom: &str) -> bool {
        self.0.contains(atom)
    }

    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("transition {src} -> {dst} refers to a state outside 0..{num_states}")]
    DanglingTransition {
        src: usize,
        dst: usize,
        num_states: usize,
    },
    #[error("block {block:?} mixes states with different labels")]
    LabelInconsistentBlock { block: Vec<StateId> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeStructure {
    labels: Vec<Label>,
    successors: Vec<Vec<StateId>>,
    predecessors: Vec<Vec<StateId>>,
}

impl KripkeStructure {
    /// Builds a structure with one state per label. Duplicate transitions
    /// are merged.
    pub fn new<I>(labels: Vec<Label>, transitions: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = labels.len();
        let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (src, dst) in transitions {
            if src >= n || dst >= n {
                return Err(ModelError::DanglingTransition {
                    src,
                    dst,
                    num_states: n,
                });
            }
            edges.insert((src, dst));
        }
        let mut successors = vec![Vec::new(); n];
        let mut predecessors = vec![Vec::new(); n];
        for &(src, dst) in &edges {
            successors[src].push(StateId(dst));
            predecessors[dst].push(StateId(src));
        }
        Ok(KripkeStructure {
            labels,
            successors,
            predecessors,
        })
    }

    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.successors.iter().map(Vec::len).sum()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).map(StateId)
    }

    pub fn label(&self, s: StateId) -> &Label {
        &self.labels[s.0]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// Successors of `s` in ascending order.
    pub fn successors(&self, s: StateId) -> &[StateId] {
        &self.successors[s.0]
    }

    /// Predecessors of `s` in ascending order, without duplicates.
    pub fn predecessors(&self, s: StateId) -> &[StateId] {
        &self.predecessors[s.0]
    }

    pub fn has_transition(&self, src: StateId, dst: StateId) -> bool {
        self.successors[src.0].binary_search(&dst).is_ok()
    }

    /// All transitions in ascending `(src, dst)` order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.successors
            .iter()
            .enumerate()
            .flat_map(|(s, succ)| succ.iter().map(move |&t| (StateId(s), t)))
    }

    /// Every atom occurring in some label.
    pub fn atoms(&self) -> BTreeSet<&str> {
        self.labels.iter().flat_map(Label::atoms).collect()
    }

    /// Index of the label class of every state. Classes are numbered in
    /// order of their least member.
    pub fn label_classes(&self) -> Vec<usize> {
        let mut index: BTreeMap<&Label, usize> = BTreeMap::new();
        self.labels
            .iter()
            .map(|l| {
                let next = index.len();
                *index.entry(l).or_insert(next)
            })
            .collect()
    }

    /// The partition induced by the labelling: maximal sets of equally
    /// labelled states, ordered by least member.
    pub fn labeling_partition(&self) -> Vec<Vec<StateId>> {
        let classes = self.label_classes();
        let count = classes.iter().copied().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); count];
        for (s, &c) in classes.iter().enumerate() {
            blocks[c].push(StateId(s));
        }
        blocks
    }

    /// `{ s | exists t in targets. s -> t }`
    pub fn pre_image<'a, I>(&self, targets: I) -> StateSet
    where
        I: IntoIterator<Item = &'a StateId>,
    {
        targets
            .into_iter()
            .flat_map(|t| self.predecessors[t.0].iter().copied())
            .collect()
    }

    /// States of `set` with no transition back into `set`.
    pub fn bottom(&self, set: &StateSet) -> StateSet {
        set.iter()
            .copied()
            .filter(|s| !self.successors[s.0].iter().any(|t| set.contains(t)))
            .collect()
    }

    /// Whether some state of `from` has a transition into `to`.
    pub fn exists_transition(&self, from: &[StateId], to: &StateSet) -> bool {
        from.iter()
            .any(|s| self.successors[s.0].iter().any(|t| to.contains(t)))
    }

    /// Existential lift of the structure to the blocks of a partition. Each
    /// block becomes one state carrying the block's label; block `i` has a
    /// transition to block `j` iff some member of `i` moves to some member of
    /// `j`. This includes `i -> i` when a block has an internal transition.
    pub fn quotient(&self, blocks: &[Vec<StateId>]) -> Result<KripkeStructure, ModelError> {
        let mut block_of = vec![usize::MAX; self.num_states()];
        let mut labels = Vec::with_capacity(blocks.len());
        for (i, block) in blocks.iter().enumerate() {
            let first = block[0];
            if block.iter().any(|s| self.label(*s) != self.label(first)) {
                return Err(ModelError::LabelInconsistentBlock {
                    block: block.clone(),
                });
            }
            labels.push(self.label(first).clone());
            for s in block {
                block_of[s.0] = i;
            }
        }
        debug_assert!(block_of.iter().all(|&b| b != usize::MAX));
        let edges = self
            .transitions()
            .map(|(s, t)| (block_of[s.0], block_of[t.0]));
        KripkeStructure::new(labels, edges)
    }
}
