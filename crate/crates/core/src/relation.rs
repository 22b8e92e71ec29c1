//! Dense binary relations over the states of a structure.

use std::fmt;

use crate::kripke::{StateId, StateSet};

/// A relation `R ⊆ Σ × Σ` stored as an `n × n` bit table.
#[derive(Clone, PartialEq, Eq)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation {
            n,
            bits: vec![false; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Relation::empty(n);
        for s in 0..n {
            r.bits[s * n + s] = true;
        }
        r
    }

    /// Panics if a pair is out of range.
    pub fn from_pairs<I>(n: usize, pairs: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut r = Relation::empty(n);
        for (x, y) in pairs {
            r.insert(StateId(x), StateId(y));
        }
        r
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, x: StateId, y: StateId) -> bool {
        self.bits[x.0 * self.n + y.0]
    }

    #[inline]
    pub fn insert(&mut self, x: StateId, y: StateId) -> bool {
        let slot = &mut self.bits[x.0 * self.n + y.0];
        !std::mem::replace(slot, true)
    }

    #[inline]
    pub fn remove(&mut self, x: StateId, y: StateId) -> bool {
        std::mem::replace(&mut self.bits[x.0 * self.n + y.0], false)
    }

    /// `R(x) = { y | (x, y) ∈ R }`
    pub fn image(&self, x: StateId) -> StateSet {
        (0..self.n)
            .filter(|&y| self.bits[x.0 * self.n + y])
            .map(StateId)
            .collect()
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        let n = self.n;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (StateId(i / n), StateId(i % n)))
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.n == other.n && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    pub fn union(&self, other: &Relation) -> Relation {
        assert_eq!(self.n, other.n);
        Relation {
            n: self.n,
            bits: self.bits.iter().zip(&other.bits).map(|(&a, &b)| a || b).collect(),
        }
    }

    /// A state `x` with `(x, x) ∉ R`, if any.
    pub fn irreflexive_witness(&self) -> Option<StateId> {
        (0..self.n).map(StateId).find(|&x| !self.contains(x, x))
    }

    /// A triple `(x, y, z)` with `xRy`, `yRz` but not `xRz`, if any.
    pub fn intransitive_witness(&self) -> Option<(StateId, StateId, StateId)> {
        for (x, y) in self.pairs() {
            for z in 0..self.n {
                let z = StateId(z);
                if self.contains(y, z) && !self.contains(x, z) {
                    return Some((x, y, z));
                }
            }
        }
        None
    }

    pub fn is_preorder(&self) -> bool {
        self.irreflexive_witness().is_none() && self.intransitive_witness().is_none()
    }

    /// Reflexive-transitive closure (Warshall).
    pub fn preorder_closure(&self) -> Relation {
        let n = self.n;
        let mut r = self.clone();
        for s in 0..n {
            r.bits[s * n + s] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if r.bits[i * n + k] {
                    for j in 0..n {
                        if r.bits[k * n + j] {
                            r.bits[i * n + j] = true;
                        }
                    }
                }
            }
        }
        r
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.pairs().map(|(x, y)| (x.0, y.0)))
            .finish()
    }
}
