//! The computed stuttering simulation preorder, in partition form.

use crate::engine::RunStats;
use crate::kripke::{KripkeStructure, ModelError, StateId};
use crate::relation::Relation;

/// A preorder on states given by the blocks of its kernel and a partial
/// order between those blocks.
///
/// Blocks are listed by least member and states inside a block ascend.
/// `y` stuttering-simulates `x` iff `block_of(x) ⊴ block_of(y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulationResult {
    blocks: Vec<Vec<StateId>>,
    block_of: Vec<usize>,
    leq: Vec<Vec<bool>>,
    stats: RunStats,
}

impl SimulationResult {
    /// Normalizes a block preorder: mutually related blocks are merged and
    /// blocks are reordered by least member.
    pub(crate) fn from_blocks(num_states: usize, blocks: Vec<Vec<StateId>>, leq: Vec<Vec<bool>>, stats: RunStats) -> Self {
        let n = blocks.len();
        let mut class = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for b in 0..n {
            if class[b] != usize::MAX {
                continue;
            }
            class[b] = classes.len();
            let mut members = vec![b];
            for c in b + 1..n {
                if class[c] == usize::MAX && leq[b][c] && leq[c][b] {
                    class[c] = classes.len();
                    members.push(c);
                }
            }
            classes.push(members);
        }

        let mut merged: Vec<(Vec<StateId>, usize)> = classes
            .iter()
            .enumerate()
            .map(|(i, members)| {
                let mut states: Vec<StateId> = members.iter().flat_map(|&b| blocks[b].iter().copied()).collect();
                states.sort();
                (states, i)
            })
            .collect();
        merged.sort_by_key(|(states, _)| states[0]);

        let mut block_of = vec![0; num_states];
        for (i, (states, _)) in merged.iter().enumerate() {
            for s in states {
                block_of[s.0] = i;
            }
        }
        let leq: Vec<Vec<bool>> = merged
            .iter()
            .map(|(_, a)| merged.iter().map(|(_, b)| leq[classes[*a][0]][classes[*b][0]]).collect())
            .collect();
        SimulationResult {
            blocks: merged.into_iter().map(|(states, _)| states).collect(),
            block_of,
            leq,
            stats: RunStats {
                blocks: n,
                ..stats
            },
        }
    }

    pub fn num_states(&self) -> usize {
        self.block_of.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Classes of stuttering simulation equivalence.
    pub fn blocks(&self) -> &[Vec<StateId>] {
        &self.blocks
    }

    pub fn block_of(&self, s: StateId) -> usize {
        self.block_of[s.0]
    }

    /// Every state of block `b` is simulated by every state of block `c`.
    pub fn block_leq(&self, b: usize, c: usize) -> bool {
        self.leq[b][c]
    }

    /// Pairs `(b, c)` of distinct blocks with `b ⊴ c`, ascending.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.blocks.len();
        (0..n)
            .flat_map(|b| (0..n).map(move |c| (b, c)))
            .filter(|&(b, c)| b != c && self.leq[b][c])
            .collect()
    }

    /// Does `y` stuttering-simulate `x`?
    pub fn simulates(&self, x: StateId, y: StateId) -> bool {
        self.leq[self.block_of[x.0]][self.block_of[y.0]]
    }

    /// Are `x` and `y` stuttering simulation equivalent?
    pub fn equivalent(&self, x: StateId, y: StateId) -> bool {
        self.block_of[x.0] == self.block_of[y.0]
    }

    /// `{ (x, y) | y simulates x }`
    pub fn state_relation(&self) -> Relation {
        let n = self.num_states();
        let mut r = Relation::empty(n);
        for x in 0..n {
            for y in 0..n {
                if self.simulates(StateId(x), StateId(y)) {
                    r.insert(StateId(x), StateId(y));
                }
            }
        }
        r
    }

    /// The structure with every equivalence class merged into one state.
    pub fn quotient(&self, k: &KripkeStructure) -> Result<KripkeStructure, ModelError> {
        k.quotient(&self.blocks)
    }

    pub fn stats(&self) -> RunStats {
        self.stats
    }
}
