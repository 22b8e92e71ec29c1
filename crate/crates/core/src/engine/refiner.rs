use super::EngineState;
use crate::kripke::StateId;
use crate::partition::BlockId;

impl EngineState {
    /// Finds a pair `(B, C)` with `B →∃ C` and `μ(B) ⊄ pos(μ(B), μ(C))`, or
    /// `None` if there is none.
    ///
    /// Such a pair exists iff some bottom state of `μ(B)` is outside
    /// `μ(C) ∪ pre(μ(C))`. Bottom states of `μ(B)` inside `B` are the local
    /// bottoms, the others live in the bottom blocks of `B`, where only
    /// block-level counts are consulted. A bottom block `D` that is only
    /// partly outside `pre(μ(C))` is skipped here, but then `D` itself is
    /// split by some refiner `(D, C')`, so the search still succeeds. Once
    /// `(B, C)` is ruled out, every `(B, E)` with `E ⊴ C` is ruled out too,
    /// since `μ(C) ⊆ μ(E)`.
    pub fn find_refiner(&mut self) -> Option<(BlockId, BlockId)> {
        let list = self.pr.partition.block_list().to_vec();
        let ids = self.pr.partition.id_bound();
        let mut ruled_out = vec![false; ids * ids];
        let mut marked = Vec::new();
        let mut found = None;

        'outer: for &c in &list {
            for &y in self.pr.partition.members(c) {
                for &x in self.k.predecessors(y) {
                    let b = self.pr.partition.block_of(x);
                    if !self.block_mark[b.0] {
                        self.block_mark[b.0] = true;
                        marked.push(b);
                    }
                }
            }
            for &b in &list {
                if !self.block_mark[b.0] || ruled_out[b.0 * ids + c.0] {
                    continue;
                }
                if self.is_refiner(b, c) {
                    found = Some((b, c));
                    break 'outer;
                }
                for &e in &list {
                    if self.pr.leq(e, c) {
                        ruled_out[b.0 * ids + e.0] = true;
                    }
                }
            }
            for b in marked.drain(..) {
                self.block_mark[b.0] = false;
            }
        }
        for b in marked.drain(..) {
            self.block_mark[b.0] = false;
        }
        found
    }

    /// Assuming `B →∃ C`: a bottom state of `μ(B)` outside
    /// `μ(C) ∪ pre(μ(C))`, found either among the local bottoms of `B` or
    /// as a bottom block of `B` without transitions into `μ(C)`.
    pub fn refiner_evidence(&self, b: BlockId, c: BlockId) -> Option<RefinerEvidence> {
        if !self.pr.leq(c, b) {
            if let Some(&s) = self.local_bottoms[b.0].iter().find(|s| self.count[s.0][c.0] == 0) {
                return Some(RefinerEvidence::LocalBottom(s));
            }
        }
        self.bottom_blocks[b.0]
            .iter()
            .find(|&&d| !self.pr.leq(c, d) && self.bcount[d.0][c.0] == 0)
            .map(|&d| RefinerEvidence::BottomBlock(d))
    }

    fn is_refiner(&self, b: BlockId, c: BlockId) -> bool {
        self.refiner_evidence(b, c).is_some()
    }
}

/// Why a pair was reported as a refiner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RefinerEvidence {
    /// A state of `B` with no transition into `μ(B)` or `μ(C)`, outside
    /// `μ(C)`.
    LocalBottom(StateId),
    /// A block above `B`, outside `μ(C)`, holding bottom states of `μ(B)`
    /// and without any transition into `μ(C)`.
    BottomBlock(BlockId),
}
