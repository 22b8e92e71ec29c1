use super::EngineState;
use crate::kripke::StateId;
use crate::partition::BlockId;

impl EngineState {
    /// For every block `B ⊆ s`, removes from `⊴` each `B ⊴ C` with `C`
    /// outside `s`, so that `μ(B)` shrinks to `μ(B) ∩ s`. `s` must be a union
    /// of blocks. Counters, local bottoms and bottom blocks follow the
    /// removed pairs.
    pub fn refine(&mut self, s: &[StateId]) {
        let mut inside = Vec::new();
        for &x in s {
            let b = self.pr.partition.block_of(x);
            if !self.block_mark[b.0] {
                self.block_mark[b.0] = true;
                inside.push(b);
            }
        }
        let list = self.pr.partition.block_list().to_vec();
        let mut reached_zero = Vec::new();

        for &b in &inside {
            for d in &self.bottom_blocks[b.0] {
                self.block_mark2[d.0] = true;
            }
            for &c in &list {
                if self.block_mark[c.0] || !self.pr.leq(b, c) {
                    continue;
                }
                self.pr.rel.set(b, c, false);
                self.forget_transitions_into(c, b);
                if self.block_mark2[c.0] {
                    self.block_mark2[c.0] = false;
                    self.bottom_blocks[b.0].retain(|&d| d != c);
                }
                for &y in self.pr.partition.members(c) {
                    for &x in self.k.predecessors(y) {
                        if self.count[x.0][b.0] == 0 && !self.state_mark1[x.0] {
                            self.state_mark1[x.0] = true;
                            reached_zero.push(x);
                        }
                    }
                }
                for &x in &reached_zero {
                    self.state_mark1[x.0] = false;
                    let d = self.pr.partition.block_of(x);
                    if d == b {
                        self.local_bottoms[b.0].push(x);
                    } else if self.pr.leq(b, d) && !self.block_mark2[d.0] {
                        self.block_mark2[d.0] = true;
                        self.bottom_blocks[b.0].push(d);
                    }
                }
                reached_zero.clear();
            }
            for d in &self.bottom_blocks[b.0] {
                self.block_mark2[d.0] = false;
            }
        }
        for b in inside {
            self.block_mark[b.0] = false;
        }
    }

    /// Transitions into `c` no longer count as transitions into `μ(b)`.
    fn forget_transitions_into(&mut self, c: BlockId, b: BlockId) {
        let p = &self.pr.partition;
        for &y in p.members(c) {
            for &x in self.k.predecessors(y) {
                self.count[x.0][b.0] -= 1;
                self.bcount[p.block_of(x).0][b.0] -= 1;
            }
        }
    }
}
