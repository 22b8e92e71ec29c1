use super::EngineState;
use crate::kripke::StateId;
use crate::partition::BlockId;

impl EngineState {
    /// Splits every block by `s` and extends the bookkeeping to the new
    /// blocks so that `μ`, as a state relation, is unchanged: both parts of
    /// a split block inherit the parent's row and column of `⊴`.
    ///
    /// Returns `(parent, intersection)` for every split block.
    pub fn splitting_procedure(&mut self, s: &[StateId]) -> Vec<(BlockId, BlockId)> {
        let parents = self.pr.partition.split(s);
        if parents.is_empty() {
            return Vec::new();
        }
        let pairs: Vec<(BlockId, BlockId)> = parents
            .iter()
            .map(|&b| (b, self.pr.partition.block(b).intersection.expect("split parent")))
            .collect();
        let ids = self.pr.partition.id_bound();
        self.grow_tables(ids);

        let mut origin: Vec<BlockId> = (0..ids).map(BlockId).collect();
        for &(b, i) in &pairs {
            origin[i.0] = b;
        }
        let list = self.pr.partition.block_list().to_vec();
        for &(b, i) in &pairs {
            for &x in &list {
                let px = origin[x.0];
                let down = self.pr.leq(b, px);
                let up = self.pr.leq(px, b);
                self.pr.rel.set(i, x, down);
                self.pr.rel.set(x, i, up);
            }
        }

        self.update(&pairs);
        self.pr.partition.clear_intersections(&parents);
        self.stats.new_blocks += 2 * pairs.len();
        self.stats.blocks = self.pr.partition.num_blocks();
        pairs
    }

    /// Brings `count`, `bcount`, local bottoms and bottom blocks up to date
    /// after the blocks in `pairs` were split. Relies on the split parents
    /// still knowing their intersection blocks.
    fn update(&mut self, pairs: &[(BlockId, BlockId)]) {
        for row in &mut self.count {
            for &(b, i) in pairs {
                row[i.0] = row[b.0];
            }
        }

        for row in &mut self.bcount {
            for &(b, i) in pairs {
                row[i.0] = row[b.0];
            }
        }
        let list = self.pr.partition.block_list().to_vec();
        for &(b, i) in pairs {
            for &c in &list {
                let before = self.bcount[b.0][c.0];
                let kept: u32 = self
                    .pr
                    .partition
                    .members(b)
                    .iter()
                    .map(|x| self.count[x.0][c.0])
                    .sum();
                self.bcount[b.0][c.0] = kept;
                self.bcount[i.0][c.0] = before - kept;
            }
        }

        for &(b, i) in pairs {
            let p = &self.pr.partition;
            let (inside, outside): (Vec<StateId>, Vec<StateId>) = self.local_bottoms[b.0]
                .iter()
                .partition(|&&x| p.block_of(x) == i);
            self.local_bottoms[b.0] = outside;
            self.local_bottoms[i.0] = inside;
            self.bottom_blocks[i.0] = self.bottom_blocks[b.0].clone();
        }

        // A split bottom block may have kept its bottom states in one part
        // only.
        for &x in &list {
            let old = std::mem::take(&mut self.bottom_blocks[x.0]);
            let mut fresh = Vec::with_capacity(old.len() + 1);
            for c in old {
                match self.pr.partition.block(c).intersection {
                    Some(i) => {
                        if self.has_bottom_state(c, x) {
                            fresh.push(c);
                        }
                        if self.has_bottom_state(i, x) {
                            fresh.push(i);
                        }
                    }
                    None => fresh.push(c),
                }
            }
            self.bottom_blocks[x.0] = fresh;
        }

        // The two parts of a split block are mutually related, so each may
        // hold bottom states of the other's image.
        for &(b, i) in pairs {
            if !self.local_bottoms[b.0].is_empty() {
                self.bottom_blocks[i.0].push(b);
            }
            if !self.local_bottoms[i.0].is_empty() {
                self.bottom_blocks[b.0].push(i);
            }
        }
    }

    /// Does `c` contain a state without transitions into `μ(x)`?
    fn has_bottom_state(&self, c: BlockId, x: BlockId) -> bool {
        self.pr
            .partition
            .members(c)
            .iter()
            .any(|s| self.count[s.0][x.0] == 0)
    }
}

#[cfg(test)]
mod tests {
    use crate::engine::EngineState;
    use crate::kripke::fixtures::ids;
    use crate::kripke::{KripkeStructure, Label};
    use crate::partition::PartitionRelationPair;

    #[test]
    fn parts_inherit_the_relation() {
        let p = Label::new(["p"]);
        let labels = vec![p.clone(), p.clone(), p.clone(), p];
        let k = KripkeStructure::new(labels, []).unwrap();
        let pr = PartitionRelationPair::from_blocks(4, &[ids(&[0, 1]), ids(&[2, 3])], &[(0, 1)]).unwrap();
        let mut e = EngineState::with_relation(&k, &pr).unwrap();
        let before = e.state_relation();
        let pairs = e.splitting_procedure(&ids(&[1, 2]));
        assert_eq!(pairs.len(), 2);
        assert_eq!(e.pair().partition.num_blocks(), 4);
        assert_eq!(e.state_relation(), before);
        e.check_invariants().unwrap();
        assert!(e.splitting_procedure(&ids(&[1, 2])).is_empty());
    }
}
