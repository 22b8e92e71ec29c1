use std::collections::BTreeSet;

use thiserror::Error;

use super::EngineState;
use crate::kripke::{StateId, StateSet};
use crate::partition::BlockId;
use crate::preprocess::{is_locally_topological, is_reverse_topological};
use crate::reference::pos_naive;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("engine invariant violated: {0}")]
pub struct InvariantViolation(pub String);

impl EngineState {
    /// Recomputes every maintained quantity from scratch and compares it
    /// with the stored one. Meant for tests; quadratic or worse.
    pub fn check_invariants(&self) -> Result<(), InvariantViolation> {
        let fail = |msg: String| Err(InvariantViolation(msg));
        let p = &self.pr.partition;
        if let Err(msg) = p.validate() {
            return fail(msg);
        }
        let list = p.block_list();

        if let Some(b) = self.pr.reflexivity_violation() {
            return fail(format!("{b} is not related to itself"));
        }
        if let Some((b, c, d)) = self.pr.transitivity_violation() {
            return fail(format!("{b} ⊴ {c} ⊴ {d} but not {b} ⊴ {d}"));
        }
        if !is_reverse_topological(&self.pr, list) {
            return fail("block list is not in reverse topological order".into());
        }
        if self.steppable && !is_locally_topological(&self.k, &self.classes, p.state_list()) {
            return fail("state list has a backward transition between equally labelled states".into());
        }

        for &b in list {
            let label = self.classes[p.members(b)[0].0];
            for c in self.pr.above(b) {
                if p.members(c).iter().any(|s| self.classes[s.0] != label) {
                    return fail(format!("{b} ⊴ {c} across labels"));
                }
            }
            if p.block(b).intersection.is_some() {
                return fail(format!("{b} still records an intersection block"));
            }
        }

        for x in self.k.states() {
            for &c in list {
                let expected = self
                    .k
                    .successors(x)
                    .iter()
                    .filter(|&&y| self.pr.leq(c, p.block_of(y)))
                    .count() as u32;
                if self.count[x.0][c.0] != expected {
                    return fail(format!("count({x}, {c}) is {} instead of {expected}", self.count[x.0][c.0]));
                }
            }
        }
        for &b in list {
            for &c in list {
                let expected: u32 = p.members(b).iter().map(|x| self.count[x.0][c.0]).sum();
                if self.bcount[b.0][c.0] != expected {
                    return fail(format!("bcount({b}, {c}) is {} instead of {expected}", self.bcount[b.0][c.0]));
                }
            }
        }

        for &b in list {
            let bottom = self.k.bottom(&self.pr.mu(b));
            let expected: StateSet = p.members(b).iter().copied().filter(|s| bottom.contains(s)).collect();
            let stored: StateSet = self.local_bottoms[b.0].iter().copied().collect();
            if stored.len() != self.local_bottoms[b.0].len() || stored != expected {
                return fail(format!(
                    "local bottoms of {b} are {:?} instead of {expected:?}",
                    self.local_bottoms[b.0]
                ));
            }
            let expected: BTreeSet<BlockId> = self
                .pr
                .above(b)
                .filter(|&c| c != b && p.members(c).iter().any(|s| bottom.contains(s)))
                .collect();
            let stored: BTreeSet<BlockId> = self.bottom_blocks[b.0].iter().copied().collect();
            if stored.len() != self.bottom_blocks[b.0].len() || stored != expected {
                return fail(format!(
                    "bottom blocks of {b} are {:?} instead of {expected:?}",
                    self.bottom_blocks[b.0]
                ));
            }
        }

        let dirty = |marks: &[bool]| marks.iter().any(|&m| m);
        if dirty(&self.state_mark1) || dirty(&self.state_mark2) || dirty(&self.block_mark) || dirty(&self.block_mark2) {
            return fail("marks left set".into());
        }
        Ok(())
    }

    /// Every refiner of the current pair, found from the definition.
    pub fn brute_force_refiners(&self) -> Vec<(BlockId, BlockId)> {
        let p = &self.pr.partition;
        let list = p.block_list();
        let mut out = Vec::new();
        for &b in list {
            let mu_b = self.pr.mu(b);
            for &c in list {
                let members: StateSet = p.members(c).iter().copied().collect();
                if !self.k.exists_transition(p.members(b), &members) {
                    continue;
                }
                if !mu_b.is_subset(&pos_naive(&self.k, &mu_b, &self.pr.mu(c))) {
                    out.push((b, c));
                }
            }
        }
        out
    }

    /// Is `(b, c)` a refiner by the bottom-state criterion: some bottom
    /// state of `μ(b)` lies outside `μ(c) ∪ pre(μ(c))`?
    pub fn has_escaping_bottom(&self, b: BlockId, c: BlockId) -> bool {
        let mu_c = self.pr.mu(c);
        let pre = self.k.pre_image(mu_c.iter());
        self.k
            .bottom(&self.pr.mu(b))
            .iter()
            .any(|s: &StateId| !mu_c.contains(s) && !pre.contains(s))
    }
}
