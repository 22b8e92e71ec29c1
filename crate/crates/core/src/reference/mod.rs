//! Slow, definition-level algorithms used as independent oracles for the
//! refinement engine. Nothing here is tuned for speed; inputs of a few dozen
//! states are the intended scale.

mod basic;
mod ectl;
mod naive;

pub use basic::{basic_ssa, basic_ssa_inspect, basic_ssa_seeded, StSimMap};
pub use ectl::{eval_ectl, EctlError, EctlFormula};
pub use naive::{naive_stuttering_simulation, naive_stuttering_simulation_with, FixpointStrategy};

use crate::kripke::{KripkeStructure, StateSet};

/// States of `s` that can reach `t` along a path whose states, except
/// possibly the last, all lie in `s`. The empty path counts, so `s ∩ t` is
/// always included. Computed by backward reachability from `t`.
pub fn pos_naive(k: &KripkeStructure, s: &StateSet, t: &StateSet) -> StateSet {
    let mut result: StateSet = s.intersection(t).copied().collect();
    let mut frontier: Vec<_> = t.iter().copied().collect();
    while let Some(y) = frontier.pop() {
        for &x in k.predecessors(y) {
            if s.contains(&x) && result.insert(x) {
                frontier.push(x);
            }
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::fixtures::{f1, f2, set};

    #[test]
    fn pos_on_fixtures() {
        let k = f1();
        assert_eq!(pos_naive(&k, &set(&[0, 1, 2]), &set(&[])), set(&[]));
        assert_eq!(pos_naive(&k, &set(&[0]), &set(&[0])), set(&[0]));
        assert_eq!(pos_naive(&k, &set(&[0, 1, 2]), &set(&[3, 4])), set(&[0, 1, 2]));
        assert_eq!(pos_naive(&f2(), &set(&[0, 3]), &set(&[2])), set(&[0]));
    }

    #[test]
    fn pos_needs_the_path_to_stay_inside() {
        // 1 -> 2 -> 4 but 2 is outside the source set.
        assert_eq!(pos_naive(&f1(), &set(&[0, 1]), &set(&[3, 4])), set(&[0]));
    }
}
