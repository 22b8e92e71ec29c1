use super::pos_naive;
use crate::kripke::{KripkeStructure, StateId};
use crate::relation::Relation;

/// How violating pairs are removed while iterating towards the greatest
/// fixpoint. Both reach the same relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixpointStrategy {
    /// Collect every violating pair against the current relation, then
    /// delete them all.
    Jacobi,
    /// Delete each violating pair as soon as it is found.
    GaussSeidel,
}

/// The largest stuttering simulation, computed directly from the
/// definition: start from all equally labelled pairs and delete `(s, t)`
/// whenever some move `s -> s'` cannot be answered by a path from `t` that
/// stays related to `s` until it reaches a state related to `s'`.
pub fn naive_stuttering_simulation(k: &KripkeStructure) -> Relation {
    naive_stuttering_simulation_with(k, FixpointStrategy::Jacobi)
}

pub fn naive_stuttering_simulation_with(k: &KripkeStructure, strategy: FixpointStrategy) -> Relation {
    let n = k.num_states();
    let mut r = Relation::empty(n);
    for s in k.states() {
        for t in k.states() {
            if k.label(s) == k.label(t) {
                r.insert(s, t);
            }
        }
    }
    loop {
        let mut doomed = Vec::new();
        for (s, t) in r.pairs().collect::<Vec<_>>() {
            if !answers_every_move(k, &r, s, t) {
                match strategy {
                    FixpointStrategy::Jacobi => doomed.push((s, t)),
                    FixpointStrategy::GaussSeidel => {
                        r.remove(s, t);
                        doomed.push((s, t));
                    }
                }
            }
        }
        if doomed.is_empty() {
            return r;
        }
        if strategy == FixpointStrategy::Jacobi {
            for (s, t) in doomed {
                r.remove(s, t);
            }
        }
    }
}

fn answers_every_move(k: &KripkeStructure, r: &Relation, s: StateId, t: StateId) -> bool {
    let stay = r.image(s);
    k.successors(s)
        .iter()
        .all(|&s2| pos_naive(k, &stay, &r.image(s2)).contains(&t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::fixtures::{f1, f2};

    #[test]
    fn asymmetric_fixture() {
        let r = naive_stuttering_simulation(&f2());
        let mut expected = Relation::identity(5);
        for (x, y) in [(3, 0), (1, 4), (4, 1)] {
            expected.insert(StateId(x), StateId(y));
        }
        assert_eq!(r, expected);
    }

    #[test]
    fn stutter_chain() {
        let r = naive_stuttering_simulation(&f1());
        let mut expected = Relation::empty(5);
        for block in [[0, 1, 2].as_slice(), &[3, 4]] {
            for &x in block {
                for &y in block {
                    expected.insert(StateId(x), StateId(y));
                }
            }
        }
        assert_eq!(r, expected);
    }

    #[test]
    fn strategies_agree() {
        for k in [f1(), f2()] {
            assert_eq!(
                naive_stuttering_simulation_with(&k, FixpointStrategy::Jacobi),
                naive_stuttering_simulation_with(&k, FixpointStrategy::GaussSeidel)
            );
        }
    }

    #[test]
    fn never_drops_below_identity() {
        for k in [f1(), f2()] {
            assert!(Relation::identity(5).is_subset(&naive_stuttering_simulation(&k)));
        }
    }
}
