use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::pos_naive;
use crate::kripke::{KripkeStructure, StateId, StateSet};
use crate::relation::Relation;

/// For every state `x`, the set of states currently believed to stuttering
/// simulate `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StSimMap(Vec<StateSet>);

impl StSimMap {
    pub fn get(&self, x: StateId) -> &StateSet {
        &self.0[x.0]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `{ (x, y) | y ∈ StSim(x) }`
    pub fn to_relation(&self) -> Relation {
        let mut r = Relation::empty(self.0.len());
        for (x, sims) in self.0.iter().enumerate() {
            for &y in sims {
                r.insert(StateId(x), y);
            }
        }
        r
    }
}

/// Explicit refinement of simulator sets: start from the labelling classes
/// and, while some transition `x -> y` has `StSim(x) ⊄ pos(StSim(x),
/// StSim(y))`, intersect `StSim(w)` with that `pos` set for every `w` in it.
/// Transitions are scanned in ascending order and the scan restarts after
/// each refinement.
pub fn basic_ssa(k: &KripkeStructure) -> StSimMap {
    basic_ssa_inspect(k, None, |_| {})
}

/// As [`basic_ssa`], but the transitions are shuffled before every scan
/// with a generator seeded by `seed`.
pub fn basic_ssa_seeded(k: &KripkeStructure, seed: u64) -> StSimMap {
    basic_ssa_inspect(k, Some(seed), |_| {})
}

/// Runs the refinement and hands the current map to `inspect` at the start
/// of every iteration, including the final one that finds no refiner.
pub fn basic_ssa_inspect<F>(k: &KripkeStructure, seed: Option<u64>, mut inspect: F) -> StSimMap
where
    F: FnMut(&StSimMap),
{
    let classes = k.labeling_partition();
    let mut map = vec![StateSet::new(); k.num_states()];
    for class in &classes {
        let set: StateSet = class.iter().copied().collect();
        for s in class {
            map[s.0] = set.clone();
        }
    }
    let mut map = StSimMap(map);
    let mut transitions: Vec<(StateId, StateId)> = k.transitions().collect();
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);

    'refine: loop {
        inspect(&map);
        if let Some(rng) = rng.as_mut() {
            transitions.shuffle(rng);
        }
        for &(x, y) in &transitions {
            let sx = map.get(x);
            let splitter = pos_naive(k, sx, map.get(y));
            if !sx.is_subset(&splitter) {
                for &w in &splitter {
                    let refined = map.0[w.0].intersection(&splitter).copied().collect();
                    map.0[w.0] = refined;
                }
                continue 'refine;
            }
        }
        return map;
    }
}
