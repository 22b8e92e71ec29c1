//! Seeded random Kripke structures for testing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::kripke::{KripkeStructure, Label};

#[derive(Debug, Error, PartialEq)]
pub enum GenerateError {
    #[error("a structure needs at least one state")]
    NoStates,
    #[error("edge density {0} is outside [0, 1]")]
    Density(f64),
    #[error("at least one label is needed")]
    NoLabels,
}

/// A structure with `num_states` states where every ordered pair, self
/// loops included, is a transition with probability `density`, and every
/// state gets one of `num_labels` labels `{p0}`, `{p1}`, ... uniformly. The
/// same arguments always give the same structure.
pub fn generate_random_ks(
    seed: u64,
    num_states: usize,
    density: f64,
    num_labels: usize,
) -> Result<KripkeStructure, GenerateError> {
    if num_states == 0 {
        return Err(GenerateError::NoStates);
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(GenerateError::Density(density));
    }
    if num_labels == 0 {
        return Err(GenerateError::NoLabels);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = (0..num_states)
        .map(|_| Label::new([format!("p{}", rng.random_range(0..num_labels))]))
        .collect();
    let mut transitions = Vec::new();
    for s in 0..num_states {
        for t in 0..num_states {
            if rng.random_bool(density) {
                transitions.push((s, t));
            }
        }
    }
    Ok(KripkeStructure::new(labels, transitions).expect("generated transitions are in range"))
}
