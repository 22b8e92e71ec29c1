//! Stuttering simulation on finite Kripke structures.
//!
//! [`run`] computes the stuttering simulation preorder of a
//! [`KripkeStructure`] by symbolic partition-relation refinement and
//! returns it as a [`SimulationResult`]: the stuttering simulation
//! equivalence classes plus a partial order between them.
//!
//! ```
//! use stsim::{run, KripkeStructure, Label, StateId};
//!
//! let p = Label::new(["p"]);
//! let q = Label::new(["q"]);
//! // 0 -> 1 -> 2 stutters through two p states before reaching q.
//! let k = KripkeStructure::new(vec![p.clone(), p, q], [(0, 1), (1, 2)])?;
//! let sim = run(&k);
//! assert!(sim.equivalent(StateId(0), StateId(1)));
//! # Ok::<(), stsim::ModelError>(())
//! ```
//!
//! The [`reference`] module holds slow definition-level algorithms that
//! the test suite uses as oracles, [`checker`] decides whether a given
//! preorder is the stuttering simulation preorder, and [`io`] reads and
//! writes the text formats used by the command line tool.

pub mod checker;
pub mod engine;
pub mod io;
pub mod kripke;
pub mod partition;
pub mod preprocess;
pub mod random;
pub mod reference;
pub mod relation;
pub mod result;

pub use checker::{check_definition, check_preorder, Verdict};
pub use engine::{run, run_traced, run_with_relation, EngineError, EngineState, RunStats, Step};
pub use kripke::{KripkeStructure, Label, ModelError, StateId, StateSet};
pub use partition::{BlockId, Partition, PartitionRelationPair};
pub use random::generate_random_ks;
pub use relation::Relation;
pub use result::SimulationResult;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/kripke.md")]
    mod kripke {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/pairs.md")]
    mod pairs {}
    #[doc = include_str!("../../../book/src/engine.md")]
    mod engine {}
    #[doc = include_str!("../../../book/src/checking.md")]
    mod checking {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/testing.md")]
    mod testing {}
}
