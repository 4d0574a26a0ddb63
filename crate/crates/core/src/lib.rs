//! MAP inference for binary pairwise models with a single high-order
//! potential (HOP), using the family of dual LP relaxations that enforce
//! consistency between the HOP and a chosen set of edges.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`]: energy models, HOP types, energy evaluation, JSON model format.
//! * [`exact`]: exhaustive oracles, min-fill tree-width bounds, junction forests
//!   and a (optionally count-augmented) min-sum junction engine.
//! * [`hop`]: min, argmin set and block min-marginals of the reparameterized HOP.
//! * [`dual`]: dual state, bound, block-coordinate ascent, decoding, certificates.
//! * [`edgesel`]: initial spanning tree, weak cycle agreement, tightening loop.
//! * [`generate`] and [`experiment`]: model families and seeded batch experiments.
//! * [`cli`]: the `hoplp` command line (solve, oracle, tighten, gen, experiment).

pub mod cli;
pub mod dual;
pub mod edgesel;
pub mod error;
pub mod exact;
pub mod experiment;
pub mod ext;
pub mod generate;
pub mod hop;
pub mod model;

pub use dual::{dual_bound, solve, DualState, SolveConfig, SolveResult};
pub use edgesel::{initial_tree, tighten_loop, TightenConfig};
pub use error::{Error, Result};
pub use hop::{ArgminSet, EdgeSet};
pub use model::{Assignment, Edge, EnergyModel, Hop};
