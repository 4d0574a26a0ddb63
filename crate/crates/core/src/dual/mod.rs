//! Dual of LP_S: messages, reparameterization, the bound B(δ), monotone
//! block-coordinate ascent, decoding and optimality certificates.

mod decode;
mod solve;
mod state;
mod update;

pub use decode::decode;
pub use solve::{solve, solve_from, SolveConfig, SolveResult, SolveStatus};
pub use state::{dual_bound, reparameterize, DualState, Reparameterization};
pub use update::{update_hop_block, update_pairwise_block};
