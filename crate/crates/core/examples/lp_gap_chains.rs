//! Two chains where the naive relaxation is loose and covering the chain
//! edges in the HOP closes the gap.
//!
//! ```bash
//! cargo run --example lp_gap_chains
//! ```

use hoplp::exact::brute_force_map;
use hoplp::generate::{avgcut_chain, chain_exclusion};
use hoplp::{solve, EdgeSet, EnergyModel, SolveConfig};

fn report(name: &str, model: &EnergyModel) -> hoplp::Result<()> {
    let (_, map) = brute_force_map(model)?;
    let cfg = SolveConfig::default();
    let empty = solve(model, &EdgeSet::empty(model), &cfg)?;
    let full = solve(model, &EdgeSet::all(model), &cfg)?;
    println!("{name}: MAP {map:.4}");
    println!("  S = {{}}   bound {:.4}  certified {}", empty.bound(), empty.certificate);
    println!("  S = E    bound {:.4}  certified {}  decoded {}", full.bound(), full.certificate, full.decoded);
    Ok(())
}

fn main() -> hoplp::Result<()> {
    // exclusion of the all-zero labeling: second best is all ones
    report("exclusion chain n=6", &chain_exclusion(6, 10.0, 0.1)?)?;
    // an average-cut penalty wants the chain split in the middle
    report("average-cut chain n=8", &avgcut_chain(8, 1.0, 0.1)?)?;
    Ok(())
}
