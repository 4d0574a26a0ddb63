//! Greedy tightening on an average-cut grid under a tree-width budget.
//!
//! ```bash
//! cargo run --release --example tighten_grid -- 5 6
//! ```
//! Arguments: grid side (default 5) and tree-width budget (default 4).

use hoplp::generate::avgcut_grid;
use hoplp::{tighten_loop, TightenConfig};

fn main() -> hoplp::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let side = args.next().unwrap_or(5);
    let tw_max = args.next().unwrap_or(4);

    // λ picked so that the optimum is zero when the grid is small enough
    let lambda = if side * side <= 25 { None } else { Some(0.02) };
    let model = avgcut_grid(side, side, 1, lambda)?;
    let t = tighten_loop(&model, &TightenConfig { tw_max, ..TightenConfig::default() })?;

    print!("{}", t.trace.to_csv()?);
    println!(
        "{}: bound {:.6}, energy {:.6}, {} edges in S",
        t.outcome,
        t.result.bound(),
        t.result.decoded_energy,
        t.edge_set.len()
    );
    Ok(())
}
