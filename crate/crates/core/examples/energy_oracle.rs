//! Build a small model by hand, evaluate a few assignments and find the
//! exact MAP by enumeration.
//!
//! ```bash
//! cargo run --example energy_oracle
//! ```

use hoplp::exact::brute_force_map;
use hoplp::model::{Assignment, Edge, EnergyModel, Hop};

fn main() -> hoplp::Result<()> {
    let potts = |c: f64| [[0.0, c], [c, 0.0]];
    let model = EnergyModel::new(
        4,
        vec![[0.0, 0.5], [0.3, 0.0], [0.0, 0.0], [0.2, 0.0]],
        vec![Edge::new(0, 1, potts(0.4)), Edge::new(1, 2, potts(0.4)), Edge::new(2, 3, potts(0.4))],
        // prefer exactly two ones
        Hop::cardinality(vec![1.0, 0.5, 0.0, 0.5, 1.0]),
    )?;

    for x in ["0000", "0011", "0111", "1111"] {
        let a = Assignment::new(x.bytes().map(|b| b - b'0').collect())?;
        println!("E({x}) = {:.3}", model.evaluate(a.as_slice()));
    }

    let (x, e) = brute_force_map(&model)?;
    println!("MAP {x} with energy {e:.3}");
    Ok(())
}
