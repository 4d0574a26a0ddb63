//! Tree-width bounds and exact min-sum inference on a small grid.
//!
//! ```bash
//! cargo run --example junction_tree
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hoplp::exact::{build_junction_forest, junction_min, treewidth_upper_bound};
use hoplp::generate::grid_edges;

fn main() -> hoplp::Result<()> {
    let (rows, cols) = (4, 5);
    let n = rows * cols;
    let edges = grid_edges(rows, cols);
    let order = treewidth_upper_bound(&edges);
    println!("{rows}x{cols} grid: elimination width {}", order.width);

    let forest = build_junction_forest(&edges, &order)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pairs: Vec<_> = edges
        .iter()
        .map(|&(i, j)| {
            let c = rng.gen_range(-1.0..1.0);
            (i, j, [[0.0, c], [c, 0.0]])
        })
        .collect();
    let unary: Vec<_> = (0..n).map(|v| (v, [0.0, rng.gen_range(-0.5..0.5)])).collect();

    let jm = junction_min(&forest, &pairs, &unary, n)?;
    println!("min energy {:.4}", jm.value);
    for r in 0..rows {
        let row: String = jm.argmin[r * cols..(r + 1) * cols].iter().map(|b| if *b == 1 { '#' } else { '.' }).collect();
        println!("  {row}");
    }
    Ok(())
}
