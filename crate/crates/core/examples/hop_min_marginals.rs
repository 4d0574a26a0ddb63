//! Min-marginals of a cardinality potential coupled with pairwise terms on
//! a tree, checked against enumeration, plus the argmin set.
//!
//! ```bash
//! cargo run --example hop_min_marginals
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hoplp::exact::brute_force_hop_min_marginals;
use hoplp::generate::random_tree_edges;
use hoplp::hop::{blocks_of, hop_min, hop_min_marginals, M_MAX};
use hoplp::model::{Edge, EnergyModel, Hop};
use hoplp::{DualState, EdgeSet};

fn main() -> hoplp::Result<()> {
    let n = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let edges: Vec<Edge> = random_tree_edges(n, &mut rng)
        .into_iter()
        .map(|(i, j)| Edge::new(i, j, [[0.0; 2]; 2]))
        .collect();
    let f = (0..=n).map(|m| (m as f64 - 3.0).abs() * 0.5).collect();
    let model = EnergyModel::new(n, vec![[0.0; 2]; n], edges, Hop::cardinality(f))?;
    let s = EdgeSet::all(&model);

    // arbitrary messages into the HOP
    let mut state = DualState::zeros(&model, &s);
    state.delta_edge.iter_mut().flatten().flatten().for_each(|v| *v = rng.gen_range(-1.0..1.0));

    let blocks = blocks_of(&s);
    let mu = hop_min_marginals(model.hop(), &s, &state, &blocks)?;
    for (block, m) in blocks.iter().zip(&mu) {
        let brute = brute_force_hop_min_marginals(model.hop(), &s, &state, *block)?;
        let err = m.iter().zip(&brute).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!("{:?}: {:?}  (max deviation {err:.1e})", block.vertices(), m.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>());
    }

    let (min, argmins) = hop_min(model.hop(), &s, &state, M_MAX)?;
    println!("min {min:.4}, {} minimizer(s):", argmins.len());
    for x in &argmins.assignments {
        println!("  {x}");
    }
    Ok(())
}
