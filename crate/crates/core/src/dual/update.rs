//! Monotone block updates.
//!
//! Forbidden entries in a block's context are replaced by a large finite
//! penalty (see [`ext::soften`]) before the update, so messages stay finite
//! while the reparameterized terms keep the sentinel through saturation.

use super::state::DualState;
use crate::error::{Error, Result};
use crate::ext;
use crate::hop::{blocks_of, Block, EdgeSet, HopEngine, HopTerms};
use crate::model::{EnergyModel, PairTable};

/// η_i: θ̃_i without the message from model edge `skip`.
fn unary_context(model: &EnergyModel, edge_set: &EdgeSet, state: &DualState, v: usize, skip: Option<usize>) -> [f64; 2] {
    let mut eta = model.unary()[v];
    for (k, e) in model.edges().iter().enumerate() {
        if Some(k) == skip || (e.i != v && e.j != v) {
            continue;
        }
        let side = (e.j == v) as usize;
        for a in 0..2 {
            eta[a] = ext::add(eta[a], state.lambda[k][side][a]);
        }
    }
    if let Some(p) = edge_set.singleton_position(v) {
        for a in 0..2 {
            eta[a] = ext::add(eta[a], state.delta_node[p][a]);
        }
    }
    eta
}

/// MPLP-style update of the two messages on model edge `edge`.
///
/// With G(x_i, x_j) = θ_ij + [ij∈S] δ_ij + η_i + η_j this sets
/// λ_{ij→i} = ½ min_{x_j} G − η_i and symmetrically for j, after which the
/// edge's share of the bound equals min G.
pub fn update_pairwise_block(model: &EnergyModel, edge_set: &EdgeSet, state: &mut DualState, edge: usize) {
    let e = &model.edges()[edge];
    let mut eta_i = unary_context(model, edge_set, state, e.i, Some(edge));
    let mut eta_j = unary_context(model, edge_set, state, e.j, Some(edge));
    ext::soften(&mut eta_i);
    ext::soften(&mut eta_j);
    let delta = edge_set.position(e.i, e.j).map(|p| state.delta_edge[p]);
    let mut g = [0.0; 4];
    for a in 0..2 {
        for b in 0..2 {
            let base = ext::add(e.theta[a][b], delta.map_or(0.0, |d| d[a][b]));
            g[2 * a + b] = ext::add(base, eta_i[a] + eta_j[b]);
        }
    }
    if g.iter().all(|v| ext::is_forbidden(*v)) {
        return;
    }
    ext::soften(&mut g);
    for a in 0..2 {
        state.lambda[edge][0][a] = 0.5 * g[2 * a].min(g[2 * a + 1]) - eta_i[a];
        state.lambda[edge][1][a] = 0.5 * g[a].min(g[2 + a]) - eta_j[a];
    }
}

/// Update of every HOP message at once.
///
/// First every vertex covered by S moves its reparameterized unary θ̃_i
/// into the message λ of its first S edge, leaving θ̃_i = 0.
/// With contexts η_c = θ̃_c − δ_c over the N blocks (edges of S and
/// singletons) and F = θ_α + Σ_c η_c, sets δ_c = μ_c / N − η_c where μ_c
/// are the min-marginals of F. Afterwards min θ̃_α = 0 and the blocks hold
/// min F between them.
pub fn update_hop_block(model: &EnergyModel, edge_set: &EdgeSet, state: &mut DualState) -> Result<()> {
    let blocks = blocks_of(edge_set);
    if blocks.is_empty() {
        return Ok(());
    }
    // Each covered vertex hands its whole unary to its first S edge, so the
    // HOP sees it through that edge's context.
    for v in 0..model.n() {
        if !edge_set.covers(v) {
            continue;
        }
        let &(i, j) = edge_set
            .edges()
            .iter()
            .find(|&&(i, j)| i == v || j == v)
            .expect("covered vertices lie on an S edge");
        let k = model.edge_index(i, j).expect("S edges are model edges");
        let mut t = unary_context(model, edge_set, state, v, None);
        // a forbidden label keeps its sentinel; only the finite level moves
        let Some(level) = ext::finite_min(t) else {
            continue;
        };
        for x in t.iter_mut() {
            if ext::is_forbidden(*x) {
                *x = level;
            }
        }
        let side = (j == v) as usize;
        for a in 0..2 {
            state.lambda[k][side][a] -= t[a];
        }
    }
    let mut pair_ctx: Vec<PairTable> = Vec::with_capacity(edge_set.len());
    for &(i, j) in edge_set.edges() {
        let k = model.edge_index(i, j).expect("S edges are model edges");
        let e = &model.edges()[k];
        let [li, lj] = state.lambda[k];
        let mut t = [0.0; 4];
        for a in 0..2 {
            for b in 0..2 {
                t[2 * a + b] = ext::add(e.theta[a][b], -li[a] - lj[b]);
            }
        }
        ext::soften(&mut t);
        pair_ctx.push([[t[0], t[1]], [t[2], t[3]]]);
    }
    let mut node_ctx = Vec::with_capacity(edge_set.singletons().len());
    for &v in edge_set.singletons() {
        let mut eta = model.unary()[v];
        for (k, e) in model.edges().iter().enumerate() {
            if e.i == v || e.j == v {
                let side = (e.j == v) as usize;
                for a in 0..2 {
                    eta[a] = ext::add(eta[a], state.lambda[k][side][a]);
                }
            }
        }
        ext::soften(&mut eta);
        node_ctx.push(eta);
    }
    let terms = HopTerms {
        pairs: edge_set
            .edges()
            .iter()
            .zip(&pair_ctx)
            .map(|(&(i, j), t)| (i, j, *t))
            .collect(),
        unary: edge_set.singletons().iter().copied().zip(node_ctx.iter().copied()).collect(),
    };
    let mut engine = HopEngine::new(model.hop(), model.n(), edge_set.forest(), terms)?;
    let mut mu = engine.min_marginals(&blocks);
    let scale = 1.0 / blocks.len() as f64;
    for (b, m) in blocks.iter().zip(mu.iter_mut()) {
        if m.iter().all(|v| ext::is_forbidden(*v)) {
            return Err(Error::InfeasibleHop(format!("block {b:?} has no feasible value")));
        }
        ext::soften(m);
        match *b {
            Block::Edge(i, j) => {
                let p = edge_set.position(i, j).unwrap();
                for a in 0..2 {
                    for c in 0..2 {
                        state.delta_edge[p][a][c] = scale * m[2 * a + c] - pair_ctx[p][a][c];
                    }
                }
            }
            Block::Node(v) => {
                let p = edge_set.singleton_position(v).unwrap();
                for a in 0..2 {
                    state.delta_node[p][a] = scale * m[a] - node_ctx[p][a];
                }
            }
        }
    }
    Ok(())
}
