use crate::error::{Error, Result};
use crate::ext;
use crate::hop::{EdgeSet, HopEngine, HopTerms};
use crate::model::{EnergyModel, PairTable};

/// All dual variables of LP_S.
#[derive(Debug, Clone, PartialEq)]
pub struct DualState {
    /// Per model edge `(i, j)`: `[λ_{ij→i}, λ_{ij→j}]`.
    pub lambda: Vec<[[f64; 2]; 2]>,
    /// Per edge of S (in `EdgeSet::edges` order): δ_ij.
    pub delta_edge: Vec<PairTable>,
    /// Per singleton of V − V(S) (in `EdgeSet::singletons` order): δ_i.
    pub delta_node: Vec<[f64; 2]>,
}

impl DualState {
    pub fn zeros(model: &EnergyModel, edge_set: &EdgeSet) -> Self {
        DualState {
            lambda: vec![[[0.0; 2]; 2]; model.edges().len()],
            delta_edge: vec![[[0.0; 2]; 2]; edge_set.len()],
            delta_node: vec![[0.0; 2]; edge_set.singletons().len()],
        }
    }

    pub fn check_dimensions(&self, model: &EnergyModel, edge_set: &EdgeSet) -> Result<()> {
        if self.lambda.len() != model.edges().len()
            || self.delta_edge.len() != edge_set.len()
            || self.delta_node.len() != edge_set.singletons().len()
        {
            return Err(Error::input("dual state dimensions do not match the model and S"));
        }
        Ok(())
    }

    pub fn all_finite(&self) -> bool {
        let l = self.lambda.iter().flatten().flatten();
        let de = self.delta_edge.iter().flatten().flatten();
        let dn = self.delta_node.iter().flatten();
        l.chain(de).chain(dn).all(|v| v.is_finite() && ext::is_finite(v.abs()))
    }

    /// Move to a larger edge set `to ⊇ from` without changing any
    /// reparameterized term.
    ///
    /// New edges start at δ_ij = 0, except that a singleton message δ_i of a
    /// vertex newly covered by S is carried over: it is added to the first
    /// new edge `e` covering `i`, both as δ_e(x_i, ·) and to λ_{e→i}.
    pub fn extend_to(&self, model: &EnergyModel, from: &EdgeSet, to: &EdgeSet) -> DualState {
        let mut next = DualState::zeros(model, to);
        next.lambda = self.lambda.clone();
        for (k, &(i, j)) in from.edges().iter().enumerate() {
            let pos = to.position(i, j).expect("target edge set contains the source");
            next.delta_edge[pos] = self.delta_edge[k];
        }
        for (k, &v) in from.singletons().iter().enumerate() {
            let d = self.delta_node[k];
            if let Some(pos) = to.singleton_position(v) {
                next.delta_node[pos] = d;
                continue;
            }
            let (pos, &(i, j)) = to
                .edges()
                .iter()
                .enumerate()
                .find(|(_, &(i, j))| (i == v || j == v) && !from.contains(i, j))
                .expect("a newly covered vertex has a new edge");
            let e = model.edge_index(i, j).expect("S edges are model edges");
            let side = (v == j) as usize;
            for a in 0..2 {
                next.lambda[e][side][a] += d[a];
                for b in 0..2 {
                    let (xi, xj) = if side == 0 { (a, b) } else { (b, a) };
                    next.delta_edge[pos][xi][xj] += d[a];
                }
            }
        }
        next
    }
}

/// Reparameterized unary and pairwise terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Reparameterization {
    /// θ̃_i = θ_i + Σ_j λ_{ij→i} + [i ∈ V−V(S)] δ_i
    pub unary: Vec<[f64; 2]>,
    /// θ̃_ij = θ_ij − λ_{ij→i} − λ_{ij→j} + [ij ∈ S] δ_ij (model edge order)
    pub pairwise: Vec<PairTable>,
}

pub fn reparameterize(model: &EnergyModel, edge_set: &EdgeSet, state: &DualState) -> Reparameterization {
    let mut unary = model.unary().to_vec();
    let mut pairwise: Vec<PairTable> = model.edges().iter().map(|e| e.theta).collect();
    for (k, e) in model.edges().iter().enumerate() {
        let [li, lj] = state.lambda[k];
        for a in 0..2 {
            unary[e.i][a] = ext::add(unary[e.i][a], li[a]);
            unary[e.j][a] = ext::add(unary[e.j][a], lj[a]);
            for b in 0..2 {
                pairwise[k][a][b] = ext::add(pairwise[k][a][b], -li[a] - lj[b]);
            }
        }
    }
    for (k, &(i, j)) in edge_set.edges().iter().enumerate() {
        let e = model.edge_index(i, j).expect("S edges are model edges");
        for a in 0..2 {
            for b in 0..2 {
                pairwise[e][a][b] = ext::add(pairwise[e][a][b], state.delta_edge[k][a][b]);
            }
        }
    }
    for (k, &v) in edge_set.singletons().iter().enumerate() {
        for a in 0..2 {
            unary[v][a] = ext::add(unary[v][a], state.delta_node[k][a]);
        }
    }
    Reparameterization { unary, pairwise }
}

impl Reparameterization {
    /// Σ_i min θ̃_i + Σ_ij min θ̃_ij.
    pub fn local_bound(&self) -> f64 {
        let u = self.unary.iter().map(|t| ext::min_of(t));
        let p = self.pairwise.iter().map(|t| ext::min_of(&t.concat()));
        u.chain(p).fold(0.0, ext::add)
    }
}

/// B(δ) = Σ_i min θ̃_i + Σ_ij min θ̃_ij + min_x θ̃_α(x).
pub fn dual_bound(model: &EnergyModel, edge_set: &EdgeSet, state: &DualState) -> Result<f64> {
    state.check_dimensions(model, edge_set)?;
    let local = reparameterize(model, edge_set, state).local_bound();
    if ext::is_forbidden(local) {
        return Err(Error::InfeasibleHop(
            "a unary or pairwise term forbids every label".into(),
        ));
    }
    let engine = HopEngine::new(
        model.hop(),
        model.n(),
        edge_set.forest(),
        HopTerms::from_state(edge_set, state),
    )?;
    Ok(local + engine.value())
}
