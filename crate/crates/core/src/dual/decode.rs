use super::state::{reparameterize, DualState};
use crate::exact::junction_min;
use crate::hop::{hop_min, ArgminSet, EdgeSet, M_MAX};
use crate::model::{Assignment, EnergyModel};

/// Best of the rounding candidates under the original energy.
///
/// Candidates are the per-variable argmin of θ̃_i (ties to 0), every stored
/// minimizer of θ̃_α, and the exact minimizer of the S-structure terms θ̃_ij
/// plus all θ̃_i. Equal energies go to the lexicographically smaller one.
pub fn decode(model: &EnergyModel, edge_set: &EdgeSet, state: &DualState) -> Assignment {
    let argmins = hop_min(model.hop(), edge_set, state, M_MAX).map(|(_, a)| a).ok();
    decode_with(model, edge_set, state, argmins.as_ref()).0
}

pub(crate) fn decode_with(
    model: &EnergyModel,
    edge_set: &EdgeSet,
    state: &DualState,
    argmins: Option<&ArgminSet>,
) -> (Assignment, f64) {
    let rep = reparameterize(model, edge_set, state);
    let mut candidates: Vec<Vec<u8>> = Vec::new();
    candidates.push(rep.unary.iter().map(|t| (t[1] < t[0]) as u8).collect());
    if let Some(set) = argmins {
        candidates.extend(set.assignments.iter().map(|a| a.as_slice().to_vec()));
    }
    let pairs: Vec<_> = edge_set
        .edges()
        .iter()
        .enumerate()
        .map(|(k, &(i, j))| (i, j, rep.pairwise[edge_set.model_index(k)]))
        .collect();
    let unary: Vec<_> = rep.unary.iter().copied().enumerate().collect();
    if let Ok(jm) = junction_min(edge_set.forest(), &pairs, &unary, model.n()) {
        candidates.push(jm.argmin);
    }
    let mut best: Option<(f64, Vec<u8>)> = None;
    for x in candidates {
        let e = model.evaluate(&x);
        let better = match &best {
            None => true,
            Some((be, bx)) => e < *be || (e == *be && x < *bx),
        };
        if better {
            best = Some((e, x));
        }
    }
    let (e, x) = best.expect("at least one candidate");
    (Assignment::new(x).expect("binary labels"), e)
}
