//! Choosing the consistency set S: a maximum spanning tree to start, then
//! edges ranked by weak cycle agreement (WCA) under a tree-width budget.

mod compare;
mod tighten;

pub use compare::{selection_curve, Criterion, SelectionCurve};
pub use tighten::{tighten_loop, SelectionRecord, SelectionTrace, TightenConfig, TightenOutcome, TightenResult};

use crate::dual::{reparameterize, DualState};
use crate::error::{Error, Result};
use crate::exact::treewidth_upper_bound;
use crate::ext;
use crate::hop::{ArgminSet, EdgeSet, HopEngine, HopTerms, M_MAX};
use crate::model::{EnergyModel, PairTable};

/// Scores at or below this count as zero.
pub const WCA_EPS: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeScore {
    pub edge: (usize, usize),
    pub wca: f64,
    pub spanning_weight: f64,
    /// S ∪ {edge} stays within the tree-width budget.
    pub admissible: bool,
    /// Scored against a truncated argmin set, so `wca` may overstate.
    pub truncated: bool,
}

/// Edges of a maximum-weight spanning forest under w_ij = max θ_ij − min θ_ij.
///
/// Kruskal with heavier edges first and equal weights in lexicographic order.
pub fn max_spanning_forest(model: &EnergyModel) -> Vec<(usize, usize)> {
    let mut order: Vec<(f64, usize, usize)> = model
        .edges()
        .iter()
        .map(|e| (e.spanning_weight(), e.i, e.j))
        .collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut parent: Vec<usize> = (0..model.n()).collect();
    fn root(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut picked = Vec::new();
    for (_, i, j) in order {
        let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
        if ri != rj {
            parent[ri] = rj;
            picked.push((i, j));
        }
    }
    picked.sort();
    picked
}

/// The starting S: a maximum spanning forest.
pub fn initial_tree(model: &EnergyModel) -> EdgeSet {
    EdgeSet::new(model, &max_spanning_forest(model)).expect("forest edges are model edges")
}

/// min over stored minimizers of θ̃_ij(x_i, x_j), minus min θ̃_ij.
pub fn wca_score(edge: (usize, usize), argmins: &ArgminSet, table: &PairTable) -> Result<f64> {
    if argmins.is_empty() {
        return Err(Error::input("WCA needs at least one minimizer"));
    }
    let (i, j) = edge;
    let at_argmins = argmins
        .assignments
        .iter()
        .map(|x| table[x[i] as usize][x[j] as usize])
        .fold(f64::INFINITY, f64::min);
    let overall = ext::min_of(&table.concat());
    if ext::is_forbidden(overall) {
        return Ok(0.0);
    }
    Ok(ext::normalize(at_argmins - overall).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectConfig {
    /// Edges added per call.
    pub k: usize,
    pub tw_max: usize,
    pub wca_eps: f64,
    pub m_max: usize,
}

impl Default for SelectConfig {
    fn default() -> Self {
        SelectConfig {
            k: 8,
            tw_max: 6,
            wca_eps: WCA_EPS,
            m_max: M_MAX,
        }
    }
}

/// Minimizers of θ̃_α with the θ̃ tables of `absorbed` model edges added on.
struct Absorbed<'m> {
    model: &'m EnergyModel,
    edge_set: &'m EdgeSet,
    state: &'m DualState,
    pairwise: Vec<PairTable>,
}

impl Absorbed<'_> {
    fn argmins(&self, absorbed: &[usize], cap: usize) -> Result<ArgminSet> {
        let mut terms = HopTerms::from_state(self.edge_set, self.state);
        let mut pairs: Vec<(usize, usize)> = self.edge_set.edges().to_vec();
        let mut index: Vec<usize> = (0..pairs.len()).map(|k| self.edge_set.model_index(k)).collect();
        for &k in absorbed {
            let e = &self.model.edges()[k];
            terms.pairs.push((e.i, e.j, self.pairwise[k]));
            pairs.push((e.i, e.j));
            index.push(k);
        }
        if absorbed.is_empty() {
            let engine = HopEngine::new(self.model.hop(), self.model.n(), self.edge_set.forest(), terms)?;
            return Ok(engine.argmin_set(cap));
        }
        let structure = EdgeSet::from_pairs(self.model.n(), pairs, index)?;
        let engine = HopEngine::new(self.model.hop(), self.model.n(), structure.forest(), terms)?;
        Ok(engine.argmin_set(cap))
    }
}

/// WCA and admissibility of every model edge outside S ∪ `picked`.
pub fn score_edges(
    model: &EnergyModel,
    edge_set: &EdgeSet,
    picked: &[(usize, usize)],
    argmins: &ArgminSet,
    pairwise: &[PairTable],
    tw_max: usize,
) -> Result<Vec<EdgeScore>> {
    let mut base: Vec<(usize, usize)> = edge_set.edges().to_vec();
    base.extend_from_slice(picked);
    let mut scores = Vec::new();
    for (k, e) in model.edges().iter().enumerate() {
        let edge = (e.i, e.j);
        if base.contains(&edge) {
            continue;
        }
        let mut trial = base.clone();
        trial.push(edge);
        scores.push(EdgeScore {
            edge,
            wca: wca_score(edge, argmins, &pairwise[k])?,
            spanning_weight: e.spanning_weight(),
            admissible: treewidth_upper_bound(&trial).width <= tw_max,
            truncated: argmins.truncated,
        });
    }
    Ok(scores)
}

/// Outcome of [`select_and_add`].
#[derive(Debug, Clone)]
pub struct Selection {
    pub edge_set: EdgeSet,
    /// Picked edges in order, each scored just before it was picked.
    pub added: Vec<EdgeScore>,
}

/// Add up to `k` edges with the largest WCA, one at a time.
///
/// After each pick the edge's reparameterized table is absorbed into the
/// HOP term for rescoring only; the model and the dual state stay as they
/// are. Scores from a truncated argmin set must exceed 10·`wca_eps`.
pub fn select_and_add(
    model: &EnergyModel,
    edge_set: &EdgeSet,
    state: &DualState,
    config: &SelectConfig,
) -> Result<Selection> {
    let pairwise = reparameterize(model, edge_set, state).pairwise;
    let absorbed = Absorbed {
        model,
        edge_set,
        state,
        pairwise: pairwise.clone(),
    };
    let mut picked: Vec<(usize, usize)> = Vec::new();
    let mut picked_index: Vec<usize> = Vec::new();
    let mut added = Vec::new();
    while added.len() < config.k {
        let argmins = absorbed.argmins(&picked_index, config.m_max)?;
        let threshold = if argmins.truncated {
            10.0 * config.wca_eps
        } else {
            config.wca_eps
        };
        let scores = score_edges(model, edge_set, &picked, &argmins, &pairwise, config.tw_max)?;
        let best = scores
            .into_iter()
            .filter(|s| s.admissible && s.wca > threshold)
            .fold(None::<EdgeScore>, |best, s| match best {
                Some(b) if b.wca >= s.wca => Some(b),
                _ => Some(s),
            });
        let Some(best) = best else { break };
        picked.push(best.edge);
        picked_index.push(model.edge_index(best.edge.0, best.edge.1).unwrap());
        added.push(best);
    }
    let edge_set = edge_set.with_edges(model, &picked)?;
    Ok(Selection { edge_set, added })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::{solve, SolveConfig};
    use crate::model::{Assignment, Edge, Hop};

    fn weighted(n: usize, edges: &[(usize, usize, f64)]) -> EnergyModel {
        let edges = edges.iter().map(|&(i, j, w)| Edge::new(i, j, [[0.0, w], [w, 0.0]])).collect();
        EnergyModel::new(n, vec![[0.0; 2]; n], edges, Hop::zero(n)).unwrap()
    }

    #[test]
    fn equal_weights_on_a_cycle_take_the_smallest_edges() {
        let m = weighted(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)]);
        assert_eq!(max_spanning_forest(&m), vec![(0, 1), (0, 3), (1, 2)]);
    }

    #[test]
    fn triangle_keeps_the_two_heaviest() {
        let m = weighted(3, &[(0, 1, 3.0), (1, 2, 1.0), (0, 2, 2.0)]);
        assert_eq!(max_spanning_forest(&m), vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn disconnected_graph_gives_a_forest() {
        let m = weighted(5, &[(0, 1, 1.0), (2, 3, 1.0), (3, 4, 2.0), (2, 4, 0.5)]);
        assert_eq!(max_spanning_forest(&m), vec![(0, 1), (2, 3), (3, 4)]);
    }

    fn set_of(xs: &[&[u8]], truncated: bool) -> ArgminSet {
        ArgminSet {
            assignments: xs.iter().map(|x| Assignment::new(x.to_vec()).unwrap()).collect(),
            truncated,
            cap: M_MAX,
            value: 0.0,
        }
    }

    #[test]
    fn wca_formula() {
        let a = set_of(&[&[0, 1]], false);
        assert_eq!(wca_score((0, 1), &a, &[[1.0, 1.0], [1.0, 1.0]]).unwrap(), 0.0);
        assert_eq!(wca_score((0, 1), &a, &[[0.0, 5.0], [5.0, 0.0]]).unwrap(), 5.0);
        let b = set_of(&[&[0, 1], &[1, 1]], false);
        assert_eq!(wca_score((0, 1), &b, &[[0.0, 5.0], [5.0, 0.0]]).unwrap(), 0.0);
        assert!(wca_score((0, 1), &set_of(&[], false), &[[0.0; 2]; 2]).is_err());
    }

    #[test]
    fn zero_scores_leave_s_unchanged() {
        let m = weighted(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]);
        let s = initial_tree(&m);
        let r = solve(&m, &s, &SolveConfig::default()).unwrap();
        let sel = select_and_add(&m, &s, &r.final_state, &SelectConfig::default()).unwrap();
        assert!(sel.added.is_empty());
        assert_eq!(sel.edge_set.edges(), s.edges());
    }

    #[test]
    fn frustrated_triangle_adds_its_closing_edge() {
        // three repulsive edges: any tree relaxation is loose, one more edge closes the cycle
        let edges = [(0, 1), (1, 2), (0, 2)].map(|(i, j)| Edge::new(i, j, [[1.0, 0.0], [0.0, 1.0]]));
        let m = EnergyModel::new(3, vec![[0.0; 2]; 3], edges.to_vec(), Hop::zero(3)).unwrap();
        let s = initial_tree(&m);
        let r = solve(&m, &s, &SolveConfig::default()).unwrap();
        assert!(!r.certificate);
        let sel = select_and_add(&m, &s, &r.final_state, &SelectConfig::default()).unwrap();
        assert_eq!(sel.added.len(), 1);
        assert_eq!(sel.added[0].edge, (1, 2));
        assert!(sel.added[0].wca > WCA_EPS);
        let r2 = solve(&m, &sel.edge_set, &SolveConfig::default()).unwrap();
        assert!(r2.bound() > r.bound());
        assert!(r2.certificate);
    }

    #[test]
    fn budget_blocks_wide_additions() {
        let edges = [(0, 1), (1, 2), (0, 2)].map(|(i, j)| Edge::new(i, j, [[1.0, 0.0], [0.0, 1.0]]));
        let m = EnergyModel::new(3, vec![[0.0; 2]; 3], edges.to_vec(), Hop::zero(3)).unwrap();
        let s = initial_tree(&m);
        let r = solve(&m, &s, &SolveConfig::default()).unwrap();
        let cfg = SelectConfig {
            tw_max: 1,
            ..SelectConfig::default()
        };
        let sel = select_and_add(&m, &s, &r.final_state, &cfg).unwrap();
        assert!(sel.added.is_empty());
    }
}
