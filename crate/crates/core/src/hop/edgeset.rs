use crate::error::{Error, Result};
use crate::exact::{build_junction_forest, treewidth_upper_bound, JunctionForest};
use crate::model::EnergyModel;

/// The consistency set S ⊆ E with its junction forest.
///
/// The forest covers V(S) through the S-structure and every vertex of
/// V − V(S) through a single-vertex clique, so HOP computations see one
/// forest over all variables.
#[derive(Debug, Clone)]
pub struct EdgeSet {
    n: usize,
    edges: Vec<(usize, usize)>,
    model_index: Vec<usize>,
    covered: Vec<bool>,
    singletons: Vec<usize>,
    forest: JunctionForest,
    tw_bound: usize,
}

impl EdgeSet {
    /// Build S from `(i, j)` pairs that must all be model edges.
    pub fn new(model: &EnergyModel, edges: &[(usize, usize)]) -> Result<Self> {
        let mut list: Vec<(usize, usize, usize)> = Vec::with_capacity(edges.len());
        for &(i, j) in edges {
            let idx = model
                .edge_index(i, j)
                .ok_or_else(|| Error::input(format!("({i}, {j}) is not an edge of the model")))?;
            list.push((i.min(j), i.max(j), idx));
        }
        list.sort();
        list.dedup();
        let pairs: Vec<(usize, usize)> = list.iter().map(|&(i, j, _)| (i, j)).collect();
        Self::from_pairs(model.n(), pairs, list.iter().map(|e| e.2).collect())
    }

    /// Structure over arbitrary vertex pairs (not necessarily model edges).
    pub(crate) fn from_pairs(n: usize, pairs: Vec<(usize, usize)>, model_index: Vec<usize>) -> Result<Self> {
        let order = treewidth_upper_bound(&pairs);
        let mut forest = build_junction_forest(&pairs, &order)?;
        let mut covered = vec![false; n];
        for &(i, j) in &pairs {
            covered[i] = true;
            covered[j] = true;
        }
        let singletons: Vec<usize> = (0..n).filter(|&v| !covered[v]).collect();
        for &v in &singletons {
            forest.add_isolated(v);
        }
        Ok(EdgeSet {
            n,
            edges: pairs,
            model_index,
            covered,
            singletons,
            forest,
            tw_bound: order.width,
        })
    }

    /// S = ∅ (unary consistency only).
    pub fn empty(model: &EnergyModel) -> Self {
        Self::new(model, &[]).expect("empty edge set is always valid")
    }

    /// S = E (full edge consistency).
    pub fn all(model: &EnergyModel) -> Self {
        let pairs: Vec<(usize, usize)> = model.edges().iter().map(|e| (e.i, e.j)).collect();
        Self::new(model, &pairs).expect("model edges are valid")
    }

    /// S ∪ `extra`.
    pub fn with_edges(&self, model: &EnergyModel, extra: &[(usize, usize)]) -> Result<Self> {
        let mut all = self.edges.clone();
        all.extend_from_slice(extra);
        Self::new(model, &all)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges of S, sorted by `(i, j)`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Model edge index of the `k`-th edge of S.
    pub fn model_index(&self, k: usize) -> usize {
        self.model_index[k]
    }

    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        self.edges.binary_search(&(i.min(j), i.max(j))).ok()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.position(i, j).is_some()
    }

    /// Whether `v ∈ V(S)`.
    pub fn covers(&self, v: usize) -> bool {
        self.covered[v]
    }

    /// V − V(S), ascending.
    pub fn singletons(&self) -> &[usize] {
        &self.singletons
    }

    pub fn singleton_position(&self, v: usize) -> Option<usize> {
        self.singletons.binary_search(&v).ok()
    }

    pub fn forest(&self) -> &JunctionForest {
        &self.forest
    }

    /// Min-fill width bound used to build the forest.
    pub fn tw_bound(&self) -> usize {
        self.tw_bound
    }
}
