//! Min, argmin set and block min-marginals of the reparameterized HOP
//!
//! θ̃_α(x) = θ_α(x) − Σ_{ij∈S} δ_ij(x_i, x_j) − Σ_{i∈V−V(S)} δ_i(x_i)
//!
//! over the junction forest of S. Cardinality HOPs use the count-augmented
//! engine (per-component count profiles combined by min-plus convolution);
//! pattern HOPs solve one plain junction problem per pattern and take
//! elementwise minima; explicit tables are enumerated.

mod edgeset;
mod profile;

pub use edgeset::EdgeSet;
pub use profile::{minplus_convolve, CardinalityProfile};

use crate::dual::DualState;
use crate::error::{Error, Result};
use crate::exact::{clique_potentials, JunctionForest, MinSumJunction, BRUTE_MARGINAL_LIMIT};
use crate::ext::{self, INF};
use crate::model::{Assignment, Hop, PairTable};

/// Default cap on the number of stored HOP minimizers.
pub const M_MAX: usize = 100;

/// Assignments within this absolute distance of the minimum are minimizers.
pub const TIE_TOL: f64 = 1e-9;

/// A block attached to the HOP: an edge of S or a singleton of V − V(S).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    Edge(usize, usize),
    Node(usize),
}

impl Block {
    pub fn vertices(&self) -> Vec<usize> {
        match *self {
            Block::Edge(i, j) => vec![i, j],
            Block::Node(i) => vec![i],
        }
    }
}

/// Every block of an edge set: S edges in order, then singletons.
pub fn blocks_of(edge_set: &EdgeSet) -> Vec<Block> {
    edge_set
        .edges()
        .iter()
        .map(|&(i, j)| Block::Edge(i, j))
        .chain(edge_set.singletons().iter().map(|&v| Block::Node(v)))
        .collect()
}

/// Additive terms riding on the HOP: θ_α(x) + Σ pair tables + Σ unary tables.
#[derive(Debug, Clone, Default)]
pub struct HopTerms {
    pub pairs: Vec<(usize, usize, PairTable)>,
    pub unary: Vec<(usize, [f64; 2])>,
}

impl HopTerms {
    /// The message terms of θ̃_α: −δ_ij on S and −δ_i on singletons.
    pub fn from_state(edge_set: &EdgeSet, state: &DualState) -> Self {
        let pairs = edge_set
            .edges()
            .iter()
            .zip(&state.delta_edge)
            .map(|(&(i, j), d)| (i, j, d.map(|r| r.map(|v| -v))))
            .collect();
        let unary = edge_set
            .singletons()
            .iter()
            .zip(&state.delta_node)
            .map(|(&v, d)| (v, d.map(|x| -x)))
            .collect();
        HopTerms { pairs, unary }
    }

    /// θ_α(x) plus all terms, by direct evaluation.
    pub fn evaluate(&self, hop: &Hop, x: &[u8]) -> f64 {
        let mut v = hop.value(x);
        for &(i, j, t) in &self.pairs {
            v = ext::add(v, t[x[i] as usize][x[j] as usize]);
        }
        for &(i, u) in &self.unary {
            v = ext::add(v, u[x[i] as usize]);
        }
        v
    }
}

/// Minimizers of θ̃_α.
#[derive(Debug, Clone, PartialEq)]
pub struct ArgminSet {
    /// Distinct minimizers in lexicographic order.
    pub assignments: Vec<Assignment>,
    /// More than `cap` minimizers exist; only `cap` are stored.
    pub truncated: bool,
    pub cap: usize,
    /// The minimum value.
    pub value: f64,
}

impl ArgminSet {
    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn first(&self) -> Option<&Assignment> {
        self.assignments.first()
    }
}

enum Inner<'f> {
    Counted(MinSumJunction<'f>),
    Patterns(Vec<MinSumJunction<'f>>),
    Table,
}

/// HOP solver over a forest covering every variable and every pair term.
pub struct HopEngine<'a, 'f> {
    hop: &'a Hop,
    n: usize,
    terms: HopTerms,
    inner: Inner<'f>,
    value: f64,
}

impl<'a, 'f> HopEngine<'a, 'f> {
    pub fn new(hop: &'a Hop, n: usize, forest: &'f JunctionForest, terms: HopTerms) -> Result<Self> {
        if forest.vertex_count() != n {
            return Err(Error::input(format!(
                "forest covers {} of {n} variables",
                forest.vertex_count()
            )));
        }
        let (inner, value) = match hop {
            Hop::Cardinality { f, flip_mask } => {
                let psi = clique_potentials(forest, &terms.pairs, &terms.unary);
                let eng = MinSumJunction::new(forest, psi, Some(flip_mask.clone()), f.clone());
                let v = eng.value();
                (Inner::Counted(eng), v)
            }
            Hop::Pattern { patterns } => {
                let engines: Vec<MinSumJunction> = patterns
                    .iter()
                    .map(|w| {
                        let mut unary = terms.unary.clone();
                        unary.extend(w.iter().enumerate().map(|(v, &wv)| (v, [0.0, wv])));
                        let psi = clique_potentials(forest, &terms.pairs, &unary);
                        MinSumJunction::new(forest, psi, None, vec![0.0])
                    })
                    .collect();
                let v = engines.iter().map(|e| e.value()).fold(INF, f64::min);
                (Inner::Patterns(engines), v)
            }
            Hop::Table { .. } => {
                if n > BRUTE_MARGINAL_LIMIT {
                    return Err(Error::TooLarge {
                        what: "table HOP",
                        n,
                        limit: BRUTE_MARGINAL_LIMIT,
                    });
                }
                let v = (0..1u64 << n)
                    .map(|idx| terms.evaluate(hop, Assignment::from_index(idx, n).as_slice()))
                    .fold(INF, f64::min);
                (Inner::Table, v)
            }
        };
        let value = ext::normalize(value);
        if ext::is_forbidden(value) {
            return Err(Error::InfeasibleHop(
                "every assignment of the reparameterized HOP is forbidden".into(),
            ));
        }
        Ok(HopEngine {
            hop,
            n,
            terms,
            inner,
            value,
        })
    }

    /// min_x θ̃_α(x).
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn terms(&self) -> &HopTerms {
        &self.terms
    }

    /// Count profiles of each forest component (cardinality HOPs only),
    /// components ordered by smallest vertex.
    pub fn component_profiles(&self) -> Option<Vec<CardinalityProfile>> {
        match &self.inner {
            Inner::Counted(e) => Some(
                e.component_profiles()
                    .into_iter()
                    .map(|p| CardinalityProfile(p.to_vec()))
                    .collect(),
            ),
            _ => None,
        }
    }

    /// Message/belief table entries created by the engines so far.
    pub fn states_touched(&self) -> usize {
        match &self.inner {
            Inner::Counted(e) => e.states_touched(),
            Inner::Patterns(es) => es.iter().map(|e| e.states_touched()).sum(),
            Inner::Table => 0,
        }
    }

    /// All minimizers (within [`TIE_TOL`]), capped at `cap`.
    pub fn argmin_set(&self, cap: usize) -> ArgminSet {
        let (mut found, mut truncated) = match &self.inner {
            Inner::Counted(e) => e.argmins(self.n, TIE_TOL, cap),
            Inner::Patterns(es) => {
                let mut all = Vec::new();
                let mut trunc = false;
                for e in es {
                    let excess = e.value() - self.value;
                    if excess > TIE_TOL {
                        continue;
                    }
                    let (xs, t) = e.argmins(self.n, TIE_TOL - excess.max(0.0), cap);
                    all.extend(xs);
                    trunc |= t;
                }
                (all, trunc)
            }
            Inner::Table => {
                let mut xs = Vec::new();
                let mut trunc = false;
                for idx in 0..1u64 << self.n {
                    let x = Assignment::from_index(idx, self.n).into_vec();
                    if self.terms.evaluate(self.hop, &x) <= self.value + TIE_TOL {
                        if xs.len() == cap {
                            trunc = true;
                            break;
                        }
                        xs.push(x);
                    }
                }
                (xs, trunc)
            }
        };
        found.retain(|x| self.terms.evaluate(self.hop, x) <= self.value + TIE_TOL);
        found.sort();
        found.dedup();
        if found.len() > cap {
            found.truncate(cap);
            truncated = true;
        }
        ArgminSet {
            assignments: found
                .into_iter()
                .map(|x| Assignment::new(x).expect("binary labels"))
                .collect(),
            truncated,
            cap,
            value: self.value,
        }
    }

    /// μ_c(x_c) = min over x consistent with x_c of θ̃_α(x), one table per
    /// block (edge tables indexed `2·x_i + x_j`).
    pub fn min_marginals(&mut self, blocks: &[Block]) -> Vec<Vec<f64>> {
        match &mut self.inner {
            Inner::Counted(e) => {
                e.run_downward();
                blocks.iter().map(|b| e.marginal(&b.vertices())).collect()
            }
            Inner::Patterns(es) => {
                let mut out: Vec<Vec<f64>> = blocks.iter().map(|b| vec![INF; 1 << b.vertices().len()]).collect();
                for e in es.iter_mut() {
                    e.run_downward();
                    for (b, table) in blocks.iter().zip(out.iter_mut()) {
                        for (t, v) in table.iter_mut().zip(e.marginal(&b.vertices())) {
                            *t = t.min(v);
                        }
                    }
                }
                out
            }
            Inner::Table => {
                let mut out: Vec<Vec<f64>> = blocks.iter().map(|b| vec![INF; 1 << b.vertices().len()]).collect();
                for idx in 0..1u64 << self.n {
                    let x = Assignment::from_index(idx, self.n).into_vec();
                    let v = self.terms.evaluate(self.hop, &x);
                    for (b, table) in blocks.iter().zip(out.iter_mut()) {
                        let key = b.vertices().iter().fold(0usize, |acc, &u| (acc << 1) | x[u] as usize);
                        table[key] = table[key].min(v);
                    }
                }
                out
            }
        }
    }
}

/// min θ̃_α and its argmin set under the dual state.
pub fn hop_min(hop: &Hop, edge_set: &EdgeSet, state: &DualState, cap: usize) -> Result<(f64, ArgminSet)> {
    let engine = HopEngine::new(hop, edge_set.n(), edge_set.forest(), HopTerms::from_state(edge_set, state))?;
    let set = engine.argmin_set(cap);
    Ok((engine.value(), set))
}

/// Block min-marginals of θ̃_α under the dual state.
pub fn hop_min_marginals(
    hop: &Hop,
    edge_set: &EdgeSet,
    state: &DualState,
    blocks: &[Block],
) -> Result<Vec<Vec<f64>>> {
    for b in blocks {
        let attached = match *b {
            Block::Edge(i, j) => edge_set.contains(i, j),
            Block::Node(i) => edge_set.singleton_position(i).is_some(),
        };
        if !attached {
            return Err(Error::input(format!("{b:?} is not attached to the HOP")));
        }
    }
    let mut engine = HopEngine::new(hop, edge_set.n(), edge_set.forest(), HopTerms::from_state(edge_set, state))?;
    Ok(engine.min_marginals(blocks))
}

/// Count profile of one forest component (a junction tree of S or a
/// singleton) for the message terms of θ̃_α.
pub fn component_profile(
    edge_set: &EdgeSet,
    state: &DualState,
    flip_mask: &[bool],
    component: usize,
) -> CardinalityProfile {
    let forest = edge_set.forest();
    let terms = HopTerms::from_state(edge_set, state);
    let psi = clique_potentials(forest, &terms.pairs, &terms.unary);
    let eng = MinSumJunction::new(
        forest,
        psi,
        Some(flip_mask.to_vec()),
        vec![0.0; forest.vertex_count() + 1],
    );
    CardinalityProfile(eng.component_profiles()[component].to_vec())
}
