//! Energy models over binary variables with one high-order potential.

mod format;

pub use format::{read_model, write_model};

use crate::error::{Error, Result};
use crate::ext::{self, INF};

/// Largest `n` for which an explicit [`Hop::Table`] is accepted.
pub const TABLE_MAX_N: usize = 20;

/// A full binary labelling `x ∈ {0,1}^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(Vec<u8>);

impl Assignment {
    pub fn new(values: Vec<u8>) -> Result<Self> {
        if let Some(p) = values.iter().position(|&v| v > 1) {
            return Err(Error::input(format!(
                "assignment entry {p} is {} (labels are 0/1)",
                values[p]
            )));
        }
        Ok(Assignment(values))
    }

    pub fn zeros(n: usize) -> Self {
        Assignment(vec![0; n])
    }

    pub fn ones(n: usize) -> Self {
        Assignment(vec![1; n])
    }

    /// Decode the `index`-th assignment in lexicographic order (x_0 is the
    /// most significant bit).
    pub fn from_index(index: u64, n: usize) -> Self {
        Assignment(
            (0..n)
                .map(|i| ((index >> (n - 1 - i)) & 1) as u8)
                .collect(),
        )
    }

    pub fn to_index(&self) -> u64 {
        self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.0
    }

    pub fn ones_count(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    pub fn hamming(&self, other: &Assignment) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

impl std::ops::Index<usize> for Assignment {
    type Output = u8;
    fn index(&self, i: usize) -> &u8 {
        &self.0[i]
    }
}

impl std::fmt::Display for Assignment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

pub type PairTable = [[f64; 2]; 2];

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub theta: PairTable,
}

impl Edge {
    pub fn new(i: usize, j: usize, theta: PairTable) -> Self {
        Edge { i, j, theta }
    }

    /// Potential weight used to seed the spanning tree: `max θ_ij − min θ_ij`.
    pub fn spanning_weight(&self) -> f64 {
        let cells = self.theta.iter().flatten().copied();
        let max = cells.clone().fold(f64::NEG_INFINITY, f64::max);
        let min = cells.fold(f64::INFINITY, f64::min);
        ext::normalize(max - min)
    }
}

/// The high-order term θ_α.
#[derive(Debug, Clone, PartialEq)]
pub enum Hop {
    /// θ_α(x) = f(Σ_i x_i XOR flip_i).
    Cardinality { f: Vec<f64>, flip_mask: Vec<bool> },
    /// θ_α(x) = min_k Σ_i w_i^(k) x_i.
    Pattern { patterns: Vec<Vec<f64>> },
    /// Explicit table over all 2^n assignments (lexicographic index).
    Table { values: Vec<f64> },
}

impl Hop {
    pub fn cardinality(f: Vec<f64>) -> Self {
        let n = f.len().saturating_sub(1);
        Hop::Cardinality {
            f,
            flip_mask: vec![false; n],
        }
    }

    /// The all-zero cardinality potential.
    pub fn zero(n: usize) -> Self {
        Hop::cardinality(vec![0.0; n + 1])
    }

    /// Average-cut potential `−λ·m·(n−m)` on the number of ones `m`.
    pub fn average_cut(n: usize, lambda: f64) -> Self {
        Hop::cardinality(
            (0..=n)
                .map(|m| -lambda * m as f64 * (n - m) as f64)
                .collect(),
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Hop::Cardinality { .. } => "cardinality",
            Hop::Pattern { .. } => "pattern",
            Hop::Table { .. } => "table",
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            Hop::Cardinality { f, flip_mask } => {
                if f.len() != n + 1 {
                    return Err(Error::input(format!(
                        "cardinality f has {} entries, expected n+1 = {}",
                        f.len(),
                        n + 1
                    )));
                }
                if flip_mask.len() != n {
                    return Err(Error::input(format!(
                        "flip mask has {} entries, expected {n}",
                        flip_mask.len()
                    )));
                }
                check_energies("hop.f", f)?;
                if f.iter().all(|v| ext::is_forbidden(*v)) {
                    return Err(Error::InfeasibleHop("cardinality f has no finite entry".into()));
                }
            }
            Hop::Pattern { patterns } => {
                if patterns.is_empty() {
                    return Err(Error::input("pattern HOP needs at least one pattern"));
                }
                for (k, w) in patterns.iter().enumerate() {
                    if w.len() != n {
                        return Err(Error::input(format!(
                            "pattern {k} has {} weights, expected {n}",
                            w.len()
                        )));
                    }
                    if w.iter().any(|v| !v.is_finite() || ext::is_forbidden(v.abs())) {
                        return Err(Error::input(format!("pattern {k} has a non-finite weight")));
                    }
                }
            }
            Hop::Table { values } => {
                if n > TABLE_MAX_N {
                    return Err(Error::TooLarge {
                        what: "table HOP",
                        n,
                        limit: TABLE_MAX_N,
                    });
                }
                if values.len() != 1usize << n {
                    return Err(Error::input(format!(
                        "table HOP has {} values, expected 2^{n}",
                        values.len()
                    )));
                }
                check_energies("hop.values", values)?;
                if values.iter().all(|v| ext::is_forbidden(*v)) {
                    return Err(Error::InfeasibleHop("table HOP has no finite entry".into()));
                }
            }
        }
        Ok(())
    }

    /// θ_α(x).
    pub fn value(&self, x: &[u8]) -> f64 {
        match self {
            Hop::Cardinality { f, flip_mask } => {
                let c = x
                    .iter()
                    .zip(flip_mask)
                    .filter(|(&b, &flip)| (b == 1) != flip)
                    .count();
                f[c]
            }
            Hop::Pattern { patterns } => patterns
                .iter()
                .map(|w| {
                    w.iter()
                        .zip(x)
                        .filter(|(_, &b)| b == 1)
                        .map(|(w, _)| *w)
                        .sum::<f64>()
                })
                .fold(f64::INFINITY, f64::min),
            Hop::Table { values } => {
                let idx = x.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
                values[idx]
            }
        }
    }
}

/// Exclusion of the Hamming ball of radius `radius − 1` around `center`:
/// θ_α(x) = ∞ iff Hamming(x, center) < radius.
pub fn exclusion_hop(center: &Assignment, radius: usize) -> Result<Hop> {
    let n = center.len();
    if radius == 0 || radius > n {
        return Err(Error::input(format!(
            "exclusion radius must satisfy 1 <= k <= n (k = {radius}, n = {n})"
        )));
    }
    let f = (0..=n).map(|c| if c < radius { INF } else { 0.0 }).collect();
    Ok(Hop::Cardinality {
        f,
        flip_mask: center.as_slice().iter().map(|&b| b == 1).collect(),
    })
}

pub fn hop_value(hop: &Hop, x: &Assignment) -> f64 {
    hop.value(x.as_slice())
}

fn check_energies(field: &str, values: &[f64]) -> Result<()> {
    for (k, v) in values.iter().enumerate() {
        if v.is_nan() || *v == f64::NEG_INFINITY || *v <= -ext::FORBIDDEN {
            return Err(Error::input(format!("{field}[{k}] = {v} is not allowed")));
        }
    }
    Ok(())
}

fn normalized<const N: usize>(mut t: [f64; N]) -> [f64; N] {
    for v in &mut t {
        *v = ext::normalize(*v);
    }
    t
}

/// Binary pairwise energy with one HOP:
/// E(x) = Σ_i θ_i(x_i) + Σ_ij θ_ij(x_i, x_j) + θ_α(x).
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyModel {
    n: usize,
    unary: Vec<[f64; 2]>,
    edges: Vec<Edge>,
    hop: Hop,
}

impl EnergyModel {
    /// Validates the model and sorts edges by `(i, j)`. Edges given with
    /// `i > j` are flipped (and their table transposed).
    pub fn new(n: usize, unary: Vec<[f64; 2]>, edges: Vec<Edge>, hop: Hop) -> Result<Self> {
        if unary.len() != n {
            return Err(Error::input(format!(
                "{} unary tables for {n} variables",
                unary.len()
            )));
        }
        for (i, u) in unary.iter().enumerate() {
            check_energies(&format!("unary[{i}]"), u)?;
        }
        let mut canon = Vec::with_capacity(edges.len());
        for (k, e) in edges.into_iter().enumerate() {
            if e.i >= n || e.j >= n {
                return Err(Error::input(format!(
                    "edge {k} ({}, {}) out of range for n = {n}",
                    e.i, e.j
                )));
            }
            if e.i == e.j {
                return Err(Error::input(format!("edge {k} is a self loop on {}", e.i)));
            }
            check_energies(&format!("edges[{k}]"), &e.theta.concat())?;
            let theta = e.theta.map(normalized);
            canon.push(if e.i < e.j {
                Edge::new(e.i, e.j, theta)
            } else {
                let t = theta;
                Edge::new(e.j, e.i, [[t[0][0], t[1][0]], [t[0][1], t[1][1]]])
            });
        }
        canon.sort_by_key(|e| (e.i, e.j));
        if let Some(w) = canon.windows(2).find(|w| (w[0].i, w[0].j) == (w[1].i, w[1].j)) {
            return Err(Error::input(format!(
                "duplicate edge ({}, {})",
                w[0].i, w[0].j
            )));
        }
        hop.validate(n)?;
        let hop = match hop {
            Hop::Cardinality { f, flip_mask } => Hop::Cardinality {
                f: f.into_iter().map(ext::normalize).collect(),
                flip_mask,
            },
            Hop::Table { values } => Hop::Table {
                values: values.into_iter().map(ext::normalize).collect(),
            },
            p => p,
        };
        Ok(EnergyModel {
            n,
            unary: unary.into_iter().map(normalized).collect(),
            edges: canon,
            hop,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn unary(&self) -> &[[f64; 2]] {
        &self.unary
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn hop(&self) -> &Hop {
        &self.hop
    }

    /// Index of edge `(i, j)` (either orientation).
    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        let key = (i.min(j), i.max(j));
        self.edges
            .binary_search_by_key(&key, |e| (e.i, e.j))
            .ok()
    }

    /// Same model with a different HOP.
    pub fn with_hop(&self, hop: Hop) -> Result<Self> {
        EnergyModel::new(self.n, self.unary.clone(), self.edges.clone(), hop)
    }

    /// Pairwise and unary part of the energy (no HOP).
    pub fn local_energy(&self, x: &[u8]) -> f64 {
        let mut e = 0.0;
        for (i, u) in self.unary.iter().enumerate() {
            e = ext::add(e, u[x[i] as usize]);
        }
        for edge in &self.edges {
            e = ext::add(e, edge.theta[x[edge.i] as usize][x[edge.j] as usize]);
        }
        e
    }

    /// E(x), saturating at the sentinel.
    pub fn evaluate(&self, x: &[u8]) -> f64 {
        ext::add(self.local_energy(x), self.hop.value(x))
    }

    pub fn check_assignment(&self, x: &Assignment) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::input(format!(
                "assignment has length {}, model has {} variables",
                x.len(),
                self.n
            )));
        }
        Ok(())
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.i].push(e.j);
            adj[e.j].push(e.i);
        }
        adj
    }
}

pub fn evaluate_energy(model: &EnergyModel, x: &Assignment) -> Result<f64> {
    model.check_assignment(x)?;
    Ok(model.evaluate(x.as_slice()))
}
