//! Seeded model generators for the experiment families.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{brute_force_map, local_minima_by_count, BRUTE_MAP_LIMIT};
use crate::ext::{self, INF};
use crate::model::{exclusion_hop, Assignment, Edge, EnergyModel, Hop};

/// Largest grid for which λ is tuned by enumeration.
pub const AUTO_TUNE_LIMIT: usize = 25;

fn check_even(n: usize) -> Result<()> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::input(format!("n must be even and at least 2 (n = {n})")));
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::input(format!("{name} must be positive and finite ({name} = {v})")));
    }
    Ok(())
}

fn check_non_negative(name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0 && v.is_finite()) {
        return Err(Error::input(format!("{name} must be non-negative and finite ({name} = {v})")));
    }
    Ok(())
}

fn potts(c: f64) -> [[f64; 2]; 2] {
    [[0.0, c], [c, 0.0]]
}

fn chain_edges(n: usize, c: f64) -> Vec<Edge> {
    (0..n - 1).map(|i| Edge::new(i, i + 1, potts(c))).collect()
}

/// Chain with repulsive tables `(0 c; c 0)`, unaries `(0, ε)` and the
/// all-zero assignment excluded. The MAP is 1⃗ with energy nε, while LP_∅
/// only reaches ε.
pub fn chain_exclusion(n: usize, c: f64, eps: f64) -> Result<EnergyModel> {
    check_even(n)?;
    check_positive("c", c)?;
    check_positive("eps", eps)?;
    let hop = exclusion_hop(&Assignment::zeros(n), 1)?;
    EnergyModel::new(n, vec![[0.0, eps]; n], chain_edges(n, c), hop)
}

/// Attractive chain with the average-cut HOP `−λ·m·(n−m)`. The MAP energy
/// is min(0, c − λ(n/2)²), LP_∅ gives −λ(n/2)².
pub fn avgcut_chain(n: usize, c: f64, lambda: f64) -> Result<EnergyModel> {
    check_even(n)?;
    check_positive("c", c)?;
    check_non_negative("lambda", lambda)?;
    EnergyModel::new(n, vec![[0.0; 2]; n], chain_edges(n, c), Hop::average_cut(n, lambda))
}

/// Edges of a uniformly random labeled tree on `n` vertices, decoded from a
/// random Prüfer sequence.
pub fn random_tree_edges<R: Rng>(n: usize, rng: &mut R) -> Vec<(usize, usize)> {
    if n < 2 {
        return Vec::new();
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &v in &seq {
        degree[v] += 1;
    }
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &v in &seq {
        let leaf = leaves.pop_first().expect("a tree always has a leaf");
        edges.push((leaf.min(v), leaf.max(v)));
        degree[v] -= 1;
        if degree[v] == 1 {
            leaves.insert(v);
        }
    }
    let a = leaves.pop_first().unwrap();
    let b = leaves.pop_first().unwrap();
    edges.push((a, b));
    edges.sort();
    edges
}

/// Random tree with attractive tables `(0 λ; λ 0)`, unaries `(0, u)` with
/// u ~ U[0, 1), and the Hamming ball of radius k − 1 around 0⃗ excluded.
pub fn hamming_tree(n: usize, lambda: f64, k: usize, seed: u64) -> Result<EnergyModel> {
    if n == 0 {
        return Err(Error::input("n must be at least 1"));
    }
    check_non_negative("lambda", lambda)?;
    let hop = exclusion_hop(&Assignment::zeros(n), k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tree = random_tree_edges(n, &mut rng);
    let unary = (0..n).map(|_| [0.0, rng.gen::<f64>()]).collect();
    let edges = tree.into_iter().map(|(i, j)| Edge::new(i, j, potts(lambda))).collect();
    EnergyModel::new(n, unary, edges, hop)
}

/// 4-connected grid edges, vertex `r·cols + c`.
pub fn grid_edges(rows: usize, cols: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    edges.sort();
    edges
}

/// Average-cut grid: tables `(0 c; c 0)` with c ~ U(0, 1], θ_0(0) = ∞ and
/// f(m) = −λ·m·(n−m). Without `lambda`, λ is tuned so the MAP energy is 0.
pub fn avgcut_grid(rows: usize, cols: usize, seed: u64, lambda: Option<f64>) -> Result<EnergyModel> {
    let n = rows * cols;
    if n < 2 {
        return Err(Error::input("the grid needs at least two cells"));
    }
    if lambda.is_none() && n > AUTO_TUNE_LIMIT {
        return Err(Error::input(format!(
            "automatic lambda needs rows*cols <= {AUTO_TUNE_LIMIT} (got {n}); pass lambda explicitly"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<Edge> = grid_edges(rows, cols)
        .into_iter()
        .map(|(i, j)| Edge::new(i, j, potts(1.0 - rng.gen::<f64>())))
        .collect();
    let mut unary = vec![[0.0; 2]; n];
    unary[0][0] = INF;
    let base = EnergyModel::new(n, unary, edges, Hop::zero(n))?;
    let lambda = match lambda {
        Some(l) => {
            check_non_negative("lambda", l)?;
            l
        }
        None => zero_optimum_lambda(&base)?,
    };
    base.with_hop(Hop::average_cut(n, lambda))
}

/// Largest λ for which the average-cut model over `base`'s local terms has
/// MAP energy 0 (reached by 1⃗ when the local terms vanish there).
///
/// With C_m the least local energy over assignments with m ones, the
/// energy is non-negative iff C_m ≥ λ·m·(n−m) for 0 < m < n, so
/// λ* = min_m C_m / (m·(n−m)). The result is checked against brute force.
pub fn zero_optimum_lambda(base: &EnergyModel) -> Result<f64> {
    let n = base.n();
    if n > BRUTE_MAP_LIMIT.min(AUTO_TUNE_LIMIT) {
        return Err(Error::TooLarge {
            what: "lambda tuning",
            n,
            limit: AUTO_TUNE_LIMIT,
        });
    }
    let c = local_minima_by_count(base)?;
    let lambda = (1..n)
        .filter(|&m| ext::is_finite(c[m]))
        .map(|m| c[m] / (m * (n - m)) as f64)
        .fold(f64::INFINITY, f64::min);
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::input("no non-negative lambda gives a zero optimum"));
    }
    let (_, map) = brute_force_map(&base.with_hop(Hop::average_cut(n, lambda))?)?;
    if map.abs() > 1e-9 {
        return Err(Error::input(format!("tuned lambda {lambda} leaves MAP energy {map}")));
    }
    Ok(lambda)
}
