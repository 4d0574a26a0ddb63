use crate::dual::DualState;
use crate::error::{Error, Result};
use crate::ext::{self, INF};
use crate::hop::{Block, EdgeSet, HopTerms};
use crate::model::{Assignment, EnergyModel, Hop};

pub const BRUTE_MAP_LIMIT: usize = 25;
pub const BRUTE_MARGINAL_LIMIT: usize = 20;

/// Exhaustive MAP. Ties go to the lexicographically smallest assignment.
pub fn brute_force_map(model: &EnergyModel) -> Result<(Assignment, f64)> {
    let n = model.n();
    if n > BRUTE_MAP_LIMIT {
        return Err(Error::TooLarge {
            what: "brute-force MAP",
            n,
            limit: BRUTE_MAP_LIMIT,
        });
    }
    let mut x = vec![0u8; n];
    let mut best = (0u64, f64::INFINITY);
    for idx in 0..(1u64 << n) {
        fill(&mut x, idx);
        let e = model.evaluate(&x);
        if e < best.1 {
            best = (idx, e);
        }
    }
    Ok((Assignment::from_index(best.0, n), ext::normalize(best.1)))
}

/// For every count `m`, the minimum of the unary + pairwise energy over
/// assignments with exactly `m` ones.
pub fn local_minima_by_count(model: &EnergyModel) -> Result<Vec<f64>> {
    let n = model.n();
    if n > BRUTE_MAP_LIMIT {
        return Err(Error::TooLarge {
            what: "per-count enumeration",
            n,
            limit: BRUTE_MAP_LIMIT,
        });
    }
    let mut best = vec![INF; n + 1];
    let mut x = vec![0u8; n];
    for idx in 0..(1u64 << n) {
        fill(&mut x, idx);
        let m = idx.count_ones() as usize;
        let e = model.local_energy(&x);
        if e < best[m] {
            best[m] = e;
        }
    }
    Ok(best)
}

/// μ(x_B) = min over x agreeing with x_B of `value(x)`, by enumeration.
///
/// The table is indexed with the first block vertex as the most significant bit.
pub fn brute_force_min_marginal(
    n: usize,
    block: &[usize],
    mut value: impl FnMut(&[u8]) -> f64,
) -> Result<Vec<f64>> {
    if n > BRUTE_MARGINAL_LIMIT {
        return Err(Error::TooLarge {
            what: "brute-force min-marginals",
            n,
            limit: BRUTE_MARGINAL_LIMIT,
        });
    }
    let mut table = vec![INF; 1 << block.len()];
    let mut x = vec![0u8; n];
    for idx in 0..(1u64 << n) {
        fill(&mut x, idx);
        let key = block.iter().fold(0usize, |acc, &v| (acc << 1) | x[v] as usize);
        let v = value(&x);
        if v < table[key] {
            table[key] = v;
        }
    }
    Ok(table.into_iter().map(ext::normalize).collect())
}

/// Min-marginal of θ̃_α for one block (an edge of S or a singleton outside
/// V(S)) by enumerating every assignment.
pub fn brute_force_hop_min_marginals(
    hop: &Hop,
    edge_set: &EdgeSet,
    state: &DualState,
    block: Block,
) -> Result<Vec<f64>> {
    let vertices = match block {
        Block::Edge(i, j) => {
            if edge_set.position(i, j).is_none() {
                return Err(Error::input(format!("edge ({i}, {j}) is not in S")));
            }
            vec![i, j]
        }
        Block::Node(i) => {
            if !edge_set.singletons().contains(&i) {
                return Err(Error::input(format!("vertex {i} is covered by S")));
            }
            vec![i]
        }
    };
    let terms = HopTerms::from_state(edge_set, state);
    brute_force_min_marginal(edge_set.n(), &vertices, |x| terms.evaluate(hop, x))
}

fn fill(x: &mut [u8], idx: u64) {
    let n = x.len();
    for (i, b) in x.iter_mut().enumerate() {
        *b = ((idx >> (n - 1 - i)) & 1) as u8;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{exclusion_hop, Edge};

    fn chain(n: usize, c: f64, unary: [f64; 2], hop: Hop) -> EnergyModel {
        let edges = (0..n - 1)
            .map(|i| Edge::new(i, i + 1, [[0.0, c], [c, 0.0]]))
            .collect();
        EnergyModel::new(n, vec![unary; n], edges, hop).unwrap()
    }

    #[test]
    fn second_best_by_exclusion() {
        let m = chain(4, 10.0, [0.0, 0.1], exclusion_hop(&Assignment::zeros(4), 1).unwrap());
        let (x, e) = brute_force_map(&m).unwrap();
        assert_eq!(x, Assignment::ones(4));
        assert!((e - 0.4).abs() < 1e-12);
    }

    #[test]
    fn average_cut_splits_in_the_middle() {
        // c − λ(n/2)² = 1 − 1.6 beats the uncut energy 0
        let m = chain(8, 1.0, [0.0, 0.0], Hop::average_cut(8, 0.1));
        let (x, e) = brute_force_map(&m).unwrap();
        assert!((e + 0.6).abs() < 1e-12);
        // (0,0,0,0,1,1,1,1) and its complement tie; the lexicographically smaller wins
        assert_eq!(x.as_slice(), &[0, 0, 0, 0, 1, 1, 1, 1]);
    }

    #[test]
    fn short_average_cut_chain_stays_uncut() {
        // c − λ(n/2)² = 0.6 > 0 for n = 4
        let m = chain(4, 1.0, [0.0, 0.0], Hop::average_cut(4, 0.1));
        let (x, e) = brute_force_map(&m).unwrap();
        assert_eq!(e, 0.0);
        assert_eq!(x, Assignment::zeros(4));
    }

    #[test]
    fn single_variable() {
        let m = EnergyModel::new(1, vec![[0.0, -1.0]], vec![], Hop::zero(1)).unwrap();
        let (x, e) = brute_force_map(&m).unwrap();
        assert_eq!(x.as_slice(), &[1]);
        assert_eq!(e, -1.0);
    }

    #[test]
    fn refuses_large_models() {
        let m = EnergyModel::new(26, vec![[0.0; 2]; 26], vec![], Hop::zero(26)).unwrap();
        assert!(matches!(
            brute_force_map(&m),
            Err(Error::TooLarge { limit: 25, .. })
        ));
    }

    #[test]
    fn per_count_minima() {
        let m = chain(4, 1.0, [0.0, 0.0], Hop::zero(4));
        assert_eq!(local_minima_by_count(&m).unwrap(), vec![0.0, 1.0, 1.0, 1.0, 0.0]);
    }
}
