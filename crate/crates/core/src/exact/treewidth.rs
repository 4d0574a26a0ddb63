use std::collections::BTreeSet;

/// A vertex elimination order and the induced width it achieves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationOrder {
    pub order: Vec<usize>,
    pub width: usize,
}

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); n];
    for &(i, j) in edges {
        if i != j {
            adj[i].insert(j);
            adj[j].insert(i);
        }
    }
    adj
}

fn vertex_count(edges: &[(usize, usize)]) -> usize {
    edges.iter().map(|&(i, j)| i.max(j) + 1).max().unwrap_or(0)
}

fn fill_in(adj: &[BTreeSet<usize>], v: usize) -> usize {
    let nb: Vec<usize> = adj[v].iter().copied().collect();
    let mut fill = 0;
    for (a, &u) in nb.iter().enumerate() {
        for &w in &nb[a + 1..] {
            if !adj[u].contains(&w) {
                fill += 1;
            }
        }
    }
    fill
}

fn eliminate(adj: &mut [BTreeSet<usize>], v: usize) -> usize {
    let nb: Vec<usize> = adj[v].iter().copied().collect();
    for (a, &u) in nb.iter().enumerate() {
        for &w in &nb[a + 1..] {
            adj[u].insert(w);
            adj[w].insert(u);
        }
    }
    for &u in &nb {
        adj[u].remove(&v);
    }
    adj[v].clear();
    nb.len()
}

/// Greedy min-fill elimination over the vertices touched by `edges`.
///
/// Ties go to the lowest vertex index. The returned width upper-bounds the
/// tree-width of the graph.
pub fn treewidth_upper_bound(edges: &[(usize, usize)]) -> EliminationOrder {
    let n = vertex_count(edges);
    let mut adj = adjacency(n, edges);
    let mut remaining: BTreeSet<usize> = edges.iter().flat_map(|&(i, j)| [i, j]).collect();
    let mut order = Vec::with_capacity(remaining.len());
    let mut width = 0;
    while !remaining.is_empty() {
        let v = *remaining
            .iter()
            .min_by_key(|&&v| (fill_in(&adj, v), v))
            .expect("non-empty");
        width = width.max(eliminate(&mut adj, v));
        remaining.remove(&v);
        order.push(v);
    }
    EliminationOrder { order, width }
}

/// Induced width of `edges` under a given elimination order.
pub fn induced_width(edges: &[(usize, usize)], order: &[usize]) -> usize {
    let n = vertex_count(edges).max(order.iter().map(|v| v + 1).max().unwrap_or(0));
    let mut adj = adjacency(n, edges);
    order
        .iter()
        .map(|&v| eliminate(&mut adj, v))
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn grid(rows: usize, cols: usize) -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    e.push((v, v + 1));
                }
                if r + 1 < rows {
                    e.push((v, v + cols));
                }
            }
        }
        e
    }

    /// Exact tree-width by dynamic programming over vertex subsets
    /// (elimination prefix sets). Small graphs only.
    fn exact_treewidth(n: usize, edges: &[(usize, usize)]) -> usize {
        let mut adj = vec![0u32; n];
        for &(i, j) in edges {
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }
        // q(set, v): vertices outside set ∪ {v} reachable from v through set
        let q = |set: u32, v: usize| -> u32 {
            let mut seen = 1u32 << v;
            let mut stack = vec![v];
            let mut out = 0u32;
            while let Some(u) = stack.pop() {
                let mut nb = adj[u] & !seen;
                while nb != 0 {
                    let w = nb.trailing_zeros() as usize;
                    nb &= nb - 1;
                    seen |= 1 << w;
                    if set >> w & 1 == 1 {
                        stack.push(w);
                    } else {
                        out |= 1 << w;
                    }
                }
            }
            out
        };
        let full = (1u32 << n) - 1;
        let mut tw = vec![usize::MAX; 1 << n];
        tw[0] = 0;
        for set in 1..=full {
            let mut best = usize::MAX;
            let mut bits = set;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let rest = set & !(1 << v);
                let cand = tw[rest as usize].max(q(rest, v).count_ones() as usize);
                best = best.min(cand);
            }
            tw[set as usize] = best;
        }
        tw[full as usize]
    }

    #[test]
    fn small_graphs() {
        assert_eq!(treewidth_upper_bound(&[(0, 1), (1, 2), (1, 3)]).width, 1);
        assert_eq!(treewidth_upper_bound(&[(0, 1), (1, 2), (0, 2)]).width, 2);
        assert_eq!(treewidth_upper_bound(&[]).width, 0);
        assert!(treewidth_upper_bound(&[]).order.is_empty());
    }

    #[test]
    fn grid_3x3_matches_exact() {
        let g = grid(3, 3);
        assert_eq!(exact_treewidth(9, &g), 3);
        let eo = treewidth_upper_bound(&g);
        assert_eq!(eo.width, 3);
        assert_eq!(induced_width(&g, &eo.order), eo.width);
    }

    fn random_tree(n: usize, seed: u64) -> Vec<(usize, usize)> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (1..n).map(|v| (rng.gen_range(0..v), v)).collect()
    }

    proptest! {
        #[test]
        fn trees_have_width_one(n in 2usize..30, seed in 0u64..10_000) {
            let t = random_tree(n, seed);
            let eo = treewidth_upper_bound(&t);
            prop_assert_eq!(eo.width, 1);
            let mut sorted = eo.order.clone();
            sorted.sort();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), n);
        }

        #[test]
        fn width_is_consistent_and_bounds_exact(seed in 0u64..10_000, extra in 0usize..8) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = 8;
            let mut edges = random_tree(n, seed);
            for _ in 0..extra {
                let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if a != b && !edges.contains(&(a.min(b), a.max(b))) {
                    edges.push((a.min(b), a.max(b)));
                }
            }
            let eo = treewidth_upper_bound(&edges);
            prop_assert_eq!(induced_width(&edges, &eo.order), eo.width);
            prop_assert!(eo.width >= exact_treewidth(n, &edges));
        }

        #[test]
        fn adding_an_edge_to_a_tree_never_lowers_the_bound(n in 3usize..20, seed in 0u64..10_000, a in 0usize..20, b in 0usize..20) {
            let mut t = random_tree(n, seed);
            let before = treewidth_upper_bound(&t).width;
            let (a, b) = (a % n, b % n);
            if a != b && !t.contains(&(a.min(b), a.max(b))) {
                t.push((a.min(b), a.max(b)));
            }
            prop_assert!(treewidth_upper_bound(&t).width >= before);
        }
    }
}
