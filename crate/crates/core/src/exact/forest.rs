use std::collections::{BTreeMap, BTreeSet};

use super::treewidth::EliminationOrder;
use crate::error::{Error, Result};

/// A junction forest over the vertices of an edge set.
///
/// Clique vertex lists are sorted. `components` lists each tree's cliques
/// in pre-order (root first); components are sorted by smallest vertex.
#[derive(Debug, Clone, Default)]
pub struct JunctionForest {
    pub cliques: Vec<Vec<usize>>,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    /// Separator with the parent clique (empty for roots).
    pub separators: Vec<Vec<usize>>,
    /// For each input edge, the clique it is assigned to.
    pub edge_clique: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    home: BTreeMap<usize, usize>,
}

impl JunctionForest {
    /// Vertices covered by the forest, ascending.
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.home.keys().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.home.len()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.home.contains_key(&v)
    }

    /// The first clique containing `v`.
    pub fn home_clique(&self, v: usize) -> Option<usize> {
        self.home.get(&v).copied()
    }

    /// The first clique containing every vertex of `vs`.
    pub fn clique_containing(&self, vs: &[usize]) -> Option<usize> {
        let start = self.home_clique(*vs.first()?)?;
        let comp = self.components.iter().find(|c| c.contains(&start))?;
        comp.iter()
            .copied()
            .filter(|&c| vs.iter().all(|v| self.cliques[c].binary_search(v).is_ok()))
            .min()
    }

    pub fn width(&self) -> usize {
        self.cliques.iter().map(|c| c.len()).max().unwrap_or(1).saturating_sub(1)
    }

    /// Add an isolated vertex as its own single-clique tree.
    pub fn add_isolated(&mut self, v: usize) {
        assert!(!self.contains_vertex(v), "vertex {v} already in the forest");
        let c = self.cliques.len();
        self.cliques.push(vec![v]);
        self.parent.push(None);
        self.children.push(Vec::new());
        self.separators.push(Vec::new());
        self.home.insert(v, c);
        let pos = self
            .components
            .partition_point(|comp| self.cliques[comp[0]][0] < v);
        self.components.insert(pos, vec![c]);
    }

    /// Running intersection: the cliques containing any vertex form a
    /// connected subtree, and separators match clique intersections.
    pub fn check_running_intersection(&self) -> bool {
        for v in self.vertices() {
            let holding: Vec<usize> = (0..self.cliques.len())
                .filter(|&c| self.cliques[c].binary_search(&v).is_ok())
                .collect();
            let links = holding
                .iter()
                .filter(|&&c| {
                    self.parent[c].is_some_and(|p| self.cliques[p].binary_search(&v).is_ok())
                })
                .count();
            if links + 1 != holding.len() {
                return false;
            }
        }
        self.parent.iter().enumerate().all(|(c, p)| match p {
            None => self.separators[c].is_empty(),
            Some(p) => {
                let inter: Vec<usize> = self.cliques[c]
                    .iter()
                    .copied()
                    .filter(|v| self.cliques[*p].binary_search(v).is_ok())
                    .collect();
                inter == self.separators[c]
            }
        })
    }
}

/// Build a junction forest for `edges` from an elimination order that covers
/// every endpoint.
pub fn build_junction_forest(edges: &[(usize, usize)], order: &EliminationOrder) -> Result<JunctionForest> {
    let mut pos = BTreeMap::new();
    for (k, &v) in order.order.iter().enumerate() {
        if pos.insert(v, k).is_some() {
            return Err(Error::input(format!("vertex {v} repeated in elimination order")));
        }
    }
    let mut verts = BTreeSet::new();
    for &(i, j) in edges {
        for v in [i, j] {
            if !pos.contains_key(&v) {
                return Err(Error::input(format!(
                    "elimination order does not cover vertex {v}"
                )));
            }
            verts.insert(v);
        }
    }
    let order: Vec<usize> = order.order.iter().copied().filter(|v| verts.contains(v)).collect();

    let mut adj: BTreeMap<usize, BTreeSet<usize>> = verts.iter().map(|&v| (v, BTreeSet::new())).collect();
    for &(i, j) in edges {
        if i != j {
            adj.get_mut(&i).unwrap().insert(j);
            adj.get_mut(&j).unwrap().insert(i);
        }
    }

    // elimination cliques, one node per vertex
    let mut clique: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut parent: BTreeMap<usize, Option<usize>> = BTreeMap::new();
    for &v in &order {
        let nb: Vec<usize> = adj[&v].iter().copied().collect();
        for (a, &u) in nb.iter().enumerate() {
            for &w in &nb[a + 1..] {
                adj.get_mut(&u).unwrap().insert(w);
                adj.get_mut(&w).unwrap().insert(u);
            }
        }
        for &u in &nb {
            adj.get_mut(&u).unwrap().remove(&v);
        }
        let p = nb.iter().copied().min_by_key(|u| pos[u]);
        let mut c: BTreeSet<usize> = nb.into_iter().collect();
        c.insert(v);
        clique.insert(v, c);
        parent.insert(v, p);
    }

    // drop cliques subsumed by a tree neighbour
    loop {
        let mut changed = false;
        let nodes: Vec<usize> = clique.keys().copied().collect();
        for v in nodes {
            let Some(Some(p)) = parent.get(&v).copied() else { continue };
            if clique[&v].is_subset(&clique[&p]) {
                for q in parent.values_mut() {
                    if *q == Some(v) {
                        *q = Some(p);
                    }
                }
                clique.remove(&v);
                parent.remove(&v);
                changed = true;
            } else if clique[&p].is_subset(&clique[&v]) {
                let pp = parent[&p];
                for (&u, q) in parent.iter_mut() {
                    if *q == Some(p) && u != v {
                        *q = Some(v);
                    }
                }
                parent.insert(v, pp);
                clique.remove(&p);
                parent.remove(&p);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    // reindex: components by smallest vertex, cliques in pre-order
    let keys: Vec<usize> = clique.keys().copied().collect();
    let mut kids: BTreeMap<usize, Vec<usize>> = keys.iter().map(|&k| (k, Vec::new())).collect();
    let mut roots = Vec::new();
    for &k in &keys {
        match parent[&k] {
            Some(p) => kids.get_mut(&p).unwrap().push(k),
            None => roots.push(k),
        }
    }
    let subtree_min = |root: usize| -> usize {
        let mut stack = vec![root];
        let mut m = usize::MAX;
        while let Some(u) = stack.pop() {
            m = m.min(*clique[&u].iter().next().unwrap());
            stack.extend(&kids[&u]);
        }
        m
    };
    roots.sort_by_key(|&r| subtree_min(r));

    let mut forest = JunctionForest::default();
    let mut index = BTreeMap::new();
    for &r in &roots {
        let mut comp = Vec::new();
        let mut stack = vec![r];
        while let Some(u) = stack.pop() {
            let c = forest.cliques.len();
            index.insert(u, c);
            forest.cliques.push(clique[&u].iter().copied().collect());
            forest.parent.push(parent[&u].map(|p| index[&p]));
            forest.children.push(Vec::new());
            comp.push(c);
            let mut ks = kids[&u].clone();
            ks.sort_by_key(|&k| std::cmp::Reverse(*clique[&k].iter().next().unwrap()));
            stack.extend(ks);
        }
        forest.components.push(comp);
    }
    for c in 0..forest.cliques.len() {
        if let Some(p) = forest.parent[c] {
            forest.children[p].push(c);
        }
        let sep = match forest.parent[c] {
            Some(p) => forest.cliques[c]
                .iter()
                .copied()
                .filter(|v| forest.cliques[p].binary_search(v).is_ok())
                .collect(),
            None => Vec::new(),
        };
        forest.separators.push(sep);
        for &v in &forest.cliques[c] {
            forest.home.entry(v).or_insert(c);
        }
    }
    forest.edge_clique = edges
        .iter()
        .map(|&(i, j)| {
            forest
                .clique_containing(&[i, j])
                .expect("every edge is covered by an elimination clique")
        })
        .collect();
    Ok(forest)
}
