//! Min-sum inference over a junction forest.
//!
//! [`MinSumJunction`] optionally augments every clique state with a count
//! coordinate: the number of (flip-masked) ones among the vertices summarised
//! by a message. With counting off every table has a single count slot and
//! the engine is the ordinary two-pass min-sum junction tree algorithm.
//!
//! Messages `m_{A→B}(x_sep, k)` count the vertices on A's side of the edge
//! that are not in the separator. A final term `g(K)` on the total count of
//! all forest vertices is applied after combination (for a cardinality HOP,
//! `g = f`).

use std::collections::HashMap;

use super::forest::JunctionForest;
use crate::error::Result;
use crate::ext::{self, INF};
use crate::hop::minplus_convolve;

/// Counted-state message: one profile over counts per separator state.
#[derive(Debug, Clone)]
struct Msg {
    len: usize,
    data: Vec<f64>,
}

impl Msg {
    fn new(states: usize, len: usize) -> Self {
        Msg {
            len,
            data: vec![INF; states * len],
        }
    }

    fn row(&self, s: usize) -> &[f64] {
        &self.data[s * self.len..(s + 1) * self.len]
    }

    fn row_mut(&mut self, s: usize) -> &mut [f64] {
        &mut self.data[s * self.len..(s + 1) * self.len]
    }
}

fn bit(x: usize, b: usize) -> u8 {
    ((x >> b) & 1) as u8
}

/// Index of the sub-assignment of `sub` (sorted vertex list) inside a clique
/// state `x` of `clique`.
fn project(clique: &[usize], sub: &[usize], x: usize) -> usize {
    sub.iter().enumerate().fold(0, |acc, (t, v)| {
        let b = clique.binary_search(v).expect("sub-vertex in clique");
        acc | ((bit(x, b) as usize) << t)
    })
}

/// Sum of pairwise and unary terms per clique (bit `b` of a clique state is
/// the label of `clique[b]`).
pub fn clique_potentials(
    forest: &JunctionForest,
    pairs: &[(usize, usize, [[f64; 2]; 2])],
    unary: &[(usize, [f64; 2])],
) -> Vec<Vec<f64>> {
    let mut psi: Vec<Vec<f64>> = forest.cliques.iter().map(|c| vec![0.0; 1 << c.len()]).collect();
    for &(i, j, t) in pairs {
        let c = forest
            .clique_containing(&[i, j])
            .unwrap_or_else(|| panic!("edge ({i}, {j}) not covered by the forest"));
        let cl = &forest.cliques[c];
        let (bi, bj) = (cl.binary_search(&i).unwrap(), cl.binary_search(&j).unwrap());
        for (x, p) in psi[c].iter_mut().enumerate() {
            *p = ext::add(*p, t[bit(x, bi) as usize][bit(x, bj) as usize]);
        }
    }
    for &(v, u) in unary {
        let c = forest
            .home_clique(v)
            .unwrap_or_else(|| panic!("vertex {v} not covered by the forest"));
        let b = forest.cliques[c].binary_search(&v).unwrap();
        for (x, p) in psi[c].iter_mut().enumerate() {
            *p = ext::add(*p, u[bit(x, b) as usize]);
        }
    }
    psi
}

/// Two-pass min-sum engine with optional count augmentation.
#[derive(Debug, Clone)]
pub struct MinSumJunction<'f> {
    forest: &'f JunctionForest,
    psi: Vec<Vec<f64>>,
    flip: Option<Vec<bool>>,
    final_term: Vec<f64>,
    /// per clique: state -> parent separator state
    sep_self: Vec<Vec<usize>>,
    /// per non-root clique: parent state -> this clique's separator state
    sep_parent: Vec<Vec<usize>>,
    /// per clique: state -> counted ones over the whole clique
    count_all: Vec<Vec<usize>>,
    /// per clique: separator state -> counted ones over the separator
    count_sep: Vec<Vec<usize>>,
    up: Vec<Msg>,
    down: Vec<Msg>,
    beliefs: Vec<Vec<Vec<f64>>>,
    total: Vec<f64>,
    value: f64,
    states_touched: usize,
}

impl<'f> MinSumJunction<'f> {
    /// Runs the upward pass. `flip` enables counting (indexed by global
    /// vertex); `final_term` is indexed by the total count and must have
    /// `vertex_count + 1` entries when counting, one entry otherwise.
    pub fn new(
        forest: &'f JunctionForest,
        psi: Vec<Vec<f64>>,
        flip: Option<Vec<bool>>,
        final_term: Vec<f64>,
    ) -> Self {
        let nc = forest.cliques.len();
        let expect_len = if flip.is_some() { forest.vertex_count() + 1 } else { 1 };
        assert_eq!(final_term.len(), expect_len, "final term length");
        let counted = |v: usize, b: u8| -> usize {
            match &flip {
                Some(f) => ((b == 1) != f[v]) as usize,
                None => 0,
            }
        };
        let mut sep_self = Vec::with_capacity(nc);
        let mut sep_parent = Vec::with_capacity(nc);
        let mut count_all = Vec::with_capacity(nc);
        let mut count_sep = Vec::with_capacity(nc);
        for c in 0..nc {
            let cl = &forest.cliques[c];
            let sep = &forest.separators[c];
            sep_self.push((0..1 << cl.len()).map(|x| project(cl, sep, x)).collect::<Vec<_>>());
            sep_parent.push(match forest.parent[c] {
                Some(p) => {
                    let pc = &forest.cliques[p];
                    (0..1 << pc.len()).map(|x| project(pc, sep, x)).collect()
                }
                None => Vec::new(),
            });
            count_all.push(
                (0..1usize << cl.len())
                    .map(|x| cl.iter().enumerate().map(|(b, &v)| counted(v, bit(x, b))).sum())
                    .collect::<Vec<usize>>(),
            );
            count_sep.push(
                (0..1usize << sep.len())
                    .map(|s| sep.iter().enumerate().map(|(t, &v)| counted(v, bit(s, t))).sum())
                    .collect::<Vec<usize>>(),
            );
        }
        let mut engine = MinSumJunction {
            forest,
            psi,
            flip,
            final_term,
            sep_self,
            sep_parent,
            count_all,
            count_sep,
            up: Vec::new(),
            down: Vec::new(),
            beliefs: Vec::new(),
            total: Vec::new(),
            value: INF,
            states_touched: 0,
        };
        engine.upward();
        engine
    }

    fn counting(&self) -> bool {
        self.flip.is_some()
    }

    /// Counted vertices of the clique that are not in its parent separator.
    fn own_len(&self, c: usize) -> usize {
        if self.counting() {
            self.forest.cliques[c].len() - self.forest.separators[c].len()
        } else {
            0
        }
    }

    fn upward(&mut self) {
        let f = self.forest;
        let nc = f.cliques.len();
        let mut sub_len = vec![0usize; nc];
        self.up = vec![Msg::new(0, 1); nc];
        for comp in &f.components {
            for &c in comp.iter().rev() {
                sub_len[c] = self.own_len(c) + f.children[c].iter().map(|&k| sub_len[k]).sum::<usize>();
                let sep_states = 1 << f.separators[c].len();
                let mut msg = Msg::new(sep_states, sub_len[c] + 1);
                for x in 0..self.psi[c].len() {
                    let p = self.psi[c][x];
                    if ext::is_forbidden(p) {
                        continue;
                    }
                    let acc = self.combine_children(c, x, None);
                    let shift = self.count_all[c][x] - self.count_sep[c][self.sep_self[c][x]];
                    let row = msg.row_mut(self.sep_self[c][x]);
                    for (k, a) in acc.iter().enumerate() {
                        let v = ext::add(p, *a);
                        if v < row[k + shift] {
                            row[k + shift] = v;
                        }
                    }
                }
                self.states_touched += msg.data.len();
                self.up[c] = msg;
            }
        }
        let profiles: Vec<Vec<f64>> = f
            .components
            .iter()
            .map(|comp| self.up[comp[0]].row(0).to_vec())
            .collect();
        self.total = profiles
            .iter()
            .fold(vec![0.0], |acc, p| minplus_convolve(&acc, p));
        self.value = ext::min_of(
            &self
                .total
                .iter()
                .zip(&self.final_term)
                .map(|(a, b)| ext::add(*a, *b))
                .collect::<Vec<_>>(),
        );
    }

    /// Min-plus product of the children's upward messages at clique state
    /// `x`, optionally skipping one child.
    fn combine_children(&self, c: usize, x: usize, skip: Option<usize>) -> Vec<f64> {
        let mut acc = vec![0.0];
        for &k in &self.forest.children[c] {
            if Some(k) == skip {
                continue;
            }
            acc = minplus_convolve(&acc, self.up[k].row(self.sep_parent[k][x]));
        }
        acc
    }

    /// Minimum of the combined objective (all clique terms plus the final
    /// count term).
    pub fn value(&self) -> f64 {
        self.value
    }

    /// Per-component count profiles (components in forest order).
    pub fn component_profiles(&self) -> Vec<&[f64]> {
        self.forest
            .components
            .iter()
            .map(|comp| self.up[comp[0]].row(0))
            .collect()
    }

    /// Min-plus product of all component profiles.
    pub fn total_profile(&self) -> &[f64] {
        &self.total
    }

    /// Number of message/belief table entries created so far.
    pub fn states_touched(&self) -> usize {
        self.states_touched
    }

    /// Runs the downward pass and computes clique beliefs. Required before
    /// [`Self::marginal`].
    pub fn run_downward(&mut self) {
        if !self.beliefs.is_empty() || self.forest.cliques.is_empty() {
            return;
        }
        let f = self.forest;
        let nc = f.cliques.len();
        let profiles: Vec<Vec<f64>> = self.component_profiles().into_iter().map(|p| p.to_vec()).collect();
        let ncomp = profiles.len();
        // outside profile for each component via prefix/suffix products
        let mut prefix = vec![vec![0.0]];
        for p in &profiles {
            prefix.push(minplus_convolve(prefix.last().unwrap(), p));
        }
        let mut suffix = vec![vec![0.0]; ncomp + 1];
        for i in (0..ncomp).rev() {
            suffix[i] = minplus_convolve(&suffix[i + 1], &profiles[i]);
        }
        self.down = vec![Msg::new(0, 1); nc];
        self.beliefs = vec![Vec::new(); nc];
        for (ci, comp) in f.components.iter().enumerate() {
            let outside = minplus_convolve(&prefix[ci], &suffix[ci + 1]);
            self.down[comp[0]] = Msg {
                len: outside.len(),
                data: outside,
            };
            for &c in comp {
                let kids = &f.children[c];
                let mut child_msgs: Vec<Msg> = kids
                    .iter()
                    .map(|&k| Msg::new(1 << f.separators[k].len(), 1))
                    .collect();
                let mut beliefs = vec![Vec::new(); self.psi[c].len()];
                for x in 0..self.psi[c].len() {
                    let p = self.psi[c][x];
                    if ext::is_forbidden(p) {
                        continue;
                    }
                    let mut incoming: Vec<&[f64]> = Vec::with_capacity(kids.len() + 1);
                    incoming.push(self.down[c].row(self.sep_self[c][x]));
                    for &k in kids {
                        incoming.push(self.up[k].row(self.sep_parent[k][x]));
                    }
                    let m = incoming.len();
                    let mut pre = vec![vec![0.0]];
                    for inc in &incoming {
                        pre.push(minplus_convolve(pre.last().unwrap(), inc));
                    }
                    let mut suf = vec![vec![0.0]; m + 1];
                    for t in (0..m).rev() {
                        suf[t] = minplus_convolve(&suf[t + 1], incoming[t]);
                    }
                    let shift_all = self.count_all[c][x];
                    let mut bel = vec![INF; pre[m].len() + shift_all];
                    for (k, a) in pre[m].iter().enumerate() {
                        bel[k + shift_all] = ext::add(p, *a);
                    }
                    beliefs[x] = bel;
                    for (t, &k) in kids.iter().enumerate() {
                        let others = minplus_convolve(&pre[t + 1], &suf[t + 2]);
                        let s = self.sep_parent[k][x];
                        let shift = shift_all - self.count_sep[k][s];
                        let msg = &mut child_msgs[t];
                        if others.len() + shift > msg.len {
                            let grown = others.len() + shift;
                            let mut data = vec![INF; (msg.data.len() / msg.len) * grown];
                            for r in 0..msg.data.len() / msg.len {
                                data[r * grown..r * grown + msg.len].copy_from_slice(msg.row(r));
                            }
                            *msg = Msg { len: grown, data };
                        }
                        let row = msg.row_mut(s);
                        for (kk, a) in others.iter().enumerate() {
                            let v = ext::add(p, *a);
                            if v < row[kk + shift] {
                                row[kk + shift] = v;
                            }
                        }
                    }
                }
                self.states_touched += beliefs.iter().map(|b| b.len()).sum::<usize>();
                for (t, &k) in kids.iter().enumerate() {
                    let msg = std::mem::replace(&mut child_msgs[t], Msg::new(0, 1));
                    self.states_touched += msg.data.len();
                    self.down[k] = msg;
                }
                self.beliefs[c] = beliefs;
            }
        }
    }

    /// Min-marginal over `vertices` (all in one clique), including the final
    /// count term. The first vertex is the most significant index bit.
    pub fn marginal(&self, vertices: &[usize]) -> Vec<f64> {
        assert!(!self.beliefs.is_empty(), "run_downward first");
        let c = self
            .forest
            .clique_containing(vertices)
            .unwrap_or_else(|| panic!("no clique contains {vertices:?}"));
        let cl = &self.forest.cliques[c];
        let bits: Vec<usize> = vertices.iter().map(|v| cl.binary_search(v).unwrap()).collect();
        let mut table = vec![INF; 1 << vertices.len()];
        for (x, bel) in self.beliefs[c].iter().enumerate() {
            let key = bits.iter().fold(0, |acc, &b| (acc << 1) | bit(x, b) as usize);
            for (k, v) in bel.iter().enumerate() {
                let tot = ext::add(*v, self.final_term[k]);
                if tot < table[key] {
                    table[key] = tot;
                }
            }
        }
        table
    }

    /// All assignments (over `n` global vertices, uncovered ones left at 0)
    /// whose objective is within `slack` of the minimum. Returns at most
    /// `cap` assignments and whether more exist.
    pub fn argmins(&self, n: usize, slack: f64, cap: usize) -> (Vec<Vec<u8>>, bool) {
        let mut search = TieSearch {
            engine: self,
            assign: vec![0u8; n],
            out: Vec::new(),
            cap,
            truncated: false,
            suffix_cache: HashMap::new(),
            comp_suffix: Vec::new(),
        };
        if ext::is_forbidden(self.value) {
            return (Vec::new(), false);
        }
        let profiles: Vec<Vec<f64>> = self.component_profiles().into_iter().map(|p| p.to_vec()).collect();
        let mut suf = vec![vec![0.0]; profiles.len() + 1];
        for i in (0..profiles.len()).rev() {
            suf[i] = minplus_convolve(&suf[i + 1], &profiles[i]);
        }
        search.comp_suffix = suf;
        let mut tasks = vec![Task::Total];
        search.run(&mut tasks, slack);
        (search.out, search.truncated)
    }

    /// Lexicographically smallest minimizer (0 preferred, lowest vertex
    /// first) found by successive conditioning.
    pub fn lex_argmin(&self, n: usize, tol: f64) -> Vec<u8> {
        let mut psi = self.psi.clone();
        let mut x = vec![0u8; n];
        let target = self.value;
        let verts: Vec<usize> = self.forest.vertices().collect();
        for v in verts {
            let c = self.forest.home_clique(v).unwrap();
            let b = self.forest.cliques[c].binary_search(&v).unwrap();
            let mut trial = psi.clone();
            for (s, p) in trial[c].iter_mut().enumerate() {
                if bit(s, b) == 1 {
                    *p = INF;
                }
            }
            let eng = MinSumJunction::new(self.forest, trial.clone(), self.flip.clone(), self.final_term.clone());
            if eng.value <= target + tol {
                psi = trial;
            } else {
                for (s, p) in psi[c].iter_mut().enumerate() {
                    if bit(s, b) == 0 {
                        *p = INF;
                    }
                }
                x[v] = 1;
            }
        }
        x
    }
}

enum Task {
    Total,
    Components { idx: usize, k: usize },
    Subtree { clique: usize, k: usize },
    Children { clique: usize, x: usize, idx: usize, k: usize },
}

struct TieSearch<'e, 'f> {
    engine: &'e MinSumJunction<'f>,
    assign: Vec<u8>,
    out: Vec<Vec<u8>>,
    cap: usize,
    truncated: bool,
    suffix_cache: HashMap<(usize, usize), Vec<Vec<f64>>>,
    comp_suffix: Vec<Vec<f64>>,
}

const ROUNDING: f64 = 1e-12;

impl TieSearch<'_, '_> {
    fn children_suffix(&mut self, c: usize, x: usize) -> &Vec<Vec<f64>> {
        let e = self.engine;
        self.suffix_cache.entry((c, x)).or_insert_with(|| {
            let kids = &e.forest.children[c];
            let mut suf = vec![vec![0.0]; kids.len() + 1];
            for t in (0..kids.len()).rev() {
                let k = kids[t];
                suf[t] = minplus_convolve(&suf[t + 1], e.up[k].row(e.sep_parent[k][x]));
            }
            suf
        })
    }

    fn run(&mut self, tasks: &mut Vec<Task>, slack: f64) {
        if self.truncated {
            return;
        }
        let Some(task) = tasks.pop() else {
            if self.out.len() >= self.cap {
                self.truncated = true;
            } else {
                self.out.push(self.assign.clone());
            }
            return;
        };
        let e = self.engine;
        let fits = |excess: f64| excess <= slack + ROUNDING;
        let base = tasks.len();
        match task {
            Task::Total => {
                for k in 0..e.total.len() {
                    let v = ext::add(e.total[k], e.final_term[k]);
                    if ext::is_forbidden(v) {
                        continue;
                    }
                    let excess = v - e.value;
                    if fits(excess) {
                        tasks.push(Task::Components { idx: 0, k });
                        self.run(tasks, slack - excess.max(0.0));
                        tasks.truncate(base);
                    }
                }
                tasks.push(Task::Total);
            }
            Task::Components { idx, k } => {
                if idx == e.forest.components.len() {
                    self.run(tasks, slack);
                } else {
                    let root = e.forest.components[idx][0];
                    let bound = self.comp_suffix[idx].get(k).copied().unwrap_or(INF);
                    let prof = e.up[root].row(0);
                    for kc in 0..prof.len().min(k + 1) {
                        let rest = self.comp_suffix[idx + 1].get(k - kc).copied().unwrap_or(INF);
                        let v = ext::add(prof[kc], rest);
                        if ext::is_forbidden(v) {
                            continue;
                        }
                        let excess = v - bound;
                        if fits(excess) {
                            tasks.push(Task::Components { idx: idx + 1, k: k - kc });
                            tasks.push(Task::Subtree { clique: root, k: kc });
                            self.run(tasks, slack - excess.max(0.0));
                            tasks.truncate(base);
                            if self.truncated {
                                break;
                            }
                        }
                    }
                }
                tasks.push(Task::Components { idx, k });
            }
            Task::Subtree { clique: c, k } => {
                let cl = &e.forest.cliques[c];
                let sep = &e.forest.separators[c];
                let s = project_assign(sep, &self.assign);
                let bound = e.up[c].row(s)[k];
                for x in 0..e.psi[c].len() {
                    if e.sep_self[c][x] != s || ext::is_forbidden(e.psi[c][x]) {
                        continue;
                    }
                    let own = e.count_all[c][x] - e.count_sep[c][s];
                    if own > k {
                        continue;
                    }
                    let r = k - own;
                    let rest = self.children_suffix(c, x)[0].get(r).copied().unwrap_or(INF);
                    let v = ext::add(e.psi[c][x], rest);
                    if ext::is_forbidden(v) {
                        continue;
                    }
                    let excess = v - bound;
                    if fits(excess) {
                        for (b, &vert) in cl.iter().enumerate() {
                            self.assign[vert] = bit(x, b);
                        }
                        tasks.push(Task::Children { clique: c, x, idx: 0, k: r });
                        self.run(tasks, slack - excess.max(0.0));
                        tasks.truncate(base);
                        if self.truncated {
                            break;
                        }
                    }
                }
                tasks.push(Task::Subtree { clique: c, k });
            }
            Task::Children { clique: c, x, idx, k } => {
                let kids = &e.forest.children[c];
                if idx == kids.len() {
                    self.run(tasks, slack);
                } else {
                    let child = kids[idx];
                    let suf = self.children_suffix(c, x).clone();
                    let bound = suf[idx].get(k).copied().unwrap_or(INF);
                    let msg = e.up[child].row(e.sep_parent[child][x]);
                    for kc in 0..msg.len().min(k + 1) {
                        let rest = suf[idx + 1].get(k - kc).copied().unwrap_or(INF);
                        let v = ext::add(msg[kc], rest);
                        if ext::is_forbidden(v) {
                            continue;
                        }
                        let excess = v - bound;
                        if fits(excess) {
                            tasks.push(Task::Children { clique: c, x, idx: idx + 1, k: k - kc });
                            tasks.push(Task::Subtree { clique: child, k: kc });
                            self.run(tasks, slack - excess.max(0.0));
                            tasks.truncate(base);
                            if self.truncated {
                                break;
                            }
                        }
                    }
                }
                tasks.push(Task::Children { clique: c, x, idx, k });
            }
        }
    }
}

fn project_assign(sep: &[usize], assign: &[u8]) -> usize {
    sep.iter()
        .enumerate()
        .fold(0, |acc, (t, &v)| acc | ((assign[v] as usize) << t))
}

/// Result of [`junction_min`].
#[derive(Debug, Clone)]
pub struct JunctionMin<'f> {
    pub value: f64,
    /// Lexicographically smallest minimizer over `n` vertices (uncovered
    /// vertices are 0).
    pub argmin: Vec<u8>,
    engine: MinSumJunction<'f>,
}

impl JunctionMin<'_> {
    /// Min-marginal table over one vertex.
    pub fn vertex_marginal(&self, v: usize) -> Vec<f64> {
        self.engine.marginal(&[v])
    }

    /// Min-marginal table over a clique's vertices (first vertex most significant).
    pub fn clique_marginal(&self, c: usize) -> Vec<f64> {
        let vs = self.engine.forest.cliques[c].clone();
        self.engine.marginal(&vs)
    }

    pub fn engine(&self) -> &MinSumJunction<'_> {
        &self.engine
    }
}

/// Exact minimum of a sum of pairwise and unary terms whose pairs are all
/// covered by `forest`, with min-marginals from a two-pass sweep.
pub fn junction_min<'f>(
    forest: &'f JunctionForest,
    pairs: &[(usize, usize, [[f64; 2]; 2])],
    unary: &[(usize, [f64; 2])],
    n: usize,
) -> Result<JunctionMin<'f>> {
    let psi = clique_potentials(forest, pairs, unary);
    let mut engine = MinSumJunction::new(forest, psi, None, vec![0.0]);
    engine.run_downward();
    let argmin = engine.lex_argmin(n, 1e-9);
    Ok(JunctionMin {
        value: engine.value(),
        argmin,
        engine,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{build_junction_forest, brute_force_min_marginal, treewidth_upper_bound};
    use rand::{Rng, SeedableRng};

    type Pair = (usize, usize, [[f64; 2]; 2]);

    fn forest_of(edges: &[(usize, usize)], n: usize) -> JunctionForest {
        let mut f = build_junction_forest(edges, &treewidth_upper_bound(edges)).unwrap();
        for v in 0..n {
            if !f.contains_vertex(v) {
                f.add_isolated(v);
            }
        }
        f
    }

    fn objective(pairs: &[Pair], unary: &[(usize, [f64; 2])], x: &[u8]) -> f64 {
        let mut s = 0.0;
        for &(i, j, t) in pairs {
            s = ext::add(s, t[x[i] as usize][x[j] as usize]);
        }
        for &(v, u) in unary {
            s = ext::add(s, u[x[v] as usize]);
        }
        s
    }

    #[test]
    fn single_clique_tie_break() {
        let f = forest_of(&[(0, 1)], 2);
        let r = junction_min(&f, &[(0, 1, [[0.0, 5.0], [5.0, 0.0]])], &[], 2).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.argmin, vec![0, 0]);
    }

    #[test]
    fn attractive_chain_with_pull_on_last() {
        // enumeration of the 8 assignments: only (1,1,1) reaches -1
        let att = [[0.0, 1.0], [1.0, 0.0]];
        let pairs = [(0, 1, att), (1, 2, att)];
        let unary = [(2, [0.0, -1.0])];
        let f = forest_of(&[(0, 1), (1, 2)], 3);
        let r = junction_min(&f, &pairs, &unary, 3).unwrap();
        let brute = (0..8u64)
            .map(|i| {
                let x: Vec<u8> = (0..3).map(|b| ((i >> (2 - b)) & 1) as u8).collect();
                (objective(&pairs, &unary, &x), x)
            })
            .fold((INF, vec![]), |a, b| if b.0 < a.0 { b } else { a });
        assert_eq!(brute.0, -1.0);
        assert_eq!(r.value, -1.0);
        assert_eq!(r.argmin, vec![1, 1, 1]);
    }

    fn random_instance(seed: u64, n_max: usize) -> (usize, Vec<Pair>, Vec<(usize, [f64; 2])>) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=n_max);
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(0.3) {
                    let mut t = [[0.0; 2]; 2];
                    // coarse values so that ties occur
                    t.iter_mut().flatten().for_each(|v| *v = rng.gen_range(-3..=3) as f64 * 0.5);
                    pairs.push((i, j, t));
                }
            }
        }
        let mut unary = Vec::new();
        for v in 0..n {
            if rng.gen_bool(0.7) {
                unary.push((v, [rng.gen_range(-2..=2) as f64, rng.gen_range(-2..=2) as f64]));
            }
        }
        (n, pairs, unary)
    }

    #[test]
    fn matches_enumeration_on_random_forests() {
        for seed in 0..300 {
            let (n, pairs, unary) = random_instance(seed, 10);
            let edges: Vec<(usize, usize)> = pairs.iter().map(|p| (p.0, p.1)).collect();
            let f = forest_of(&edges, n);
            let r = junction_min(&f, &pairs, &unary, n).unwrap();
            let mut best = (INF, vec![]);
            let mut all = Vec::new();
            for idx in 0..1u64 << n {
                let x: Vec<u8> = (0..n).map(|b| ((idx >> (n - 1 - b)) & 1) as u8).collect();
                let v = objective(&pairs, &unary, &x);
                if v < best.0 {
                    best = (v, x.clone());
                }
                all.push((v, x));
            }
            assert!((r.value - best.0).abs() < 1e-9, "seed {seed}");
            assert_eq!(r.argmin, best.1, "seed {seed}");
            for v in 0..n {
                let brute = brute_force_min_marginal(n, &[v], |x| objective(&pairs, &unary, x)).unwrap();
                let got = r.vertex_marginal(v);
                for k in 0..2 {
                    assert!((brute[k] - got[k]).abs() < 1e-9, "seed {seed} v {v}");
                }
            }
            let mut ties: Vec<Vec<u8>> = all
                .into_iter()
                .filter(|(v, _)| *v <= best.0 + 1e-9)
                .map(|(_, x)| x)
                .collect();
            let (mut got, trunc) = r.engine().argmins(n, 1e-9, 1 << 12);
            assert!(!trunc);
            got.sort();
            ties.sort();
            assert_eq!(got, ties, "seed {seed}");
        }
    }

    #[test]
    fn counted_profiles_match_enumeration() {
        for seed in 0..200 {
            let (n, pairs, unary) = random_instance(seed + 1000, 9);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let flip: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.3)).collect();
            let g: Vec<f64> = (0..=n).map(|_| rng.gen_range(-4..=4) as f64 * 0.25).collect();
            let edges: Vec<(usize, usize)> = pairs.iter().map(|p| (p.0, p.1)).collect();
            let f = forest_of(&edges, n);
            let psi = clique_potentials(&f, &pairs, &unary);
            let mut eng = MinSumJunction::new(&f, psi, Some(flip.clone()), g.clone());
            let value_of = |x: &[u8]| {
                let c = x.iter().zip(&flip).filter(|(&b, &fl)| (b == 1) != fl).count();
                ext::add(objective(&pairs, &unary, x), g[c])
            };
            let mut best = INF;
            let mut total = vec![INF; n + 1];
            for idx in 0..1u64 << n {
                let x: Vec<u8> = (0..n).map(|b| ((idx >> (n - 1 - b)) & 1) as u8).collect();
                best = best.min(value_of(&x));
                let c = x.iter().zip(&flip).filter(|(&b, &fl)| (b == 1) != fl).count();
                total[c] = total[c].min(objective(&pairs, &unary, &x));
            }
            assert!((eng.value() - best).abs() < 1e-9, "seed {seed}");
            for (a, b) in eng.total_profile().iter().zip(&total) {
                assert!((a - b).abs() < 1e-9, "seed {seed}");
            }
            eng.run_downward();
            for &(i, j, _) in &pairs {
                let brute = brute_force_min_marginal(n, &[i, j], value_of).unwrap();
                let got = eng.marginal(&[i, j]);
                for k in 0..4 {
                    assert!((brute[k] - got[k]).abs() < 1e-9, "seed {seed} edge ({i},{j})");
                }
            }
            let (mut got, trunc) = eng.argmins(n, 1e-9, 1 << 12);
            assert!(!trunc);
            got.sort();
            let mut ties: Vec<Vec<u8>> = (0..1u64 << n)
                .map(|idx| (0..n).map(|b| ((idx >> (n - 1 - b)) & 1) as u8).collect::<Vec<u8>>())
                .filter(|x| value_of(x) <= best + 1e-9)
                .collect();
            ties.sort();
            assert_eq!(got, ties, "seed {seed}");
        }
    }

    #[test]
    fn argmin_cap_sets_truncation() {
        let f = forest_of(&[], 6);
        let eng = MinSumJunction::new(&f, clique_potentials(&f, &[], &[]), None, vec![0.0]);
        let (got, trunc) = eng.argmins(6, 1e-9, 10);
        assert!(trunc);
        assert_eq!(got.len(), 10);
    }
}
