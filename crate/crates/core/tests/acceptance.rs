//! Exit criteria. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hoplp::dual::{reparameterize, solve_from, SolveResult};
use hoplp::edgesel::{initial_tree, score_edges, tighten_loop, TightenConfig, WCA_EPS};
use hoplp::exact::{brute_force_hop_min_marginals, brute_force_map, treewidth_upper_bound};
use hoplp::experiment::{run_experiment, ExperimentConfig, Family};
use hoplp::generate::{avgcut_chain, avgcut_grid, chain_exclusion, random_tree_edges};
use hoplp::hop::{blocks_of, hop_min, hop_min_marginals, HopTerms, TIE_TOL};
use hoplp::model::{Assignment, Edge, EnergyModel, Hop};
use hoplp::{solve, DualState, EdgeSet, SolveConfig};

const MONOTONE_TOL: f64 = 1e-9;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(failures: &[String], ok: String) -> Verdict {
    if failures.is_empty() {
        Verdict { pass: true, detail: ok }
    } else {
        let shown: Vec<&str> = failures.iter().take(4).map(String::as_str).collect();
        Verdict {
            pass: false,
            detail: format!("{} failure(s): {}", failures.len(), shown.join("; ")),
        }
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str, failures: &mut Vec<String>) {
    if elapsed >= limit {
        failures.push(format!("{what} took {elapsed:?} (limit {limit:?})"));
    }
}

fn chain_pairs(model: &EnergyModel) -> EdgeSet {
    let pairs: Vec<(usize, usize)> = model.edges().iter().map(|e| (e.i, e.j)).collect();
    EdgeSet::new(model, &pairs).unwrap()
}

/// Every solver run of criteria 1-3, for the monotonicity check.
fn chain_runs() -> Vec<(String, SolveResult)> {
    let cfg = SolveConfig::default();
    let mut runs = Vec::new();
    for n in [4, 6, 8] {
        let m = chain_exclusion(n, 10.0, 0.1).unwrap();
        runs.push((format!("exclusion n={n} S=empty"), solve(&m, &EdgeSet::empty(&m), &cfg).unwrap()));
        runs.push((format!("exclusion n={n} S=chain"), solve(&m, &chain_pairs(&m), &cfg).unwrap()));
        let m = avgcut_chain(n, 1.0, 0.1).unwrap();
        runs.push((format!("avgcut n={n} S=empty"), solve(&m, &EdgeSet::empty(&m), &cfg).unwrap()));
        runs.push((format!("avgcut n={n} S=chain"), solve(&m, &chain_pairs(&m), &cfg).unwrap()));
    }
    runs
}

fn criterion_1() -> Verdict {
    let (c, eps) = (10.0, 0.1);
    let mut failures = Vec::new();
    for n in [4, 6, 8] {
        let start = Instant::now();
        let m = chain_exclusion(n, c, eps).unwrap();
        let cfg = SolveConfig::default();
        let loose = solve(&m, &EdgeSet::empty(&m), &cfg).unwrap();
        let tight = solve(&m, &chain_pairs(&m), &cfg).unwrap();
        within(start.elapsed(), Duration::from_secs(1), &format!("n={n}"), &mut failures);
        if (loose.bound() - eps).abs() > 1e-4 {
            failures.push(format!("n={n} S=empty bound {} != {eps}", loose.bound()));
        }
        let target = n as f64 * eps;
        if (tight.bound() - target).abs() > 1e-6 {
            failures.push(format!("n={n} S=chain bound {} != {target}", tight.bound()));
        }
        if !tight.certificate {
            failures.push(format!("n={n} S=chain not certified"));
        }
        if tight.decoded != Assignment::ones(n) {
            failures.push(format!("n={n} decoded {}", tight.decoded));
        }
    }
    verdict(&failures, "bounds eps and n*eps, certified all-ones for n in {4,6,8}".into())
}

fn criterion_2() -> Verdict {
    let (c, lambda) = (1.0, 0.1);
    let mut failures = Vec::new();
    for n in [4, 6, 8] {
        let start = Instant::now();
        let m = avgcut_chain(n, c, lambda).unwrap();
        let cfg = SolveConfig::default();
        let loose = solve(&m, &EdgeSet::empty(&m), &cfg).unwrap();
        let tight = solve(&m, &chain_pairs(&m), &cfg).unwrap();
        within(start.elapsed(), Duration::from_secs(1), &format!("n={n}"), &mut failures);
        let half = (n / 2) as f64;
        let loose_target = -lambda * half * half;
        if (loose.bound() - loose_target).abs() > 1e-4 {
            failures.push(format!("n={n} S=empty bound {} != {loose_target}", loose.bound()));
        }
        let target = c - lambda * half * half;
        if (tight.bound() - target).abs() > 1e-6 || !tight.certificate {
            let (x, map) = brute_force_map(&m).unwrap();
            failures.push(format!(
                "n={n} S=chain bound {} (certified {}) != {target}; exact MAP is {map} at {x}",
                tight.bound(),
                tight.certificate
            ));
        }
    }
    verdict(&failures, "bounds -lambda(n/2)^2 and c - lambda(n/2)^2 for n in {4,6,8}".into())
}

fn random_tree_model(seed: u64) -> EnergyModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=12);
    let edges = random_tree_edges(n, &mut rng)
        .into_iter()
        .map(|(i, j)| {
            let mut t = [[0.0; 2]; 2];
            t.iter_mut().flatten().for_each(|v| *v = rng.gen_range(-1.0..1.0));
            Edge::new(i, j, t)
        })
        .collect();
    let unary = (0..n).map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect();
    let f = (0..=n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    EnergyModel::new(n, unary, edges, Hop::cardinality(f)).unwrap()
}

fn tree_runs() -> Vec<(String, EnergyModel, SolveResult)> {
    (0..200)
        .map(|seed| {
            let m = random_tree_model(seed);
            let r = solve(&m, &EdgeSet::all(&m), &SolveConfig::default()).unwrap();
            (format!("tree seed {seed}"), m, r)
        })
        .collect()
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (name, m, r) in tree_runs() {
        let (_, map) = brute_force_map(&m).unwrap();
        if (r.bound() - map).abs() > 1e-6 {
            failures.push(format!("{name}: bound {} vs MAP {map}", r.bound()));
        }
    }
    within(start.elapsed(), Duration::from_secs(60), "200 trees", &mut failures);
    verdict(&failures, format!("200 random trees tight with S=E in {:?}", start.elapsed()))
}

/// Random model whose edges form a graph of tree-width bound at most 3,
/// all used as S, with a random dual state.
fn random_hop_instance(seed: u64, pattern: bool) -> (EnergyModel, EdgeSet, DualState) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=12);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j || pairs.contains(&(i.min(j), i.max(j))) {
            continue;
        }
        let mut trial = pairs.clone();
        trial.push((i.min(j), i.max(j)));
        if treewidth_upper_bound(&trial).width <= 3 {
            pairs = trial;
        }
    }
    // coarse values make ties common
    let coarse = |rng: &mut ChaCha8Rng| rng.gen_range(-4..=4) as f64 * 0.25;
    let edges = pairs
        .iter()
        .map(|&(i, j)| Edge::new(i, j, [[coarse(&mut rng), coarse(&mut rng)], [coarse(&mut rng), coarse(&mut rng)]]))
        .collect();
    let hop = if pattern {
        let k = rng.gen_range(1..=3);
        Hop::Pattern {
            patterns: (0..k).map(|_| (0..n).map(|_| coarse(&mut rng)).collect()).collect(),
        }
    } else {
        Hop::Cardinality {
            f: (0..=n).map(|_| coarse(&mut rng)).collect(),
            flip_mask: (0..n).map(|_| rng.gen_bool(0.3)).collect(),
        }
    };
    let m = EnergyModel::new(n, vec![[0.0; 2]; n], edges, hop).unwrap();
    let keep: Vec<(usize, usize)> = pairs.iter().copied().filter(|_| rng.gen_bool(0.8)).collect();
    let s = EdgeSet::new(&m, &keep).unwrap();
    let mut st = DualState::zeros(&m, &s);
    st.delta_edge.iter_mut().flatten().flatten().for_each(|v| *v = coarse(&mut rng));
    st.delta_node.iter_mut().flatten().for_each(|v| *v = coarse(&mut rng));
    (m, s, st)
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    for pattern in [false, true] {
        let kind = if pattern { "pattern" } else { "cardinality" };
        for seed in 0..200 {
            let (m, s, st) = random_hop_instance(seed, pattern);
            let n = m.n();
            let terms = HopTerms::from_state(&s, &st);
            let values: Vec<f64> = (0..1u64 << n)
                .map(|idx| terms.evaluate(m.hop(), Assignment::from_index(idx, n).as_slice()))
                .collect();
            let min = values.iter().copied().fold(f64::INFINITY, f64::min);
            let expected: Vec<Assignment> = (0..1u64 << n)
                .filter(|&idx| values[idx as usize] <= min + TIE_TOL)
                .map(|idx| Assignment::from_index(idx, n))
                .collect();
            let (value, set) = hop_min(m.hop(), &s, &st, 1 << 12).unwrap();
            if (value - min).abs() > 1e-9 {
                failures.push(format!("{kind} seed {seed}: min {value} vs {min}"));
            }
            if set.truncated || set.assignments != expected {
                failures.push(format!("{kind} seed {seed}: argmin set differs"));
            }
            let blocks = blocks_of(&s);
            let got = hop_min_marginals(m.hop(), &s, &st, &blocks).unwrap();
            for (b, table) in blocks.iter().zip(&got) {
                let want = brute_force_hop_min_marginals(m.hop(), &s, &st, *b).unwrap();
                if table.iter().zip(&want).any(|(a, w)| (a - w).abs() > 1e-9) {
                    failures.push(format!("{kind} seed {seed}: block {b:?} marginals {table:?} vs {want:?}"));
                }
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(120), "400 instances", &mut failures);
    verdict(&failures, format!("400 instances match enumeration in {:?}", start.elapsed()))
}

fn monotone(trace: &[f64]) -> bool {
    trace.windows(2).all(|w| w[1] >= w[0] - MONOTONE_TOL)
}

fn criterion_5() -> Verdict {
    let mut failures = Vec::new();
    let mut count = 0;
    for (name, r) in chain_runs() {
        count += 1;
        if !monotone(&r.bound_trace) {
            failures.push(name);
        }
    }
    for (name, _, r) in tree_runs() {
        count += 1;
        if !monotone(&r.bound_trace) {
            failures.push(name);
        }
    }
    verdict(&failures, format!("{count} bound traces non-decreasing"))
}

fn criterion_6() -> Verdict {
    let cfg = SolveConfig::default();
    let mut failures = Vec::new();
    let mut checked = 0;
    for seed in 0..50u64 {
        let m = avgcut_grid(4, 4, seed, None).unwrap();
        let mut s = initial_tree(&m);
        let mut r = solve(&m, &s, &cfg).unwrap();
        while !r.certificate {
            let pairwise = reparameterize(&m, &s, &r.final_state).pairwise;
            let scores = score_edges(&m, &s, &[], &r.hop_argmins, &pairwise, 6).unwrap();
            let best = scores
                .iter()
                .filter(|e| e.admissible)
                .fold(None, |b: Option<&hoplp::edgesel::EdgeScore>, e| match b {
                    Some(b) if b.wca >= e.wca => Some(b),
                    _ => Some(e),
                });
            let Some(best) = best else { break };
            if best.truncated || best.wca <= WCA_EPS {
                break;
            }
            let next = s.with_edges(&m, &[best.edge]).unwrap();
            let state = r.final_state.extend_to(&m, &s, &next);
            let r2 = solve_from(&m, &next, state, &cfg).unwrap();
            checked += 1;
            if r2.bound() <= r.bound() {
                failures.push(format!(
                    "seed {seed}: adding {:?} (WCA {}) moved the bound {} -> {}",
                    best.edge,
                    best.wca,
                    r.bound(),
                    r2.bound()
                ));
            }
            s = next;
            r = r2;
        }
    }
    verdict(&failures, format!("{checked} WCA additions each raised the bound"))
}

fn criterion_7() -> Verdict {
    let start = Instant::now();
    let cfg = ExperimentConfig {
        n: 10,
        seeds: 100,
        ..ExperimentConfig::default()
    };
    let report = run_experiment(Family::Hamming, &cfg).unwrap();
    let mut failures = Vec::new();
    let cells = report.summary["cells"].as_array().unwrap();
    for cell in cells {
        if cell["tree_certified_rate"].as_f64() != Some(1.0) {
            failures.push(format!("k={} lambda={}: S=tree certified rate {}", cell["k"], cell["lambda"], cell["tree_certified_rate"]));
        }
    }
    for &k in cfg.ks.iter().filter(|&&k| k >= 2) {
        let rates: Vec<f64> = cells
            .iter()
            .filter(|c| c["k"].as_u64() == Some(k as u64))
            .map(|c| c["empty_integral_rate"].as_f64().unwrap())
            .collect();
        if rates.windows(2).any(|w| w[1] > w[0]) {
            failures.push(format!("k={k}: LP_empty integral rates {rates:?} increase with lambda"));
        }
    }
    within(start.elapsed(), Duration::from_secs(300), "hamming sweep", &mut failures);
    let rates: Vec<String> = cells.iter().map(|c| format!("{}", c["empty_integral_rate"])).collect();
    verdict(
        &failures,
        format!("S=tree always certified; LP_empty integral rates {} in {:?}", rates.join(","), start.elapsed()),
    )
}

fn criterion_8() -> Verdict {
    // mean bounds are compared up to the certification tolerance
    const BOUND_TOL: f64 = 1e-6;
    let start = Instant::now();
    let cfg = ExperimentConfig {
        rows: 4,
        cols: 4,
        seeds: 20,
        steps: 10,
        ..ExperimentConfig::default()
    };
    let report = run_experiment(Family::EdgeselCompare, &cfg).unwrap();
    let rules = report.summary["criteria"].as_array().unwrap();
    let curve = |r: &serde_json::Value| -> Vec<f64> {
        r["mean_bound_after_additions"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect()
    };
    let adds = |r: &serde_json::Value| r["mean_additions_to_certificate"].as_f64().unwrap();
    let wca = &rules[0];
    let mut failures = Vec::new();
    for rnd in &rules[2..4] {
        let (a, b) = (curve(wca), curve(rnd));
        for j in 0..a.len() {
            if a[j] < b[j] - BOUND_TOL {
                failures.push(format!("after {j} additions wca {} < {} {}", a[j], rnd["criterion"], b[j]));
            }
        }
        if adds(wca) >= adds(rnd) {
            failures.push(format!("wca needs {} additions, {} needs {}", adds(wca), rnd["criterion"], adds(rnd)));
        }
    }
    within(start.elapsed(), Duration::from_secs(600), "comparison", &mut failures);
    verdict(
        &failures,
        format!(
            "mean additions to certificate: wca {}, random {} and {} ({:?})",
            adds(wca),
            adds(&rules[2]),
            adds(&rules[3]),
            start.elapsed()
        ),
    )
}

fn criterion_9() -> Verdict {
    let start = Instant::now();
    let m = avgcut_grid(7, 7, 1, Some(0.02)).unwrap();
    let t = tighten_loop(&m, &TightenConfig { tw_max: 6, ..TightenConfig::default() }).unwrap();
    let mut failures = Vec::new();
    within(start.elapsed(), Duration::from_secs(300), "7x7 tightening", &mut failures);
    if t.edge_set.tw_bound() > 6 {
        failures.push(format!("tree-width bound {}", t.edge_set.tw_bound()));
    }
    if !monotone(&t.trace.round_bounds()) {
        failures.push("round bounds decrease".into());
    }
    let r = &t.result;
    if !monotone(&r.bound_trace) {
        failures.push("final bound trace decreases".into());
    }
    if r.gap < -1e-8 {
        failures.push(format!("gap {}", r.gap));
    }
    if !r.final_state.all_finite() {
        failures.push("non-finite messages".into());
    }
    let rep = reparameterize(&m, &t.edge_set, &r.final_state);
    let terms = HopTerms::from_state(&t.edge_set, &r.final_state);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let mut x: Vec<u8> = (0..m.n()).map(|_| rng.gen_range(0..2)).collect();
        x[0] = 1;
        let mut total = terms.evaluate(m.hop(), &x);
        for (i, u) in rep.unary.iter().enumerate() {
            total += u[x[i] as usize];
        }
        for (e, p) in m.edges().iter().zip(&rep.pairwise) {
            total += p[x[e.i] as usize][x[e.j] as usize];
        }
        if (total - m.evaluate(&x)).abs() > 1e-8 {
            failures.push(format!("reparameterization off by {}", total - m.evaluate(&x)));
            break;
        }
    }
    verdict(
        &failures,
        format!(
            "{} with {} edges, tree-width bound {}, bound {} in {:?}",
            t.outcome,
            t.edge_set.len(),
            t.edge_set.tw_bound(),
            r.bound(),
            start.elapsed()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Verdict); 9] = [
        (1, "exclusion chain values", criterion_1),
        (2, "average-cut chain values", criterion_2),
        (3, "full edge set is tight on trees", criterion_3),
        (4, "HOP min and min-marginals match enumeration", criterion_4),
        (5, "bound traces are monotone", criterion_5),
        (6, "positive WCA additions raise the bound", criterion_6),
        (7, "hamming-ball experiment", criterion_7),
        (8, "edge selection comparison", criterion_8),
        (9, "7x7 grid tightening", criterion_9),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let v = run();
        println!("criterion {id} [{}] {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
