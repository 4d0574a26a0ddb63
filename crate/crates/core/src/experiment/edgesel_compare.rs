use rayon::prelude::*;
use serde_json::json;

use super::{csv_string, mean, solve_config, ExperimentConfig};
use crate::edgesel::{initial_tree, selection_curve, Criterion, SelectionCurve};
use crate::error::Result;
use crate::generate::avgcut_grid;

/// The selection rules in report order.
pub(super) fn criteria(config: &ExperimentConfig) -> [Criterion; 4] {
    [
        Criterion::Wca,
        Criterion::SpanningWeight,
        Criterion::Random(config.random_seeds[0]),
        Criterion::Random(config.random_seeds[1]),
    ]
}

/// Bound after each single-edge addition, per grid and rule.
///
/// Rows: `seed,criterion,additions,bound,edge_added`. Curves are padded with
/// the last bound once certified; a run that never certifies counts as
/// `steps + 1` additions in the summary.
pub(super) fn run(config: &ExperimentConfig) -> Result<(String, serde_json::Value)> {
    let cfg = solve_config(config);
    let rules = criteria(config);
    let seeds: Vec<u64> = (0..config.seeds as u64).map(|s| config.first_seed + s).collect();
    let curves: Vec<(u64, Vec<SelectionCurve>)> = seeds
        .par_iter()
        .map(|&seed| -> Result<_> {
            let model = avgcut_grid(config.rows, config.cols, seed, config.lambda)?;
            let start = initial_tree(&model);
            let curves = rules
                .iter()
                .map(|&c| selection_curve(&model, &start, c, config.steps, config.tw_max, &cfg))
                .collect::<Result<Vec<_>>>()?;
            Ok((seed, curves))
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for (seed, cs) in &curves {
        for c in cs {
            for (j, b) in c.bounds.iter().enumerate() {
                let edge = if j == 0 { None } else { c.added.get(j - 1) };
                rows.push(vec![
                    seed.to_string(),
                    c.criterion.to_string(),
                    j.to_string(),
                    b.to_string(),
                    edge.map(|(a, b)| format!("{a}-{b}")).unwrap_or_default(),
                ]);
            }
        }
    }
    let csv = csv_string(&["seed", "criterion", "additions", "bound", "edge_added"], rows)?;
    let per_rule: Vec<serde_json::Value> = rules
        .iter()
        .enumerate()
        .map(|(r, c)| {
            let mean_bounds: Vec<f64> = (0..=config.steps)
                .map(|j| mean(curves.iter().map(|(_, cs)| cs[r].bounds[j])))
                .collect();
            json!({
                "criterion": c.to_string(),
                "mean_bound_after_additions": mean_bounds,
                "mean_additions_to_certificate": mean(curves.iter().map(|(_, cs)| {
                    cs[r].additions_to_certificate.unwrap_or(config.steps + 1) as f64
                })),
                "certified": curves.iter().filter(|(_, cs)| cs[r].additions_to_certificate.is_some()).count(),
            })
        })
        .collect();
    let summary = json!({
        "family": "edgesel-compare",
        "rows": config.rows,
        "cols": config.cols,
        "seeds": config.seeds,
        "steps": config.steps,
        "criteria": per_rule,
    });
    Ok((csv, summary))
}
