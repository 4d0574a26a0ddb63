use std::fmt;

use super::{initial_tree, select_and_add, SelectConfig, WCA_EPS};
use crate::dual::{solve, solve_from, SolveConfig, SolveResult};
use crate::error::Result;
use crate::hop::EdgeSet;
use crate::model::EnergyModel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TightenConfig {
    /// Edges added per round.
    pub k: usize,
    pub tw_max: usize,
    pub max_rounds: usize,
    pub wca_eps: f64,
    pub solve: SolveConfig,
}

impl Default for TightenConfig {
    fn default() -> Self {
        TightenConfig {
            k: 8,
            tw_max: 6,
            max_rounds: 50,
            wca_eps: WCA_EPS,
            solve: SolveConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TightenOutcome {
    Certified,
    /// No admissible edge has positive WCA while the gap is still open.
    WcaFixedPoint,
    MaxRounds,
}

impl fmt::Display for TightenOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TightenOutcome::Certified => "certified",
            TightenOutcome::WcaFixedPoint => "WCA fixed point, gap positive",
            TightenOutcome::MaxRounds => "round limit reached",
        })
    }
}

/// One row of the trace: an added edge, or the starting solve of a round
/// when `edge_added` is `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionRecord {
    pub round: usize,
    pub edges_in_s: usize,
    pub edge_added: Option<(usize, usize)>,
    pub wca: Option<f64>,
    pub treewidth_bound: usize,
    /// Bound after re-solving with this round's additions.
    pub converged_bound: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SelectionTrace {
    pub records: Vec<SelectionRecord>,
}

impl SelectionTrace {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["round", "edges_in_S", "edge_added", "wca", "treewidth_bound", "converged_bound"])?;
        for r in &self.records {
            w.write_record([
                r.round.to_string(),
                r.edges_in_s.to_string(),
                r.edge_added.map(|(i, j)| format!("{i}-{j}")).unwrap_or_default(),
                r.wca.map(|v| v.to_string()).unwrap_or_default(),
                r.treewidth_bound.to_string(),
                r.converged_bound.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Converged bound after each round.
    pub fn round_bounds(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        let mut last_round = None;
        for r in &self.records {
            if last_round != Some(r.round) {
                out.push(r.converged_bound);
                last_round = Some(r.round);
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct TightenResult {
    pub edge_set: EdgeSet,
    pub trace: SelectionTrace,
    pub result: SolveResult,
    pub outcome: TightenOutcome,
}

/// Spanning tree start, then rounds of [solve, stop on certificate, add up
/// to `k` edges by WCA, stop if none qualifies], warm-starting every solve.
pub fn tighten_loop(model: &EnergyModel, config: &TightenConfig) -> Result<TightenResult> {
    let mut edge_set = if config.tw_max >= 1 {
        initial_tree(model)
    } else {
        EdgeSet::empty(model)
    };
    let mut result = solve(model, &edge_set, &config.solve)?;
    let mut trace = SelectionTrace::default();
    trace.records.push(SelectionRecord {
        round: 0,
        edges_in_s: edge_set.len(),
        edge_added: None,
        wca: None,
        treewidth_bound: edge_set.tw_bound(),
        converged_bound: result.bound(),
    });
    let select = SelectConfig {
        k: config.k,
        tw_max: config.tw_max,
        wca_eps: config.wca_eps,
        m_max: config.solve.m_max,
    };
    let mut outcome = TightenOutcome::MaxRounds;
    for round in 1..=config.max_rounds {
        if result.certificate {
            outcome = TightenOutcome::Certified;
            break;
        }
        let selection = select_and_add(model, &edge_set, &result.final_state, &select)?;
        if selection.added.is_empty() {
            outcome = TightenOutcome::WcaFixedPoint;
            break;
        }
        let state = result.final_state.extend_to(model, &edge_set, &selection.edge_set);
        let before = edge_set.len();
        edge_set = selection.edge_set;
        result = solve_from(model, &edge_set, state, &config.solve)?;
        for (k, score) in selection.added.iter().enumerate() {
            trace.records.push(SelectionRecord {
                round,
                edges_in_s: before + k + 1,
                edge_added: Some(score.edge),
                wca: Some(score.wca),
                treewidth_bound: edge_set.tw_bound(),
                converged_bound: result.bound(),
            });
        }
    }
    if result.certificate {
        outcome = TightenOutcome::Certified;
    }
    Ok(TightenResult {
        edge_set,
        trace,
        result,
        outcome,
    })
}
