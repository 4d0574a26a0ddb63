use std::fmt;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Random trees with a Hamming-ball exclusion, LP_∅ against S = tree.
    Hamming,
    /// Average-cut grids, one edge at a time under each selection rule.
    EdgeselCompare,
    /// Average-cut grids, tightened bound against the tree-width budget.
    AvgcutGrid,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hamming" => Ok(Family::Hamming),
            "edgesel-compare" => Ok(Family::EdgeselCompare),
            "avgcut-grid" => Ok(Family::AvgcutGrid),
            other => Err(Error::input(format!(
                "unknown experiment family `{other}` (expected hamming, edgesel-compare or avgcut-grid)"
            ))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Hamming => "hamming",
            Family::EdgeselCompare => "edgesel-compare",
            Family::AvgcutGrid => "avgcut-grid",
        })
    }
}

/// Batch parameters. Every field has a default, so `{}` is a valid config.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Variables per tree (hamming).
    pub n: usize,
    pub rows: usize,
    pub cols: usize,
    /// Instances per cell.
    pub seeds: usize,
    pub first_seed: u64,
    /// Attractive strengths for the hamming sweep.
    pub lambdas: Vec<f64>,
    /// Exclusion radii for the hamming sweep.
    pub ks: Vec<usize>,
    /// Average-cut weight for grids; tuned to a zero optimum when absent.
    pub lambda: Option<f64>,
    /// Edges per tightening round.
    pub batch: usize,
    pub tw_max: usize,
    pub max_rounds: usize,
    /// Additions per curve (edgesel-compare).
    pub steps: usize,
    /// Seeds of the two random baselines.
    pub random_seeds: [u64; 2],
    pub max_sweeps: usize,
    pub tol_bound: f64,
    pub cert_tol: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 10,
            rows: 4,
            cols: 4,
            seeds: 100,
            first_seed: 0,
            lambdas: vec![0.25, 0.5, 1.0, 1.5, 2.0],
            ks: vec![1, 2, 3],
            lambda: None,
            batch: 8,
            tw_max: 6,
            max_rounds: 50,
            steps: 10,
            random_seeds: [1, 2],
            max_sweeps: 2000,
            tol_bound: 1e-8,
            cert_tol: 1e-6,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
