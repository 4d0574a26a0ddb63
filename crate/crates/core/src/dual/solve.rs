use std::fmt;

use super::decode::decode_with;
use super::state::{dual_bound, DualState};
use super::update::{update_hop_block, update_pairwise_block};
use crate::error::Result;
use crate::hop::{hop_min, ArgminSet, EdgeSet, M_MAX};
use crate::model::{Assignment, EnergyModel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    pub max_sweeps: usize,
    /// Stop once a full sweep improves the bound by less than this.
    pub tol_bound: f64,
    /// Certificate when decoded energy − bound ≤ this.
    pub cert_tol: f64,
    /// Cap on stored HOP minimizers.
    pub m_max: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            max_sweeps: 2000,
            tol_bound: 1e-8,
            cert_tol: 1e-6,
            m_max: M_MAX,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Decoded energy matches the bound.
    Certified,
    /// The bound stopped improving without a certificate.
    Stalled,
    /// `max_sweeps` reached while the bound was still moving.
    MaxSweeps,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Certified => "certified",
            SolveStatus::Stalled => "stalled",
            SolveStatus::MaxSweeps => "max-sweeps",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    /// B before the first sweep, then after every sweep.
    pub bound_trace: Vec<f64>,
    pub final_state: DualState,
    pub decoded: Assignment,
    pub decoded_energy: f64,
    pub gap: f64,
    pub certificate: bool,
    pub hop_argmins: ArgminSet,
    pub sweeps: usize,
    pub status: SolveStatus,
}

impl SolveResult {
    pub fn bound(&self) -> f64 {
        *self.bound_trace.last().expect("trace holds the initial bound")
    }

    /// `sweep,bound` rows, sweep 0 being the starting state.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("sweep,bound\n");
        for (k, b) in self.bound_trace.iter().enumerate() {
            out.push_str(&format!("{k},{b}\n"));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "bound": self.bound(),
            "decoded": self.decoded.as_slice(),
            "energy": self.decoded_energy,
            "gap": self.gap,
            "certificate": self.certificate,
            "status": self.status.to_string(),
            "sweeps": self.sweeps,
            "hop_argmins": self.hop_argmins.len(),
            "hop_argmins_truncated": self.hop_argmins.truncated,
            "bound_trace": self.trace_csv(),
        })
    }
}

/// Block coordinate ascent on LP_S from the zero state.
pub fn solve(model: &EnergyModel, edge_set: &EdgeSet, config: &SolveConfig) -> Result<SolveResult> {
    solve_from(model, edge_set, DualState::zeros(model, edge_set), config)
}

/// Block coordinate ascent from a given state.
///
/// A sweep updates every model edge in ascending `(i, j)` order, then the
/// HOP block.
pub fn solve_from(
    model: &EnergyModel,
    edge_set: &EdgeSet,
    mut state: DualState,
    config: &SolveConfig,
) -> Result<SolveResult> {
    state.check_dimensions(model, edge_set)?;
    let mut trace = vec![dual_bound(model, edge_set, &state)?];
    let mut moving = true;
    let mut sweeps = 0;
    while sweeps < config.max_sweeps {
        for k in 0..model.edges().len() {
            update_pairwise_block(model, edge_set, &mut state, k);
        }
        update_hop_block(model, edge_set, &mut state)?;
        sweeps += 1;
        let b = dual_bound(model, edge_set, &state)?;
        let prev = *trace.last().unwrap();
        trace.push(b);
        if b - prev < config.tol_bound {
            moving = false;
            break;
        }
    }
    let (_, argmins) = hop_min(model.hop(), edge_set, &state, config.m_max)?;
    let (decoded, decoded_energy) = decode_with(model, edge_set, &state, Some(&argmins));
    let bound = *trace.last().unwrap();
    let gap = decoded_energy - bound;
    let certificate = gap <= config.cert_tol;
    let status = if certificate {
        SolveStatus::Certified
    } else if moving {
        SolveStatus::MaxSweeps
    } else {
        SolveStatus::Stalled
    };
    Ok(SolveResult {
        bound_trace: trace,
        final_state: state,
        decoded,
        decoded_energy,
        gap,
        certificate,
        hop_argmins: argmins,
        sweeps,
        status,
    })
}
