//! Embedding of an ensemble into a classical pointer environment.
//!
//! ρ^SE(t) = Σᵢ pᵢ |xᵢ⟩⟨xᵢ| ⊗ ρᵢ(t), with the pointer states |xᵢ⟩ the fixed
//! computational basis of an `env_dim`-level environment. The mutual
//! information I(S:E) is computed twice: by diagonalizing the full composite
//! state, and by the block-entropy identity
//! S(Σ pᵢ|xᵢ⟩⟨xᵢ| ⊗ ρᵢ) = H(p) + Σ pᵢ S(ρᵢ).
//!
//! Backflow is flagged where I(S:E) decreases in time.

use crate::ensemble::{Ensemble, Snapshot};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::measures::{shannon_entropy, von_neumann_entropy};
use crate::record::TimeSeriesRecord;
use crate::state::{partial_trace, DensityOperator};

/// Mutual information below this is a numerical failure rather than rounding.
pub const MUTUAL_INFORMATION_TOL: f64 = 1e-9;

/// dI/dt must fall below minus this (bits per unit t/T) to count as backflow.
pub const BACKFLOW_THRESHOLD: f64 = 1e-9;

/// Threshold for the revival flags.
pub const REVIVAL_TOL: f64 = 1e-9;

const GRID_UNIFORMITY_TOL: f64 = 1e-9;

/// Composite environment ⊗ system state with dims `[env_dim, 4]`.
#[derive(Debug, Clone)]
pub struct SystemEnvironmentState {
    env_dim: usize,
    state: DensityOperator,
}

impl SystemEnvironmentState {
    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    pub fn state(&self) -> &DensityOperator {
        &self.state
    }

    /// ρ^S = Tr_E ρ^SE, with two-qubit dims.
    pub fn system(&self) -> Result<DensityOperator> {
        let reduced = partial_trace(&self.state, 1)?;
        DensityOperator::two_qubit(reduced.into_matrix())
    }

    /// ρ^E = Tr_S ρ^SE.
    pub fn environment(&self) -> Result<DensityOperator> {
        partial_trace(&self.state, 0)
    }
}

/// Builds ρ^SE from the ensemble members at one time point.
pub fn embed_snapshot(snapshot: &Snapshot) -> Result<SystemEnvironmentState> {
    let env_dim = snapshot.members.len();
    let n = env_dim * 4;
    let mut m = ComplexMatrix::zeros(n, n);
    for (i, (p, rho)) in snapshot.members.iter().enumerate() {
        if rho.dims() != [2, 2] {
            return Err(Error::Dimension(
                "ensemble members must be two-qubit".into(),
            ));
        }
        let block = rho.matrix();
        for r in 0..4 {
            for c in 0..4 {
                m[(4 * i + r, 4 * i + c)] = block[(r, c)] * *p;
            }
        }
    }
    Ok(SystemEnvironmentState {
        env_dim,
        state: DensityOperator::new(vec![env_dim, 4], m)?,
    })
}

pub fn embed(ens: &Ensemble, t: f64) -> Result<SystemEnvironmentState> {
    embed_snapshot(&ens.snapshot(t)?)
}

fn check_nonnegative(i: f64) -> Result<f64> {
    if i < -MUTUAL_INFORMATION_TOL {
        return Err(Error::Numerical(format!(
            "mutual information {i:.3e} is negative"
        )));
    }
    Ok(i.max(0.0))
}

/// I(S:E) = S(ρ^S) + S(ρ^E) − S(ρ^SE), each entropy from a full
/// eigendecomposition.
pub fn mutual_information_full(se: &SystemEnvironmentState) -> Result<f64> {
    let s_sys = von_neumann_entropy(&se.system()?)?;
    let s_env = von_neumann_entropy(&se.environment()?)?;
    let s_joint = von_neumann_entropy(se.state())?;
    check_nonnegative(s_sys + s_env - s_joint)
}

/// I(S:E) = S(ρ) − Σ pᵢ S(ρᵢ), from the block-entropy identity. Reduces to
/// S(ρ) for pure members and to S(ρ) − S(ρ₀) for unitary branches on a
/// common ρ₀.
pub fn mutual_information_from_snapshot(snapshot: &Snapshot) -> Result<f64> {
    let probabilities = snapshot.probabilities();
    let shannon = shannon_entropy(&probabilities)?;
    let s_rho = von_neumann_entropy(&snapshot.density)?;
    let mut member_entropy = 0.0;
    for (p, rho) in &snapshot.members {
        member_entropy += p * von_neumann_entropy(rho)?;
    }
    check_nonnegative(s_rho + shannon - (shannon + member_entropy))
}

pub fn mutual_information_closed_form(ens: &Ensemble, t: f64) -> Result<f64> {
    mutual_information_from_snapshot(&ens.snapshot(t)?)
}

/// Time intervals (in t/T) where the mutual information decreases.
#[derive(Debug, Clone, PartialEq)]
pub struct BackflowReport {
    pub intervals: Vec<(f64, f64)>,
    /// dI/dt at each sample, bits per unit t/T.
    pub witness_values: Vec<f64>,
}

impl BackflowReport {
    pub fn has_backflow(&self) -> bool {
        !self.intervals.is_empty()
    }
}

/// Finite-difference derivative on a uniform grid: central in the interior,
/// one-sided at the ends.
pub fn finite_difference(times: &[f64], values: &[f64]) -> Result<Vec<f64>> {
    if times.len() != values.len() {
        return Err(Error::Dimension(format!(
            "{} times but {} values",
            times.len(),
            values.len()
        )));
    }
    let n = times.len();
    if n < 3 {
        return Err(Error::validation(
            "series",
            format!("backflow needs at least 3 samples, got {n}"),
        ));
    }
    let step = times[1] - times[0];
    if step.is_nan() || step <= 0.0 {
        return Err(Error::validation("series", "times must be increasing"));
    }
    for w in times.windows(2) {
        if ((w[1] - w[0]) - step).abs() > GRID_UNIFORMITY_TOL * step.abs().max(1.0) {
            return Err(Error::validation("series", "time grid is not uniform"));
        }
    }
    Ok((0..n)
        .map(|i| match i {
            0 => (values[1] - values[0]) / step,
            i if i == n - 1 => (values[n - 1] - values[n - 2]) / step,
            i => (values[i + 1] - values[i - 1]) / (2.0 * step),
        })
        .collect())
}

/// Groups consecutive samples with dI/dt < −[`BACKFLOW_THRESHOLD`] into
/// intervals spanning their first and last sample times.
pub fn backflow_from_samples(times: &[f64], values: &[f64]) -> Result<BackflowReport> {
    let witness_values = finite_difference(times, values)?;
    let mut intervals = Vec::new();
    let mut open: Option<usize> = None;
    for (i, &d) in witness_values.iter().enumerate() {
        let decreasing = d < -BACKFLOW_THRESHOLD;
        match (decreasing, open) {
            (true, None) => open = Some(i),
            (false, Some(start)) => {
                intervals.push((times[start], times[i - 1]));
                open = None;
            }
            _ => {}
        }
    }
    if let Some(start) = open {
        intervals.push((times[start], times[times.len() - 1]));
    }
    Ok(BackflowReport {
        intervals,
        witness_values,
    })
}

pub fn backflow_intervals(series: &[TimeSeriesRecord]) -> Result<BackflowReport> {
    let times: Vec<f64> = series.iter().map(|r| r.t_over_T).collect();
    let values: Vec<f64> = series.iter().map(|r| r.I_SE).collect();
    backflow_from_samples(&times, &values)
}

/// Conditions under which entanglement lost at time `t` can come back.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RevivalFlags {
    /// The ensemble carries nonzero average entanglement, so information
    /// flowing back from the environment can be turned into entanglement.
    pub backflow_possible: bool,
    /// E_h(t) > 0: sufficient for a later revival.
    pub hidden_entanglement_positive: bool,
}

pub fn revival_condition(ens: &Ensemble, t: f64) -> Result<RevivalFlags> {
    let snapshot = ens.snapshot(t)?;
    Ok(RevivalFlags {
        backflow_possible: snapshot.average_entanglement()? > REVIVAL_TOL,
        hidden_entanglement_positive: snapshot.hidden_entanglement()? > REVIVAL_TOL,
    })
}
