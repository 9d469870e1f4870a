//! Scenario configuration and time-grid sweeps.
//!
//! A scenario is an initial two-qubit state plus a list of branches. Sweeping
//! it evaluates the ensemble on a uniform grid over `[0, t_max_over_T · T]`
//! with `T = 2π/ω`. Branch probabilities are constants; time-dependent
//! weights are not modelled.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensemble::{Axis, Branch, Ensemble, Qubit};
use crate::environment::{embed_snapshot, mutual_information_full};
use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix, C64};
use crate::measures::{eta_mixture, von_neumann_entropy};
use crate::record::TimeSeriesRecord;
use crate::state::{bell_state, BellKind, DensityOperator};

pub const DEFAULT_OMEGA: f64 = TAU;
pub const DEFAULT_POINTS: usize = 1001;
pub const DEFAULT_T_MAX_OVER_T: f64 = 1.0;

/// E_f threshold separating "dead" from "alive" entanglement in event detection.
pub const EVENT_THRESHOLD: f64 = 1e-6;

fn default_omega() -> f64 {
    DEFAULT_OMEGA
}

fn default_points() -> usize {
    DEFAULT_POINTS
}

fn default_t_max() -> f64 {
    DEFAULT_T_MAX_OVER_T
}

/// A complex matrix entry written either as a bare real or as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexEntry {
    Real(f64),
    Pair([f64; 2]),
}

impl From<ComplexEntry> for C64 {
    fn from(e: ComplexEntry) -> C64 {
        match e {
            ComplexEntry::Real(re) => c64(re, 0.0),
            ComplexEntry::Pair([re, im]) => c64(re, im),
        }
    }
}

fn matrix_from_rows(key: &str, rows: &[Vec<ComplexEntry>], n: usize) -> Result<ComplexMatrix> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::validation(key, format!("must be a {n}x{n} matrix")));
    }
    let data = rows.iter().flatten().map(|&e| C64::from(e)).collect();
    ComplexMatrix::new(n, n, data).map_err(|e| Error::validation(key, e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    Bell { which: BellKind },
    EtaMixture { eta: f64 },
    Explicit { matrix: Vec<Vec<ComplexEntry>> },
}

impl InitialState {
    pub fn density(&self) -> Result<DensityOperator> {
        match self {
            InitialState::Bell { which } => Ok(DensityOperator::from_pure(&bell_state(*which))),
            InitialState::EtaMixture { eta } => {
                if !(0.0..=1.0).contains(eta) {
                    return Err(Error::validation(
                        "initial_state.eta",
                        format!("{eta} is outside [0, 1]"),
                    ));
                }
                eta_mixture(*eta)
            }
            InitialState::Explicit { matrix } => {
                let m = matrix_from_rows("initial_state.matrix", matrix, 4)?;
                DensityOperator::two_qubit(m)
                    .map_err(|e| Error::validation("initial_state.matrix", e.to_string()))
            }
        }
    }
}

/// Branch as written in a config: a rotation axis or an explicit unitary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchSpec {
    pub p: f64,
    #[serde(default)]
    pub qubit: Qubit,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitary: Option<Vec<Vec<ComplexEntry>>>,
    /// Overrides the scenario's ω for this branch.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
}

impl BranchSpec {
    pub fn rotation(p: f64, axis: Axis) -> Self {
        Self {
            p,
            qubit: Qubit::A,
            axis: Some(axis),
            unitary: None,
            omega: None,
        }
    }

    fn build(&self, index: usize, scenario_omega: f64) -> Result<Branch> {
        let key = |field: &str| format!("branches[{index}].{field}");
        let relabel = |field: &str, e: Error| match e {
            Error::Validation { message, .. } => Error::validation(key(field), message),
            other => Error::validation(key(field), other.to_string()),
        };
        match (&self.axis, &self.unitary) {
            (Some(axis), None) => {
                let omega = self.omega.unwrap_or(scenario_omega);
                Branch::rotation(self.p, self.qubit, *axis, omega).map_err(|e| {
                    let field = if matches!(&e, Error::Validation { key, .. } if key == "omega") {
                        "omega"
                    } else {
                        "p"
                    };
                    relabel(field, e)
                })
            }
            (None, Some(rows)) => {
                if self.omega.is_some() {
                    return Err(Error::validation(
                        key("omega"),
                        "has no effect on an explicit unitary",
                    ));
                }
                let u = matrix_from_rows(&key("unitary"), rows, 2)?;
                Branch::fixed(self.p, self.qubit, u).map_err(|e| {
                    let field = if matches!(&e, Error::Validation { key, .. } if key == "p") {
                        "p"
                    } else {
                        "unitary"
                    };
                    relabel(field, e)
                })
            }
            _ => Err(Error::validation(
                format!("branches[{index}]"),
                "needs exactly one of `axis` or `unitary`",
            )),
        }
    }
}

/// Parameters of one sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_omega")]
    pub omega: f64,
    #[serde(default = "default_t_max", rename = "t_max_over_T")]
    pub t_max_over_t: f64,
    #[serde(default = "default_points")]
    pub points: usize,
    pub initial_state: InitialState,
    pub branches: Vec<BranchSpec>,
}

impl ScenarioConfig {
    pub fn new(initial_state: InitialState, branches: Vec<BranchSpec>) -> Self {
        Self {
            omega: DEFAULT_OMEGA,
            t_max_over_t: DEFAULT_T_MAX_OVER_T,
            points: DEFAULT_POINTS,
            initial_state,
            branches,
        }
    }

    pub fn with_points(mut self, points: usize) -> Self {
        self.points = points;
        self
    }

    /// Period T = 2π/ω.
    pub fn period(&self) -> f64 {
        TAU / self.omega
    }

    /// Checks every invariant and builds the ensemble.
    pub fn ensemble(&self) -> Result<Ensemble> {
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(Error::validation(
                "omega",
                format!("{} must be positive", self.omega),
            ));
        }
        if !(self.t_max_over_t.is_finite() && self.t_max_over_t > 0.0) {
            return Err(Error::validation(
                "t_max_over_T",
                format!("{} must be positive", self.t_max_over_t),
            ));
        }
        if self.points < 3 {
            return Err(Error::validation(
                "points",
                format!("{} is fewer than 3", self.points),
            ));
        }
        let rho0 = self.initial_state.density()?;
        if self.branches.is_empty() {
            return Err(Error::validation(
                "branches",
                "at least one branch is required",
            ));
        }
        let branches = self
            .branches
            .iter()
            .enumerate()
            .map(|(i, b)| b.build(i, self.omega))
            .collect::<Result<Vec<_>>>()?;
        Ensemble::new(branches, rho0)
    }

    pub fn validate(&self) -> Result<()> {
        self.ensemble().map(|_| ())
    }

    /// Grid in units of T, inclusive of both ends.
    pub fn grid(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| self.t_max_over_t * i as f64 / last)
            .collect()
    }
}

fn fig_branches() -> Vec<BranchSpec> {
    vec![
        BranchSpec::rotation(0.5, Axis::X),
        BranchSpec::rotation(0.5, Axis::Z),
    ]
}

/// |φ⁺⟩ with qubit A rotated about x or z with equal probability.
pub fn scenario_fig1() -> ScenarioConfig {
    ScenarioConfig::new(
        InitialState::Bell {
            which: BellKind::PhiPlus,
        },
        fig_branches(),
    )
}

/// Same branches as [`scenario_fig1`] acting on the η-mixture.
pub fn scenario_fig2(eta: f64) -> Result<ScenarioConfig> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::validation("eta", format!("{eta} is outside [0, 1]")));
    }
    Ok(ScenarioConfig::new(
        InitialState::EtaMixture { eta },
        fig_branches(),
    ))
}

/// Evaluates every reported quantity at `t_over_T`.
pub fn evaluate(ens: &Ensemble, period: f64, t_over_period: f64) -> Result<TimeSeriesRecord> {
    let snapshot = ens.snapshot(t_over_period * period)?;
    let e_f = snapshot.formation()?;
    let e_av = snapshot.average_entanglement()?;
    let e_h = snapshot.hidden_entanglement()?;
    let s_rho = von_neumann_entropy(&snapshot.density)?;
    let i_se = mutual_information_full(&embed_snapshot(&snapshot)?)?;
    Ok(TimeSeriesRecord {
        t_over_T: t_over_period,
        E_f: e_f,
        E_av: e_av,
        E_h: e_h,
        S_rho: s_rho,
        I_SE: i_se,
    })
}

/// Sweeps the configured grid. Points are evaluated in parallel and returned
/// in time order.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Vec<TimeSeriesRecord>> {
    let ens = cfg.ensemble()?;
    let period = cfg.period();
    cfg.grid()
        .into_par_iter()
        .map(|t| evaluate(&ens, period, t))
        .collect()
}

/// Sudden death and revival times of E_f, in t/T.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct EntanglementEvents {
    /// First crossing of E_f from ≥ threshold to < threshold.
    pub death: Option<f64>,
    /// First later crossing back above the threshold.
    pub revival: Option<f64>,
}

fn crossing(a: &TimeSeriesRecord, b: &TimeSeriesRecord, level: f64) -> f64 {
    let frac = (level - a.E_f) / (b.E_f - a.E_f);
    a.t_over_T + frac * (b.t_over_T - a.t_over_T)
}

/// Locates death/revival crossings of [`EVENT_THRESHOLD`] by linear
/// interpolation between neighbouring records.
pub fn entanglement_events(records: &[TimeSeriesRecord]) -> EntanglementEvents {
    let mut events = EntanglementEvents::default();
    for w in records.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if events.death.is_none() {
            if a.E_f >= EVENT_THRESHOLD && b.E_f < EVENT_THRESHOLD {
                events.death = Some(crossing(a, b, EVENT_THRESHOLD));
            }
        } else if a.E_f <= EVENT_THRESHOLD && b.E_f > EVENT_THRESHOLD {
            events.revival = Some(crossing(a, b, EVENT_THRESHOLD));
            break;
        }
    }
    events
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn record(t: f64, e_f: f64) -> TimeSeriesRecord {
        TimeSeriesRecord {
            t_over_T: t,
            E_f: e_f,
            E_av: e_f,
            E_h: 0.0,
            S_rho: 0.0,
            I_SE: 0.0,
        }
    }

    #[test]
    fn fig1_three_points() {
        let r = run_scenario(&scenario_fig1().with_points(3)).unwrap();
        let t: Vec<f64> = r.iter().map(|x| x.t_over_T).collect();
        assert_eq!(t, vec![0.0, 0.5, 1.0]);
        assert_abs_diff_eq!(r[0].E_f, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r[0].E_h, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r[0].S_rho, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r[0].I_SE, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r[1].E_f, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r[1].E_h, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r[1].S_rho, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r[1].I_SE, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r[2].E_f, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r[2].E_h, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn default_grid() {
        let cfg = scenario_fig1();
        let grid = cfg.grid();
        assert_eq!(grid.len(), 1001);
        assert_eq!(grid[0], 0.0);
        assert_eq!(grid[1000], 1.0);
    }

    #[test]
    fn omega_only_rescales_time() {
        let mut cfg = scenario_fig2(0.5).unwrap().with_points(21);
        let a = run_scenario(&cfg).unwrap();
        cfg.omega = 3.0;
        let b = run_scenario(&cfg).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.t_over_T, y.t_over_T);
            assert_abs_diff_eq!(x.E_f, y.E_f, epsilon = 1e-9);
            assert_abs_diff_eq!(x.I_SE, y.I_SE, epsilon = 1e-9);
        }
    }

    #[test]
    fn fig2_eta_range() {
        assert!(scenario_fig2(1.01).is_err());
        assert!(scenario_fig2(-0.01).is_err());
    }

    #[test]
    fn config_validation_names_keys() {
        let key_of = |cfg: ScenarioConfig| match cfg.validate().unwrap_err() {
            Error::Validation { key, .. } => key,
            other => panic!("unexpected {other}"),
        };
        assert_eq!(key_of(scenario_fig1().with_points(2)), "points");
        let mut cfg = scenario_fig1();
        cfg.omega = -1.0;
        assert_eq!(key_of(cfg), "omega");
        let mut cfg = scenario_fig1();
        cfg.branches[0].p = 0.4;
        assert_eq!(key_of(cfg), "branches");
        let mut cfg = scenario_fig1();
        cfg.branches[1].p = 1.2;
        assert_eq!(key_of(cfg), "branches[1].p");
        let mut cfg = scenario_fig1();
        cfg.branches[0].axis = None;
        assert_eq!(key_of(cfg), "branches[0]");
        let mut cfg = scenario_fig1();
        cfg.branches[0].axis = None;
        cfg.branches[0].unitary = Some(vec![
            vec![ComplexEntry::Real(1.0), ComplexEntry::Real(1.0)],
            vec![ComplexEntry::Real(0.0), ComplexEntry::Real(1.0)],
        ]);
        assert_eq!(key_of(cfg), "branches[0].unitary");
        let mut cfg = scenario_fig1();
        cfg.initial_state = InitialState::EtaMixture { eta: 2.0 };
        assert_eq!(key_of(cfg), "initial_state.eta");
        let mut cfg = scenario_fig1();
        cfg.initial_state = InitialState::Explicit {
            matrix: vec![vec![ComplexEntry::Real(0.5); 4]; 4],
        };
        assert_eq!(key_of(cfg), "initial_state.matrix");
    }

    #[test]
    fn events_by_interpolation() {
        let recs = vec![
            record(0.0, 1.0),
            record(0.1, 3e-6),
            record(0.2, 0.0),
            record(0.3, 0.0),
            record(0.4, 2e-6),
            record(0.5, 1.0),
        ];
        let ev = entanglement_events(&recs);
        // 3e-6 → 0 crosses 1e-6 two thirds of the way
        assert_abs_diff_eq!(ev.death.unwrap(), 0.1 + 0.1 * (2.0 / 3.0), epsilon = 1e-12);
        assert_abs_diff_eq!(ev.revival.unwrap(), 0.3 + 0.05, epsilon = 1e-12);
    }

    #[test]
    fn no_events_when_never_alive() {
        let recs: Vec<_> = (0..5).map(|k| record(k as f64, 0.0)).collect();
        assert_eq!(entanglement_events(&recs), EntanglementEvents::default());
    }
}
