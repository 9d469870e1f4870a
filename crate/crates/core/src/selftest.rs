//! Reproduction checks runnable from the command line.
//!
//! Each check covers one published behaviour of the two-branch model (end
//! points, sudden death and revival times, saturation of hidden
//! entanglement) or one internal consistency property, at a fixed tolerance.

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;

use crate::ensemble::{Axis, Branch, Ensemble, Qubit};
use crate::environment::{backflow_intervals, mutual_information_closed_form};
use crate::error::Result;
use crate::io::{render_csv, CSV_HEADER};
use crate::measures::{
    binary_entropy, concurrence, entanglement_of_formation, entropy_of_entanglement,
    negativity_oracle,
};
use crate::random::{random_pure_state, random_two_qubit_density, random_unitary_2, seeded};
use crate::record::TimeSeriesRecord;
use crate::scenario::{entanglement_events, run_scenario, scenario_fig1, scenario_fig2};
use crate::state::DensityOperator;

/// E_f(ρ₀) for η = ½, h((1 + √¾)/2).
pub const EF_RHO0_ETA_HALF: f64 = 0.354579;

const TIGHT: f64 = 1e-9;
const CURVE_TOL: f64 = 1e-8;
const PLATEAU_TOL: f64 = 1e-4;
const ORACLE_ZERO: f64 = 1e-8;
const RANDOM_TRIALS: usize = 1000;
const SEED: u64 = 0x5eed_2013;

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{mark}] {:>2}. {}: {}", self.id, self.name, self.detail)
    }
}

fn outcome(id: u8, name: &'static str, passed: bool, detail: String) -> CriterionOutcome {
    CriterionOutcome {
        id,
        name,
        passed,
        detail,
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn at(records: &[TimeSeriesRecord], t: f64) -> &TimeSeriesRecord {
    records
        .iter()
        .min_by(|a, b| (a.t_over_T - t).abs().total_cmp(&(b.t_over_T - t).abs()))
        .expect("non-empty series")
}

fn fig1_endpoints(fig1: &[TimeSeriesRecord]) -> CriterionOutcome {
    let (r0, rh, r1) = (at(fig1, 0.0), at(fig1, 0.5), at(fig1, 1.0));
    let passed = close(r0.E_f, 1.0, TIGHT)
        && close(rh.E_f, 0.0, TIGHT)
        && close(r1.E_f, 1.0, TIGHT)
        && close(rh.E_h, 1.0, TIGHT)
        && close(r1.E_h, 0.0, TIGHT);
    outcome(
        1,
        "fig1 endpoints",
        passed,
        format!(
            "E_f(0)={:.3e}, E_f(T/2)={:.3e}, E_f(T)={:.3e}, E_h(T/2)={:.3e}, E_h(T)={:.3e}",
            r0.E_f, rh.E_f, r1.E_f, rh.E_h, r1.E_h
        ),
    )
}

fn fig1_mutual_information(fig1: &[TimeSeriesRecord]) -> CriterionOutcome {
    let s_half = at(fig1, 0.5).S_rho;
    let max_is = fig1
        .iter()
        .map(|r| (r.I_SE - r.S_rho).abs())
        .fold(0.0, f64::max);
    let max_curve = fig1
        .iter()
        .map(|r| {
            let c = (PI * r.t_over_T).cos();
            (r.I_SE - binary_entropy((1.0 + c * c) / 2.0)).abs()
        })
        .fold(0.0, f64::max);
    outcome(
        2,
        "fig1 entropy and mutual information",
        close(s_half, 1.0, TIGHT) && max_is <= TIGHT && max_curve <= CURVE_TOL,
        format!("S(T/2)={s_half:.12}, max|I−S|={max_is:.2e}, max|I−curve|={max_curve:.2e}"),
    )
}

fn sudden_death_and_revival(half: &[TimeSeriesRecord]) -> CriterionOutcome {
    let ev = entanglement_events(half);
    let end = at(half, 1.0).E_f;
    let death_ok = ev.death.is_some_and(|t| (0.32..=0.34).contains(&t));
    let revival_ok = ev.revival.is_some_and(|t| (0.66..=0.68).contains(&t));
    outcome(
        3,
        "η=0.5 sudden death and revival",
        death_ok && revival_ok && close(end, EF_RHO0_ETA_HALF, PLATEAU_TOL),
        format!(
            "death={:?}, revival={:?}, E_f(T)={end:.6}",
            ev.death, ev.revival
        ),
    )
}

fn hidden_saturation(half: &[TimeSeriesRecord]) -> CriterionOutcome {
    let best = half
        .iter()
        .filter(|r| r.t_over_T < 0.5)
        .max_by(|a, b| a.E_h.total_cmp(&b.E_h))
        .expect("grid reaches below T/2");
    outcome(
        4,
        "η=0.5 hidden entanglement saturation",
        close(best.E_h, EF_RHO0_ETA_HALF, PLATEAU_TOL),
        format!("max E_h={:.6} at t/T={:.3}", best.E_h, best.t_over_T),
    )
}

fn eta_zero(zero: &[TimeSeriesRecord]) -> CriterionOutcome {
    let max_ef = zero.iter().map(|r| r.E_f).fold(0.0, f64::max);
    let max_eh = zero.iter().map(|r| r.E_h).fold(0.0, f64::max);
    let min_s = zero.iter().map(|r| r.S_rho).fold(f64::INFINITY, f64::min);
    let max_s = zero.iter().map(|r| r.S_rho).fold(0.0, f64::max);
    let s0 = at(zero, 0.0).S_rho;
    let s_half = at(zero, 0.5).S_rho;
    let passed = max_ef < TIGHT
        && max_eh < TIGHT
        && close(min_s, 1.0, TIGHT)
        && close(s0, 1.0, TIGHT)
        && close(max_s, 2.0, TIGHT)
        && close(s_half, 2.0, TIGHT);
    outcome(
        5,
        "η=0 no entanglement, S in [1, 2]",
        passed,
        format!("max E_f={max_ef:.2e}, max E_h={max_eh:.2e}, S(0)={s0:.12}, S(T/2)={s_half:.12}"),
    )
}

fn closed_form_agreement(series: &[(f64, Vec<TimeSeriesRecord>)]) -> Result<CriterionOutcome> {
    let mut worst: f64 = 0.0;
    for (eta, records) in series {
        let cfg = scenario_fig2(*eta)?;
        let ens = cfg.ensemble()?;
        let period = cfg.period();
        for r in records {
            let closed = mutual_information_closed_form(&ens, r.t_over_T * period)?;
            worst = worst.max((closed - r.I_SE).abs());
        }
    }
    Ok(outcome(
        6,
        "mutual information closed form",
        worst <= TIGHT,
        format!("max |full − closed| = {worst:.2e} over η ∈ {{0, 0.25, 0.5, 0.75, 1}}"),
    ))
}

fn backflow(fig1: &[TimeSeriesRecord]) -> Result<CriterionOutcome> {
    let report = backflow_intervals(fig1)?;
    let step = fig1[1].t_over_T - fig1[0].t_over_T;
    let passed = report.intervals.len() == 1 && {
        let (a, b) = report.intervals[0];
        (a - 0.5).abs() <= step + 1e-12 && (b - 1.0).abs() <= step + 1e-12
    };
    Ok(outcome(
        7,
        "fig1 backflow interval",
        passed,
        format!("intervals={:?}", report.intervals),
    ))
}

/// Ensemble with 2–4 branches, random weights and random local unitaries
/// (fixed or rotating) on a random initial state.
pub fn random_ensemble<R: Rng + ?Sized>(rng: &mut R) -> Result<Ensemble> {
    let n = rng.random_range(2..=4);
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut branches = Vec::with_capacity(n);
    for w in raw {
        let target = if rng.random_bool(0.5) {
            Qubit::A
        } else {
            Qubit::B
        };
        let p = w / total;
        let branch = if rng.random_bool(0.5) {
            Branch::fixed(p, target, random_unitary_2(rng))?
        } else {
            let axis = [Axis::X, Axis::Y, Axis::Z][rng.random_range(0..3)];
            Branch::rotation(p, target, axis, rng.random_range(0.5..10.0))?
        };
        branches.push(branch);
    }
    let rho0 = if rng.random_bool(0.5) {
        DensityOperator::from_pure(&random_pure_state(rng, &[2, 2]))
    } else {
        random_two_qubit_density(rng)
    };
    // normalization drift from w / total
    let sum: f64 = branches.iter().map(Branch::probability).sum();
    debug_assert!((sum - 1.0).abs() < 1e-12);
    Ensemble::new(branches, rho0)
}

fn convexity() -> Result<CriterionOutcome> {
    let mut rng = seeded(SEED);
    let mut worst = f64::INFINITY;
    for _ in 0..RANDOM_TRIALS {
        let ens = random_ensemble(&mut rng)?;
        let t = rng.random_range(0.0..2.0);
        let snap = ens.snapshot(t)?;
        let e_h = snap.average_entanglement()? - snap.formation()?;
        worst = worst.min(e_h);
    }
    Ok(outcome(
        8,
        "hidden entanglement nonnegative",
        worst >= -1e-10,
        format!("min E_h over {RANDOM_TRIALS} random ensembles = {worst:.3e}"),
    ))
}

fn oracle_cross_checks() -> Result<CriterionOutcome> {
    let mut rng = seeded(SEED + 1);
    let mut disagreements = 0;
    let mut entangled = 0;
    for _ in 0..RANDOM_TRIALS {
        let rho = random_two_qubit_density(&mut rng);
        let c_zero = concurrence(&rho)? < ORACLE_ZERO;
        let n_zero = negativity_oracle(&rho)? < ORACLE_ZERO;
        if c_zero != n_zero {
            disagreements += 1;
        }
        if !c_zero {
            entangled += 1;
        }
    }
    let mut worst: f64 = 0.0;
    for _ in 0..RANDOM_TRIALS {
        let psi = random_pure_state(&mut rng, &[2, 2]);
        let ef = entanglement_of_formation(&DensityOperator::from_pure(&psi))?;
        worst = worst.max((ef - entropy_of_entanglement(&psi)?).abs());
    }
    Ok(outcome(
        9,
        "concurrence/negativity and EoF/entropy oracles",
        disagreements == 0 && worst <= CURVE_TOL,
        format!(
            "{disagreements} zero-set disagreements ({entangled} entangled), max |E_f − E| = {worst:.2e}"
        ),
    ))
}

fn serialization() -> Result<CriterionOutcome> {
    let cfg = scenario_fig1().with_points(5);
    let first = render_csv(&run_scenario(&cfg)?)?;
    let second = render_csv(&run_scenario(&cfg)?)?;
    let header_ok = first.lines().next() == Some(CSV_HEADER);
    Ok(outcome(
        10,
        "deterministic CSV",
        first == second && header_ok,
        format!(
            "{} bytes, identical={}, header ok={header_ok}",
            first.len(),
            first == second
        ),
    ))
}

/// Runs every check. Errors propagate only for failures outside the checks
/// themselves (a sweep that cannot be evaluated at all).
pub fn run_all() -> Result<Vec<CriterionOutcome>> {
    let fig1 = run_scenario(&scenario_fig1())?;
    let etas = [0.0, 0.25, 0.5, 0.75, 1.0];
    let series = etas
        .iter()
        .map(|&eta| Ok((eta, run_scenario(&scenario_fig2(eta)?)?)))
        .collect::<Result<Vec<_>>>()?;
    let by_eta = |eta: f64| {
        &series
            .iter()
            .find(|(e, _)| *e == eta)
            .expect("eta in sweep list")
            .1
    };

    Ok(vec![
        fig1_endpoints(&fig1),
        fig1_mutual_information(&fig1),
        sudden_death_and_revival(by_eta(0.5)),
        hidden_saturation(by_eta(0.5)),
        eta_zero(by_eta(0.0)),
        closed_form_agreement(&series)?,
        backflow(&fig1)?,
        convexity()?,
        oracle_cross_checks()?,
        serialization()?,
    ])
}
