//! Ensembles of two-qubit states produced by randomly chosen local unitaries.
//!
//! Each branch carries a constant probability and a local unitary acting on
//! one qubit. Time is an evaluation parameter: evolving an ensemble means
//! evaluating it at a new `t`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, kron, sigma_x, sigma_y, sigma_z, ComplexMatrix};
use crate::measures::entanglement_of_formation;
use crate::state::{mix, DensityOperator, STATE_TOL};

/// Largest negative hidden entanglement attributed to rounding.
pub const HIDDEN_ENTANGLEMENT_TOL: f64 = 1e-10;

/// Rotation axis on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn pauli(self) -> ComplexMatrix {
        match self {
            Axis::X => sigma_x(),
            Axis::Y => sigma_y(),
            Axis::Z => sigma_z(),
        }
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            _ => Err(Error::validation("axis", format!("unknown axis `{s}`"))),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// Which qubit a local unitary acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Qubit {
    #[default]
    A,
    B,
}

/// exp(−i σ_axis ω t / 2) = cos(ωt/2)·I − i sin(ωt/2)·σ_axis.
///
/// At t = 2π/ω this is −I: the identity up to a global phase, which cancels
/// in every density operator.
pub fn local_rotation(axis: Axis, omega: f64, t: f64) -> Result<ComplexMatrix> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::validation(
            "omega",
            format!("{omega} must be positive"),
        ));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::validation("t", format!("{t} must be nonnegative")));
    }
    let half = omega * t / 2.0;
    let cos = ComplexMatrix::identity(2).scale_real(half.cos());
    let sin = axis.pauli().scale(c64(0.0, -half.sin()));
    cos.add(&sin)
}

/// How a branch's unitary depends on time.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// Rotation exp(−i σ_axis ω t / 2).
    Rotation { axis: Axis, omega: f64 },
    /// A fixed unitary applied at every t.
    Fixed(ComplexMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    probability: f64,
    target: Qubit,
    generator: Generator,
}

fn check_probability(p: f64) -> Result<()> {
    if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
        return Err(Error::validation("p", format!("{p} is outside [0, 1]")));
    }
    Ok(())
}

impl Branch {
    pub fn rotation(probability: f64, target: Qubit, axis: Axis, omega: f64) -> Result<Self> {
        check_probability(probability)?;
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::validation(
                "omega",
                format!("{omega} must be positive"),
            ));
        }
        Ok(Self {
            probability,
            target,
            generator: Generator::Rotation { axis, omega },
        })
    }

    /// Branch applying the constant 2×2 unitary `u`.
    pub fn fixed(probability: f64, target: Qubit, u: ComplexMatrix) -> Result<Self> {
        check_probability(probability)?;
        if u.rows() != 2 || u.cols() != 2 {
            return Err(Error::validation("unitary", "must be a 2x2 matrix"));
        }
        let dev = u
            .dagger()
            .matmul(&u)?
            .max_abs_diff(&ComplexMatrix::identity(2))?;
        if dev > STATE_TOL {
            return Err(Error::validation(
                "unitary",
                format!("not unitary (|u†u − I| = {dev:.3e})"),
            ));
        }
        Ok(Self {
            probability,
            target,
            generator: Generator::Fixed(u),
        })
    }

    pub fn probability(&self) -> f64 {
        self.probability
    }

    pub fn target(&self) -> Qubit {
        self.target
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    /// The 2×2 single-qubit unitary at time `t`.
    pub fn local_unitary(&self, t: f64) -> Result<ComplexMatrix> {
        match &self.generator {
            Generator::Rotation { axis, omega } => local_rotation(*axis, *omega, t),
            Generator::Fixed(u) => Ok(u.clone()),
        }
    }

    /// The 4×4 two-qubit unitary `U ⊗ I` (or `I ⊗ U` for qubit B).
    pub fn unitary(&self, t: f64) -> Result<ComplexMatrix> {
        let u = self.local_unitary(t)?;
        let id = ComplexMatrix::identity(2);
        Ok(match self.target {
            Qubit::A => kron(&u, &id),
            Qubit::B => kron(&id, &u),
        })
    }
}

/// 𝕌(t) ρ₀ 𝕌(t)† for a single branch.
pub fn branch_state(branch: &Branch, rho0: &DensityOperator, t: f64) -> Result<DensityOperator> {
    if rho0.dims() != [2, 2] {
        return Err(Error::Dimension(format!(
            "branch states need a two-qubit initial state, got dims {:?}",
            rho0.dims()
        )));
    }
    rho0.evolve(&branch.unitary(t)?)
}

/// Weighted branches acting on a common initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    branches: Vec<Branch>,
    initial_state: DensityOperator,
}

/// Everything an ensemble yields at one time point.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    /// (pᵢ, 𝕌ᵢ ρ₀ 𝕌ᵢ†)
    pub members: Vec<(f64, DensityOperator)>,
    /// ρ(t) = Σ pᵢ 𝕌ᵢ ρ₀ 𝕌ᵢ†
    pub density: DensityOperator,
}

impl Snapshot {
    pub fn probabilities(&self) -> Vec<f64> {
        self.members.iter().map(|(p, _)| *p).collect()
    }

    /// Σ pᵢ E_f(ρᵢ). For pure members this is the entropy of entanglement.
    pub fn average_entanglement(&self) -> Result<f64> {
        self.members
            .iter()
            .map(|(p, rho)| Ok(p * entanglement_of_formation(rho)?))
            .sum()
    }

    pub fn formation(&self) -> Result<f64> {
        entanglement_of_formation(&self.density)
    }

    /// E_av − E_f(ρ), clamped at zero. Values more negative than
    /// [`HIDDEN_ENTANGLEMENT_TOL`] would breach convexity and are reported as
    /// numerical failures.
    pub fn hidden_entanglement(&self) -> Result<f64> {
        let e_h = self.average_entanglement()? - self.formation()?;
        if e_h < -HIDDEN_ENTANGLEMENT_TOL {
            return Err(Error::Numerical(format!(
                "hidden entanglement {e_h:.3e} is negative at t = {}",
                self.t
            )));
        }
        Ok(e_h.max(0.0))
    }
}

impl Ensemble {
    pub fn new(branches: Vec<Branch>, initial_state: DensityOperator) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::validation(
                "branches",
                "at least one branch is required",
            ));
        }
        let total: f64 = branches.iter().map(Branch::probability).sum();
        if (total - 1.0).abs() > STATE_TOL {
            return Err(Error::validation(
                "branches",
                format!("probabilities sum to {total}, expected 1"),
            ));
        }
        if initial_state.dims() != [2, 2] {
            return Err(Error::validation(
                "initial_state",
                format!(
                    "must be a two-qubit state, got dims {:?}",
                    initial_state.dims()
                ),
            ));
        }
        Ok(Self {
            branches,
            initial_state,
        })
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn initial_state(&self) -> &DensityOperator {
        &self.initial_state
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.branches.iter().map(Branch::probability).collect()
    }

    pub fn members(&self, t: f64) -> Result<Vec<(f64, DensityOperator)>> {
        self.branches
            .iter()
            .map(|b| Ok((b.probability(), branch_state(b, &self.initial_state, t)?)))
            .collect()
    }

    pub fn snapshot(&self, t: f64) -> Result<Snapshot> {
        let members = self.members(t)?;
        let density = mix(&members)?;
        Ok(Snapshot {
            t,
            members,
            density,
        })
    }

    /// ρ(t).
    pub fn density(&self, t: f64) -> Result<DensityOperator> {
        mix(&self.members(t)?)
    }

    pub fn average_entanglement(&self, t: f64) -> Result<f64> {
        self.snapshot(t)?.average_entanglement()
    }

    pub fn hidden_entanglement(&self, t: f64) -> Result<f64> {
        self.snapshot(t)?.hidden_entanglement()
    }
}
