//! Pure states, density operators and the bipartite tensor structure.
//!
//! Basis ordering is |00⟩, |01⟩, |10⟩, |11⟩ with qubit A as the left (most
//! significant) factor. Composite system–environment states put the
//! environment first, so their dims read `[env_dim, 4]`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c64, ComplexMatrix, C64};

/// Tolerance on normalization, trace and Hermiticity checks.
pub const STATE_TOL: f64 = 1e-10;

/// Most negative eigenvalue a density operator may carry from rounding.
pub const POSITIVITY_TOL: f64 = 1e-9;

/// Normalized state vector over a product of subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(dims: Vec<usize>, amplitudes: Vec<C64>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) || total != amplitudes.len() {
            return Err(Error::Dimension(format!(
                "dims {dims:?} do not match {} amplitudes",
                amplitudes.len()
            )));
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "state norm squared is {norm}, expected 1"
            )));
        }
        Ok(Self { dims, amplitudes })
    }

    /// Two-qubit state from four amplitudes.
    pub fn two_qubit(amplitudes: [C64; 4]) -> Result<Self> {
        Self::new(vec![2, 2], amplitudes.to_vec())
    }

    /// Computational basis state `index` of a two-qubit register.
    pub fn basis(index: usize) -> Result<Self> {
        if index >= 4 {
            return Err(Error::Dimension(format!(
                "basis index {index} out of range"
            )));
        }
        let mut amps = [c64(0.0, 0.0); 4];
        amps[index] = c64(1.0, 0.0);
        Self::two_qubit(amps)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(
                "inner product of unequal dimensions".into(),
            ));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Applies a unitary and re-validates normalization.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<Self> {
        Self::new(self.dims.clone(), u.matvec(&self.amplitudes)?)
    }
}

/// The four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BellKind::PhiPlus => "phi_plus",
            BellKind::PhiMinus => "phi_minus",
            BellKind::PsiPlus => "psi_plus",
            BellKind::PsiMinus => "psi_minus",
        }
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BellKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BellKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::validation("which", format!("unknown Bell state `{s}`")))
    }
}

pub fn bell_state(kind: BellKind) -> PureState {
    let h = FRAC_1_SQRT_2;
    let z = 0.0;
    let amps = match kind {
        BellKind::PhiPlus => [h, z, z, h],
        BellKind::PhiMinus => [h, z, z, -h],
        BellKind::PsiPlus => [z, h, h, z],
        BellKind::PsiMinus => [z, h, -h, z],
    };
    PureState::two_qubit(amps.map(|a| c64(a, 0.0))).expect("Bell states are normalized")
}

/// Hermitian, unit-trace, positive semidefinite operator with subsystem dims.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validates and stores the Hermitian part of `matrix`.
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Dimension(format!("invalid subsystem dims {dims:?}")));
        }
        if !matrix.is_square() || matrix.rows() != total {
            return Err(Error::Dimension(format!(
                "dims {dims:?} need a {total}x{total} matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let deviation = matrix.hermitian_deviation();
        if deviation > STATE_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let matrix = matrix.hermitian_part();
        let tr = matrix.trace()?;
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min = linalg::hermitian_eigenvalues(&matrix)?[0];
        if min < -POSITIVITY_TOL {
            return Err(Error::NotPositive { eigenvalue: min });
        }
        Ok(Self { dims, matrix })
    }

    /// Two-qubit density operator from a 4×4 matrix.
    pub fn two_qubit(matrix: ComplexMatrix) -> Result<Self> {
        Self::new(vec![2, 2], matrix)
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let m = ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes());
        Self {
            dims: psi.dims().to_vec(),
            matrix: m.hermitian_part(),
        }
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let n: usize = dims.iter().product();
        Self {
            dims,
            matrix: ComplexMatrix::identity(n).scale_real(1.0 / n as f64),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }

    /// tr(ρ²).
    pub fn purity(&self) -> f64 {
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `u ρ u†`, re-validated.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<Self> {
        Self::new(self.dims.clone(), self.matrix.conjugate_by(u)?)
    }

    /// Max-norm distance between the two matrices.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.matrix.max_abs_diff(&other.matrix)
    }
}

/// Convex combination Σ pᵢ ρᵢ.
pub fn mix(states: &[(f64, DensityOperator)]) -> Result<DensityOperator> {
    let (_, first) = states
        .first()
        .ok_or_else(|| Error::InvalidState("cannot mix an empty list of states".into()))?;
    let mut total = 0.0;
    let mut acc = ComplexMatrix::zeros(first.dim(), first.dim());
    for (p, rho) in states {
        if !p.is_finite() || *p < 0.0 {
            return Err(Error::InvalidState(format!(
                "mixing weight {p} is negative"
            )));
        }
        if rho.dims() != first.dims() {
            return Err(Error::Dimension(format!(
                "cannot mix dims {:?} with {:?}",
                rho.dims(),
                first.dims()
            )));
        }
        total += p;
        acc = acc.add(&rho.matrix().scale_real(*p))?;
    }
    if (total - 1.0).abs() > STATE_TOL {
        return Err(Error::InvalidState(format!(
            "mixing weights sum to {total}, expected 1"
        )));
    }
    DensityOperator::new(first.dims().to_vec(), acc)
}

/// Reduced state on subsystem `keep`, tracing out every other factor.
pub fn partial_trace(rho: &DensityOperator, keep: usize) -> Result<DensityOperator> {
    let dims = rho.dims();
    if dims.len() < 2 {
        return Err(Error::Dimension(
            "partial trace needs at least two subsystems".into(),
        ));
    }
    if keep >= dims.len() {
        return Err(Error::Dimension(format!(
            "subsystem index {keep} out of range for dims {dims:?}"
        )));
    }
    let n = rho.dim();
    let kept = dims[keep];
    // stride of the kept factor in the row-major composite index
    let stride: usize = dims[keep + 1..].iter().product();
    let digit = |idx: usize| (idx / stride) % kept;
    let rest = |idx: usize| idx - digit(idx) * stride;

    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(kept, kept);
    for r in 0..n {
        for c in 0..n {
            if rest(r) == rest(c) {
                out[(digit(r), digit(c))] += m[(r, c)];
            }
        }
    }
    DensityOperator::new(vec![kept], out)
}
