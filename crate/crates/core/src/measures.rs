//! Entropies and two-qubit entanglement measures. All values are in bits;
//! concurrence and entanglement of formation are normalized so that Bell
//! states score exactly 1.
//!
//! Entanglement of formation upper-bounds every bipartite entanglement
//! measure, so hidden entanglement computed with it is a lower bound on the
//! hidden entanglement under other convex measures.

use crate::error::{Error, Result};
use crate::linalg::{self, c64, kron, sigma_y, ComplexMatrix};
use crate::state::{partial_trace, DensityOperator, PureState};

/// Spectrum entries at or below this are treated as zero in entropies.
pub const ENTROPY_EIGEN_FLOOR: f64 = 1e-12;

/// Spectrum entries in `[-SPECTRUM_CLAMP, 0)` are clamped to zero; anything
/// more negative is an error.
pub const SPECTRUM_CLAMP: f64 = 1e-9;

fn plogp(p: f64) -> f64 {
    if p <= ENTROPY_EIGEN_FLOOR {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Shannon entropy of a probability vector, in bits (0·log 0 = 0).
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if p.is_empty() {
        return Err(Error::InvalidState("empty probability vector".into()));
    }
    if let Some(bad) = p.iter().find(|&&x| !(-1e-12..=1.0 + 1e-12).contains(&x)) {
        return Err(Error::InvalidState(format!(
            "probability {bad} outside [0, 1]"
        )));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidState(format!(
            "probabilities sum to {total}, expected 1"
        )));
    }
    Ok(p.iter().map(|&x| plogp(x)).sum::<f64>().max(0.0))
}

/// h(x) = −x log₂ x − (1−x) log₂(1−x).
pub fn binary_entropy(x: f64) -> f64 {
    plogp(x) + plogp(1.0 - x)
}

fn spectrum_entropy(eigenvalues: &[f64]) -> Result<f64> {
    if let Some(&min) = eigenvalues.iter().find(|&&l| l < -SPECTRUM_CLAMP) {
        return Err(Error::NotPositive { eigenvalue: min });
    }
    Ok(eigenvalues.iter().map(|&l| plogp(l)).sum::<f64>().max(0.0))
}

/// S(ρ) = −tr ρ log₂ ρ.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    spectrum_entropy(&rho.eigenvalues()?)
}

fn require_two_qubit(dims: &[usize]) -> Result<()> {
    if dims != [2, 2] {
        return Err(Error::Dimension(format!(
            "expected a two-qubit state with dims [2, 2], got {dims:?}"
        )));
    }
    Ok(())
}

/// S(Tr_B |ψ⟩⟨ψ|) for a two-qubit pure state.
pub fn entropy_of_entanglement(psi: &PureState) -> Result<f64> {
    require_two_qubit(psi.dims())?;
    let reduced = partial_trace(&DensityOperator::from_pure(psi), 0)?;
    von_neumann_entropy(&reduced)
}

fn spin_flip() -> ComplexMatrix {
    let y = sigma_y();
    kron(&y, &y)
}

/// Wootters concurrence.
///
/// The λᵢ are square roots of the spectrum of √ρ·ρ̃·√ρ = τ·τ†, with
/// τ = √ρ·(σ_y⊗σ_y)·(√ρ)*. They are therefore the singular values of τ, read
/// off as the top half of the spectrum of the Hermitian dilation
/// [[0, τ], [τ†, 0]]. This avoids square-rooting rounding noise in the small
/// eigenvalues.
pub fn concurrence(rho: &DensityOperator) -> Result<f64> {
    require_two_qubit(rho.dims())?;
    let sqrt_rho = linalg::matrix_sqrt_psd(rho.matrix())?;
    let tau = sqrt_rho.matmul(&spin_flip())?.matmul(&sqrt_rho.conj())?;

    let mut dilation = ComplexMatrix::zeros(8, 8);
    for r in 0..4 {
        for c in 0..4 {
            dilation[(r, c + 4)] = tau[(r, c)];
            dilation[(c + 4, r)] = tau[(r, c)].conj();
        }
    }
    let spectrum = linalg::hermitian_eigenvalues(&dilation)?;
    let lambdas: Vec<f64> = spectrum[4..].iter().rev().map(|&l| l.max(0.0)).collect();
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.clamp(0.0, 1.0))
}

/// E_f as a function of concurrence.
pub fn formation_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy((1.0 + (1.0 - c * c).max(0.0).sqrt()) / 2.0).clamp(0.0, 1.0)
}

pub fn entanglement_of_formation(rho: &DensityOperator) -> Result<f64> {
    Ok(formation_from_concurrence(concurrence(rho)?))
}

/// Partial transpose over qubit B.
pub fn partial_transpose_b(m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            for a2 in 0..2 {
                for b2 in 0..2 {
                    out[(2 * a + b2, 2 * a2 + b)] = m[(2 * a + b, 2 * a2 + b2)];
                }
            }
        }
    }
    out
}

/// Sum of |negative eigenvalues| of ρ^{T_B}. For two qubits this is zero
/// exactly on separable states, which makes it an independent check on
/// [`concurrence`].
pub fn negativity_oracle(rho: &DensityOperator) -> Result<f64> {
    require_two_qubit(rho.dims())?;
    let pt = partial_transpose_b(rho.matrix());
    let eig = linalg::hermitian_eigenvalues(&pt)?;
    Ok(eig.iter().filter(|&&l| l < 0.0).map(|l| -l).sum())
}

/// Two-qubit state with ρ₀ = η|φ⁺⟩⟨φ⁺| + (1−η)(|00⟩⟨00| + |11⟩⟨11|)/2.
pub fn eta_mixture(eta: f64) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::validation("eta", format!("{eta} is outside [0, 1]")));
    }
    let mut m = ComplexMatrix::from_diag(&[0.5, 0.0, 0.0, 0.5]);
    m[(0, 3)] = c64(eta / 2.0, 0.0);
    m[(3, 0)] = c64(eta / 2.0, 0.0);
    DensityOperator::two_qubit(m)
}
