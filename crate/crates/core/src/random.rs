//! Seeded random states and local unitaries for property checks.
//!
//! Pure states are normalized complex Gaussian vectors (Haar distributed);
//! mixed two-qubit states are reductions of random 4⊗4 pure states.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c64, ComplexMatrix, C64};
use crate::state::{partial_trace, DensityOperator, PureState};

/// Deterministic generator used by the self-test and property suites.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..n)
        .map(|_| c64(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, dims: &[usize]) -> PureState {
    let n = dims.iter().product();
    PureState::new(dims.to_vec(), gaussian_vector(rng, n)).expect("normalized by construction")
}

/// Full-rank two-qubit mixed state (Hilbert–Schmidt measure).
pub fn random_two_qubit_density<R: Rng + ?Sized>(rng: &mut R) -> DensityOperator {
    let purified = DensityOperator::from_pure(&random_pure_state(rng, &[4, 4]));
    let reduced = partial_trace(&purified, 0).expect("two-factor state");
    DensityOperator::two_qubit(reduced.into_matrix()).expect("valid reduction")
}

/// Haar-random 2×2 unitary.
pub fn random_unitary_2<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let v = gaussian_vector(rng, 2);
    let (a, b) = (v[0], v[1]);
    let phase = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    ComplexMatrix::new(2, 2, vec![a, -b.conj() * phase, b, a.conj() * phase]).expect("2x2 shape")
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = c64(rng.sample(StandardNormal), 0.0);
        for j in (i + 1)..n {
            let z = c64(rng.sample(StandardNormal), rng.sample(StandardNormal));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}
