use serde::{Deserialize, Serialize};

/// Quantities reported at one time point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct TimeSeriesRecord {
    /// Time in units of the period T = 2π/ω.
    pub t_over_T: f64,
    /// Entanglement of formation of ρ(t).
    pub E_f: f64,
    /// Average entanglement of the ensemble members.
    pub E_av: f64,
    /// Hidden entanglement, E_av − E_f.
    pub E_h: f64,
    /// von Neumann entropy of ρ(t).
    pub S_rho: f64,
    /// System–environment quantum mutual information.
    pub I_SE: f64,
}
