//! Hidden entanglement and system–environment mutual information for
//! two-qubit ensembles driven by random local unitaries.
//!
//! The crate is organised bottom-up: [`linalg`] supplies small dense complex
//! matrices and a Jacobi eigensolver, [`state`] the two-qubit states,
//! [`measures`] the entropies and entanglement measures, [`ensemble`] the
//! branch dynamics, [`environment`] the pointer-environment embedding and
//! backflow witness, and [`scenario`] / [`io`] the sweeps and file formats.

pub mod ensemble;
pub mod environment;
pub mod error;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod random;
pub mod record;
pub mod scenario;
pub mod selftest;
pub mod state;

pub use ensemble::{Axis, Branch, Ensemble, Qubit, Snapshot};
pub use environment::{BackflowReport, RevivalFlags, SystemEnvironmentState};
pub use error::{Error, Result};
pub use io::Format;
pub use linalg::{ComplexMatrix, EigenSystem, C64};
pub use record::TimeSeriesRecord;
pub use scenario::{EntanglementEvents, InitialState, ScenarioConfig};
pub use state::{BellKind, DensityOperator, PureState};
