//! Power network frontend: case parsing, bus admittance, PMU placement, and the
//! SVD-based derivation of transmission weights and precedence.

mod admittance;
mod case;
mod cases;
mod derive;
mod matrix;
mod placement;
mod svd;

use thiserror::Error;

pub use admittance::{build_admittance, AdmittanceMatrix};
pub use case::{parse_case, Branch, Bus, PowerNetwork};
pub use cases::{bundled_case, BUNDLED_CASES};
pub use derive::{
    derive, derive_instance, derive_precedence, derive_weights, pmu_submatrix, Derivation,
    PROC_TIME_MAX_MS,
};
pub use matrix::ComplexMatrix;
pub use placement::{place_pmus, place_pmus_with, Placement, PlacementLimits, PlacementReport};
pub use svd::{svd, SvdResult};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("malformed case at line {line}: {reason}")]
    MalformedCase { line: usize, reason: String },
    #[error("branch {branch} references bus {bus}, which is not in the bus table")]
    DanglingBranch { branch: usize, bus: u32 },
    #[error("in-service branch {from}-{to} has zero impedance")]
    ZeroImpedanceBranch { from: u32, to: u32 },
    #[error("bus {0} is not in the network")]
    UnknownBus(u32),
    #[error("SVD did not converge (residual {residual:e})")]
    NoConvergence { residual: f64 },
}
