use crate::classify::{FixedPointRecord, Kind, Step};
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("front factor is not unimodular: |u| = {modulus}")]
    NonUnimodularFactor { modulus: f64 },

    #[error("zero #{index} has modulus {modulus}, which is not strictly inside the disk")]
    ZeroOutsideDisk { index: usize, modulus: f64 },

    #[error("a non-trivial Blaschke product needs at least 2 zeros, got {degree}")]
    TrivialDegree { degree: usize },

    #[error("point with modulus {modulus} lies outside the closed unit disk")]
    OutsideDomain { modulus: f64 },

    #[error("point with modulus {modulus} lies outside the open unit disk")]
    OutsideOpenDisk { modulus: f64 },

    #[error("evaluation hit a pole of the product")]
    Pole,

    #[error("not a boundary fixed point: ||z|-1| = {modulus_defect:e}, |phi(z)-z| = {residual:e}")]
    NotBoundaryFixedPoint { modulus_defect: f64, residual: f64 },

    #[error("root iteration did not converge after {sweeps} sweeps (worst residual {worst:e})")]
    RootSolveFailure { sweeps: usize, worst: f64, residuals: Vec<f64> },

    #[error("could not isolate a unique Denjoy-Wolff point ({} candidates)", candidates.len())]
    AmbiguousDenjoyWolff { candidates: Vec<FixedPointRecord> },

    #[error("composed degree {degree} exceeds the symbolic cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },

    #[error("polynomial refit needs degree {needed}, above the cap {cap}")]
    DegreeOverflow { needed: usize, cap: usize },

    #[error("log quadrature clipped {fraction:.3} of the grid nodes")]
    QuadratureDiverged { fraction: f64 },

    #[error("operation requires a hyperbolic or positive-step parabolic map, got {kind:?} with {step:?} step")]
    WrongClassification { kind: Kind, step: Step },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Input-validation failures as opposed to numerical ones.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::NonUnimodularFactor { .. }
                | Error::ZeroOutsideDisk { .. }
                | Error::TrivialDegree { .. }
                | Error::OutsideDomain { .. }
                | Error::OutsideOpenDisk { .. }
                | Error::NotBoundaryFixedPoint { .. }
                | Error::InvalidArgument(_)
        )
    }
}
