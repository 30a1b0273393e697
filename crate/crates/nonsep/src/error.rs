//! Domain error type shared by every numeric module.

use thiserror::Error;

/// Numeric-domain failure raised by state construction or probability assembly.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An overlap table entry differs from the conjugate of its transpose partner.
    #[error("overlap table is not Hermitian at ({row}, {col}): {detail}")]
    NonHermitian { row: usize, col: usize, detail: String },

    /// A diagonal overlap entry is not 1.
    #[error("overlap table diagonal entry {index} is {value}, expected 1")]
    NonUnitDiagonal { index: usize, value: f64 },

    /// The overlap table cannot be realized by any set of state vectors.
    #[error("overlap table is not positive semidefinite: {detail}")]
    NotPositiveSemidefinite { detail: String },

    /// A stated precondition on operation inputs does not hold.
    #[error("precondition violated for {name}: {detail}")]
    PreconditionViolated { name: &'static str, detail: String },

    /// A probability left [0, 1] by more than the clamping tolerance.
    #[error("probability {value} outside [0, 1] beyond tolerance")]
    ProbabilityOutOfRange { value: f64 },

    /// A lifetime parameter is non-positive or non-finite.
    #[error("lifetime {name} = {value} must be strictly positive and finite")]
    InvalidLifetime { name: &'static str, value: f64 },

    /// Antisymmetrization of (near-)identical single-particle states gives a null vector.
    #[error("fermion pair with overlap magnitude {overlap} is a null antisymmetric state")]
    PauliNullState { overlap: f64 },

    /// The two absorbed-branch states cancel; the combined final state cannot be normalized.
    #[error("final-state branches cancel (1 + Re cross = {one_plus_re_cross}); no normalizable final state")]
    DegenerateFinalState { one_plus_re_cross: f64 },

    /// Vector or operator sizes do not agree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A non-finite number reached a public input.
    #[error("input {name} is not finite")]
    NonFiniteInput { name: String },

    /// A mode label is missing from an overlap table.
    #[error("overlap table has no mode labeled {label:?}")]
    UnknownModeLabel { label: String },

    /// A sweep-point evaluation failed; carries the grid value for diagnostics.
    #[error("at grid point x = {x}: {source}")]
    AtGridPoint { x: f64, source: Box<Error> },
}

impl Error {
    /// Wraps an error with the sweep grid value it occurred at.
    pub fn at_grid_point(self, x: f64) -> Error {
        Error::AtGridPoint { x, source: Box::new(self) }
    }
}
