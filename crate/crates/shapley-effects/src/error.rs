//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while setting up or running an analysis.
///
/// Variants split into three rough groups that front ends may want to
/// distinguish: configuration problems (bad marginals, bad correlation
/// matrices, unknown models), unsupported problem dimensions, and
/// evaluation failures coming out of a simulator run.
#[derive(Debug, Error)]
pub enum Error {
    /// The requested point-set dimension exceeds the embedded
    /// direction-number table.
    #[error("sequence dimension {dim} exceeds the {limit}-dimension direction-number table")]
    DimensionUnsupported { dim: usize, limit: usize },

    /// Fewer than two sample rows were requested.
    #[error("sample size must be at least 2, got {0}")]
    SampleTooSmall(usize),

    /// Too many inputs for the subset-mask lattice. A full value table
    /// holds 2^k entries per estimator, so the limit keeps masks inside
    /// integer range and table memory within reason.
    #[error("input dimension {k} exceeds the {limit}-input limit for full subset tables")]
    TooManyInputs { k: usize, limit: usize },

    /// The permutation walk is factorial in the input dimension.
    #[error(
        "permutation algorithm supports at most {limit} inputs, got {k}; \
         use the moebius algorithm instead"
    )]
    PermutationLimit { k: usize, limit: usize },

    /// A marginal specification failed validation.
    #[error("invalid marginal: {0}")]
    InvalidMarginal(String),

    /// A dependence specification failed validation.
    #[error("invalid correlation matrix: {0}")]
    InvalidCorrelation(String),

    /// The (possibly reordered) Pearson correlation matrix has no
    /// Cholesky factor.
    #[error("correlation matrix is not positive definite ({context})")]
    NotPositiveDefinite { context: String },

    /// A uniform sample hit the boundary of (0, 1) where an unbounded
    /// marginal needs the open interval.
    #[error("uniform sample at row {row}, column {col} maps outside the support of marginal {col}")]
    UniformOutOfDomain { row: usize, col: usize },

    /// A simulator returned NaN or infinity.
    #[error("model '{model}' returned a non-finite output at row {row}")]
    NonFiniteOutput { model: String, row: usize },

    /// An intermediate quantity that feeds a power or logarithm was not
    /// positive.
    #[error("non-positive {quantity} at row {row} in the fire-spread equation chain")]
    NonPositiveIntermediate {
        quantity: &'static str,
        row: usize,
    },

    /// Model lookup by name failed.
    #[error("unknown model '{0}'")]
    UnknownModel(String),

    /// Correlation matrix or marginal list does not match the model.
    #[error("dimension mismatch: model has {expected} inputs, configuration has {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The output sample has zero variance, so normalized effects are
    /// undefined.
    #[error("model output variance is zero; normalized effects are undefined")]
    DegenerateVariance,
}

impl Error {
    /// True for errors raised while evaluating a simulator, as opposed
    /// to configuration problems.
    pub fn is_evaluation(&self) -> bool {
        matches!(
            self,
            Error::NonFiniteOutput { .. }
                | Error::NonPositiveIntermediate { .. }
                | Error::UniformOutOfDomain { .. }
        )
    }

    /// True when the failure is a problem-size limit rather than a bad
    /// configuration value.
    pub fn is_dimension_limit(&self) -> bool {
        matches!(
            self,
            Error::DimensionUnsupported { .. }
                | Error::TooManyInputs { .. }
                | Error::PermutationLimit { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
