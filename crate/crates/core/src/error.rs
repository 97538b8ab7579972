use thiserror::Error;

/// Errors raised by the algebraic and dynamical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid space dimensions: {0}")]
    InvalidSpace(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not a member of the algebra (residual {residual:.3e})")]
    NotMember { residual: f64 },

    #[error(
        "element has a nonzero {subspace} component ({norm:.3e}) where a pole at zero forbids it"
    )]
    PoleAtZero { subspace: &'static str, norm: f64 },

    #[error("point is not regular: min |alpha(q)| = {min_root:.3e}")]
    NotRegular { min_root: f64 },

    #[error("point is outside the open Weyl chamber: min alpha(q) = {min_root:.3e}")]
    OutsideChamber { min_root: f64 },

    #[error("chamber wall reached at t = {time}: min alpha(q) = {min_root:.3e}")]
    WallCollision { time: f64, min_root: f64 },

    #[error("step size underflow at t = {time} (h = {step:.3e})")]
    StepUnderflow { time: f64, step: f64 },

    #[error("spin element has a nonzero M component ({norm:.3e})")]
    OffSlice { norm: f64 },

    #[error("norm constraint violated: |u|^2 = {got}, expected {expected}")]
    NormConstraint { expected: f64, got: f64 },

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("matrix is not a valid group element of G_-: {0}")]
    InvalidLambda(String),

    #[error("degenerate diagonalization: spacing {gap:.3e}")]
    Degenerate { gap: f64 },

    #[error("no freezing gauge exists (residual {residual:.3e})")]
    NoSolution { residual: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
