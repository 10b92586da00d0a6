//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the documented domain of an operation.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// A quantity overflowed the scalar type when exponentiated.
    #[error("overflow in {op}: {msg}")]
    Overflow { op: &'static str, msg: String },

    /// Matrix dimensions do not match the operation's requirements.
    #[error("shape mismatch in {op}: {msg}")]
    Shape { op: &'static str, msg: String },

    /// An LU pivot fell below the singularity threshold.
    #[error("singular system in {op}: pivot ratio {pivot_ratio:e} (condition indicator {cond_indicator:e})")]
    Singular {
        op: &'static str,
        /// |smallest pivot| / inf-norm of the matrix.
        pivot_ratio: f64,
        /// |smallest pivot| / |largest pivot|, a cheap reciprocal condition indicator.
        cond_indicator: f64,
    },

    /// A result would exceed the configured dense-size cap.
    #[error("size cap exceeded in {op}: {rows} x {cols} entries")]
    SizeCap {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    /// Successive quadrature or extrapolation refinements failed to agree.
    #[error("tolerance not met in {op}: best disagreement {achieved:e} > requested {requested:e}")]
    ToleranceNotMet {
        op: &'static str,
        achieved: f64,
        requested: f64,
    },

    /// Panel contributions of an improper integral do not decay.
    #[error("integral diverges in {op}: panel contributions fail to decay")]
    NonIntegrable { op: &'static str },

    /// Two Lie elements carry different structure-constant parameters.
    #[error("algebra parameter mismatch: ({a0}, {b0}) vs ({a1}, {b1})")]
    ParamMismatch { a0: f64, b0: f64, a1: f64, b1: f64 },

    /// The zero element cannot be classified.
    #[error("zero element: all coefficients below eps = {eps:e}")]
    ZeroElement { eps: f64 },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
