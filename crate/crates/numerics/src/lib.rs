//! Exact rational scalars and closed-interval arithmetic.
//!
//! Every soundness-critical computation in the workspace runs on the types in
//! this crate. [`Rational`] is an arbitrary-precision fraction that parses
//! losslessly from decimal strings, [`Interval`] is a nonempty closed interval
//! with rational endpoints, and [`IntervalVector`] is a fixed-dimension box.
//! There is no floating point and no rounding anywhere: interval addition,
//! scaling, dot products and ReLU are all closed over the rationals.
//!
//! All values are immutable after construction and freely shareable between
//! threads.

mod interval;
mod rational;

pub use interval::{interval_dot, Interval, IntervalVector};
pub use rational::{ParseRationalError, Rational};

/// Errors produced by dimension-checked vector operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericsError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid interval: lower bound {lo} exceeds upper bound {hi}")]
    EmptyInterval { lo: String, hi: String },
}
