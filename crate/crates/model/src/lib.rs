//! Network and query data model.
//!
//! A [`Network`] is a layered affine+ReLU model with exact rational weights.
//! An [`AbstractNetwork`] additionally carries one bias interval per neuron;
//! the interval is Minkowski-added to the affine output of its layer, so a
//! network whose bias intervals are all `[0,0]` behaves exactly like the
//! concrete network it was lifted from. Abstract networks remember how they
//! were built through a list of [`MergeRecord`]s, which later feeds both
//! refinement and the over-approximation proof.
//!
//! Two evaluation semantics live here: [`Network::eval`] computes the usual
//! single-vector forward pass, and [`AbstractNetwork::eval_interval`]
//! propagates a box through the layers with exact interval arithmetic. All
//! types are immutable after construction; evaluation is pure.

mod digest;
mod network;
mod query;
mod provenance;
pub mod json;
pub mod samples;

pub use digest::{digest_abstract_network, digest_network, sha256_hex};
pub use network::{AbstractLayer, AbstractNetwork, Activation, Layer, Network};
pub use provenance::{MergeBucket, MergeRecord};
pub use query::{Halfspace, InputBox, NetworkRef, OutputPolytope, Query};

/// Errors raised while constructing or evaluating models.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("network must contain at least one layer")]
    EmptyNetwork,
    #[error("layer {layer}: {reason}")]
    BadLayer { layer: usize, reason: String },
    #[error("layer {layer}: unsupported activation {activation:?} at this position")]
    UnsupportedActivation { layer: usize, activation: Activation },
    #[error("invalid merge bucket: {0}")]
    BadBucket(String),
}
