use relucert_numerics::IntervalVector;
use serde::{Deserialize, Serialize};

use crate::ModelError;

/// The index set of neurons merged in one abstraction step.
///
/// Both the layer index and the neuron indices are 1-based, matching the
/// layer numbering `k ∈ [L]` (layer 0 is the input) and neuron numbering
/// `[n_k] = {1, …, n_k}` used throughout the proof formats. Merging is only
/// defined on hidden layers, so `1 ≤ layer_index ≤ L-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeBucket {
    pub layer_index: usize,
    pub indices: Vec<usize>,
}

impl MergeBucket {
    pub fn new(layer_index: usize, mut indices: Vec<usize>) -> Result<Self, ModelError> {
        indices.sort_unstable();
        indices.dedup();
        if indices.len() < 2 {
            return Err(ModelError::BadBucket(format!(
                "bucket needs at least two distinct neurons, got {indices:?}"
            )));
        }
        if layer_index == 0 {
            return Err(ModelError::BadBucket("layer index is 1-based".into()));
        }
        if indices[0] == 0 {
            return Err(ModelError::BadBucket("neuron indices are 1-based".into()));
        }
        Ok(MergeBucket {
            layer_index,
            indices,
        })
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, index_1based: usize) -> bool {
        self.indices.binary_search(&index_1based).is_ok()
    }

    /// 0-based offsets into the layer's neuron list, ascending.
    pub fn zero_based(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().map(|i| i - 1)
    }

    /// The complement `B̄ = [n] \ B` as 0-based offsets, ascending.
    pub fn complement_zero_based(&self, layer_width: usize) -> Vec<usize> {
        (0..layer_width).filter(|i| !self.contains(i + 1)).collect()
    }
}

/// One recorded merge step.
///
/// `layer_bounds` is the full post-activation bound vector `I_k` of the
/// merge layer at the moment the merge was applied (computed on the current,
/// possibly already partially merged, network). `bias_contribution` is the
/// interval vector `W_{k+1(·,B)} · I_{k(B)}` that was Minkowski-added to the
/// next layer's bias interval. Keeping the full `I_k` makes the record
/// self-contained: the over-approximation proof serializes it directly and
/// the checker revalidates both pieces from it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeRecord {
    pub bucket: MergeBucket,
    pub layer_bounds: IntervalVector,
    pub bias_contribution: IntervalVector,
}

impl MergeRecord {
    /// `I_k` restricted to the bucket indices, ascending — the operand of
    /// the bias-interval product.
    pub fn bounds_used(&self) -> IntervalVector {
        self.bucket
            .zero_based()
            .map(|i| self.layer_bounds.get(i).clone())
            .collect()
    }
}
