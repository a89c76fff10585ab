//! Neuron-merging abstraction over interval bounds.
//!
//! The pipeline is: propagate per-layer interval bounds from the input box
//! ([`compute_bounds`]), greedily cluster hidden neurons whose bounds sit
//! within a configurable tolerance of each other ([`select_buckets`]), and
//! merge each bucket ([`merge_bucket`]): the merged neurons' rows disappear
//! from their layer, the corresponding columns disappear from the next
//! layer, and the next layer's bias interval absorbs the merged columns'
//! contribution `W_{k+1(·,B)} · I_{k(B)}`. Every abstract network produced
//! here over-approximates its origin: for every input in the box, the
//! original output lies inside the abstract output set.
//!
//! [`refine`] walks the recorded merge steps backwards by coarseness,
//! removing the widest step and replaying the rest from the origin network.
//! Each refinement strictly shrinks the provenance list, which is what makes
//! the verify–refine loop terminate.

use relucert_model::{
    AbstractLayer, AbstractNetwork, Activation, InputBox, MergeBucket, MergeRecord, ModelError,
    Network,
};
use relucert_numerics::{interval_dot, Interval, IntervalVector, Rational};

/// Errors raised by abstraction operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AbstractionError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("bucket targets layer {layer} of a network with {num_layers} layers; merging is only defined on hidden layers")]
    OutputLayerMerge { layer: usize, num_layers: usize },
    #[error("bucket index {index} out of range for layer of width {width}")]
    BucketOutOfRange { index: usize, width: usize },
    #[error("stale bounds: bounds are for layer {bounds_layer} of width {bounds_width}, expected layer {layer} of width {width}")]
    StaleBounds {
        bounds_layer: usize,
        bounds_width: usize,
        layer: usize,
        width: usize,
    },
    #[error("refinement impossible: provenance is {0}")]
    NoProvenance(&'static str),
    #[error("invalid configuration: {0}")]
    BadConfig(String),
}

/// Traversal order for whole-network abstraction. Only first-to-last is
/// implemented; the enum keeps the configuration format stable if other
/// orders are added.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LayerOrder {
    #[default]
    FirstToLast,
}

/// Bucket-selection parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractionConfig {
    /// Two neurons cluster when both interval endpoints differ from the
    /// bucket seed's endpoints by at most this much.
    pub epsilon: Rational,
    /// Minimum bucket size; buckets below it are discarded.
    pub min_bucket: usize,
    pub layer_order: LayerOrder,
}

impl AbstractionConfig {
    pub fn new(epsilon: Rational, min_bucket: usize) -> Result<Self, AbstractionError> {
        if epsilon.is_negative() {
            return Err(AbstractionError::BadConfig(format!(
                "epsilon must be nonnegative, got {epsilon}"
            )));
        }
        if min_bucket < 2 {
            return Err(AbstractionError::BadConfig(format!(
                "min_bucket must be at least 2, got {min_bucket}"
            )));
        }
        Ok(AbstractionConfig {
            epsilon,
            min_bucket,
            layer_order: LayerOrder::FirstToLast,
        })
    }
}

impl Default for AbstractionConfig {
    fn default() -> Self {
        AbstractionConfig {
            epsilon: Rational::zero(),
            min_bucket: 2,
            layer_order: LayerOrder::FirstToLast,
        }
    }
}

/// Post-activation interval bounds `I_k` of one layer. `layer_index` is
/// 1-based; the input box plays the role of `I_0` and is not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerBounds {
    pub layer_index: usize,
    pub post_activation: IntervalVector,
}

/// Layerwise interval bound propagation from the input box, including bias
/// intervals. Returns `I_1 … I_L` in order; exact rationals throughout.
pub fn compute_bounds(
    net: &AbstractNetwork,
    p: &InputBox,
) -> Result<Vec<LayerBounds>, AbstractionError> {
    if p.dim() != net.input_dim() {
        return Err(ModelError::DimensionMismatch {
            expected: net.input_dim(),
            got: p.dim(),
        }
        .into());
    }
    let mut bounds = Vec::with_capacity(net.num_layers());
    let mut prev = p.bounds().clone();
    for (idx, layer) in net.layers().iter().enumerate() {
        let post: IntervalVector = (0..layer.out_dim())
            .map(|i| {
                let pre = layer.pre_activation(i, &prev)?;
                Ok(match layer.activation() {
                    Activation::Relu => pre.relu(),
                    Activation::Identity => pre,
                })
            })
            .collect::<Result<_, ModelError>>()?;
        bounds.push(LayerBounds {
            layer_index: idx + 1,
            post_activation: post.clone(),
        });
        prev = post;
    }
    Ok(bounds)
}

/// Greedy clustering of neurons with similar bounds.
///
/// Neurons are visited in ascending (midpoint, index) order. The first
/// unassigned neuron seeds a bucket; a later neuron joins while both of its
/// endpoints are within `epsilon` of the seed's endpoints, otherwise the
/// current bucket is emitted (when it reaches `min_bucket` members) and the
/// neuron seeds the next one. Buckets are disjoint by construction. A merge
/// must leave at least one neuron in its layer, so a bucket covering the
/// whole layer is trimmed by its last-joined member.
pub fn select_buckets(bounds: &LayerBounds, cfg: &AbstractionConfig) -> Vec<MergeBucket> {
    let entries = bounds.post_activation.entries();
    let width = entries.len();
    let mut order: Vec<usize> = (0..width).collect();
    order.sort_by(|&a, &b| {
        entries[a]
            .midpoint()
            .cmp(&entries[b].midpoint())
            .then(a.cmp(&b))
    });

    let mut buckets = Vec::new();
    let mut seed: Option<&Interval> = None;
    let mut members: Vec<usize> = Vec::new();
    let mut flush = |members: &mut Vec<usize>, buckets: &mut Vec<MergeBucket>| {
        if members.len() == width && width > 1 {
            members.pop();
        }
        if members.len() >= cfg.min_bucket {
            let indices = members.iter().map(|i| i + 1).collect();
            buckets.push(
                MergeBucket::new(bounds.layer_index, indices).expect("members are valid indices"),
            );
        }
        members.clear();
    };
    for i in order {
        let iv = &entries[i];
        match seed {
            Some(s)
                if (iv.lo() - s.lo()).abs() <= cfg.epsilon
                    && (iv.hi() - s.hi()).abs() <= cfg.epsilon =>
            {
                members.push(i);
            }
            _ => {
                flush(&mut members, &mut buckets);
                seed = Some(iv);
                members.push(i);
            }
        }
    }
    flush(&mut members, &mut buckets);
    buckets
}

/// Merges one bucket of hidden-layer neurons.
///
/// Layer `k` keeps only the rows outside the bucket (in order), layer `k+1`
/// keeps the matching columns, and the dropped columns' range, bounded by
/// `I_k` restricted to the bucket, is added to layer `k+1`'s bias interval.
/// Multiple merges into the same layer accumulate additively. A record of
/// the step is appended to the provenance when the input network carries one.
pub fn merge_bucket(
    net: &AbstractNetwork,
    bucket: &MergeBucket,
    bounds: &LayerBounds,
) -> Result<AbstractNetwork, AbstractionError> {
    let k = bucket.layer_index;
    if k == 0 || k >= net.num_layers() {
        return Err(AbstractionError::OutputLayerMerge {
            layer: k,
            num_layers: net.num_layers(),
        });
    }
    let layer_k = &net.layers()[k - 1];
    let layer_next = &net.layers()[k];
    let width = layer_k.out_dim();
    if let Some(&max) = bucket.indices.iter().max() {
        if max > width {
            return Err(AbstractionError::BucketOutOfRange { index: max, width });
        }
    }
    if bounds.layer_index != k || bounds.post_activation.dim() != width {
        return Err(AbstractionError::StaleBounds {
            bounds_layer: bounds.layer_index,
            bounds_width: bounds.post_activation.dim(),
            layer: k,
            width,
        });
    }

    let keep = bucket.complement_zero_based(width);
    if keep.is_empty() {
        return Err(AbstractionError::BadConfig(format!(
            "bucket {:?} covers the whole layer; a merge must leave a neuron behind",
            bucket.indices
        )));
    }

    // Layer k: drop the merged rows.
    let new_layer_k = AbstractLayer::new(
        keep.iter().map(|&i| layer_k.weights()[i].clone()).collect(),
        keep.iter().map(|&i| layer_k.bias()[i].clone()).collect(),
        keep.iter()
            .map(|&i| layer_k.bias_interval().get(i).clone())
            .collect(),
        layer_k.activation(),
    )?;

    // Layer k+1: drop the merged columns and absorb their bounded range
    // into the bias interval.
    let bucket_bounds: IntervalVector = bucket
        .zero_based()
        .map(|i| bounds.post_activation.get(i).clone())
        .collect();
    let mut contribution = Vec::with_capacity(layer_next.out_dim());
    let mut new_weights = Vec::with_capacity(layer_next.out_dim());
    for row in layer_next.weights() {
        let dropped: Vec<Rational> = bucket.zero_based().map(|i| row[i].clone()).collect();
        contribution.push(interval_dot(&dropped, &bucket_bounds).expect("dims match"));
        new_weights.push(keep.iter().map(|&i| row[i].clone()).collect());
    }
    let contribution = IntervalVector::new(contribution);
    let new_layer_next = AbstractLayer::new(
        new_weights,
        layer_next.bias().to_vec(),
        layer_next
            .bias_interval()
            .add(&contribution)
            .expect("dims match"),
        layer_next.activation(),
    )?;

    let mut layers: Vec<AbstractLayer> = net.layers().to_vec();
    layers[k - 1] = new_layer_k;
    layers[k] = new_layer_next;

    let provenance = net.provenance().map(|records| {
        let mut records = records.to_vec();
        records.push(MergeRecord {
            bucket: bucket.clone(),
            layer_bounds: bounds.post_activation.clone(),
            bias_contribution: contribution,
        });
        records
    });
    Ok(AbstractNetwork::new(layers, provenance)?)
}

/// Whole-network abstraction: trivial lift, then per hidden layer (first to
/// last) bucket selection on freshly propagated bounds and one merge per
/// bucket. Bounds are recomputed from scratch after every merge and the
/// still-pending buckets are re-indexed into the shrunk layer, so each merge
/// sees the current partially merged network. Pure function of its inputs.
pub fn abstract_network(
    net: &Network,
    p: &InputBox,
    cfg: &AbstractionConfig,
) -> Result<AbstractNetwork, AbstractionError> {
    let LayerOrder::FirstToLast = cfg.layer_order;
    let mut current = net.lift_trivial();
    for k in 1..net.num_layers() {
        let bounds = compute_bounds(&current, p)?;
        let buckets = select_buckets(&bounds[k - 1], cfg);
        let mut pending: Vec<Vec<usize>> = buckets.into_iter().map(|b| b.indices).collect();
        let mut i = 0;
        while i < pending.len() {
            // Earlier merges may have shrunk the layer far enough that a
            // pending bucket would now empty it; trim it back to a proper
            // subset and drop it when that leaves too few members.
            let layer_width = current.layers()[k - 1].out_dim();
            if pending[i].len() >= layer_width {
                pending[i].truncate(layer_width.saturating_sub(1));
            }
            if pending[i].len() < cfg.min_bucket {
                i += 1;
                continue;
            }
            let bucket = MergeBucket::new(k, pending[i].clone())?;
            let bounds = compute_bounds(&current, p)?;
            current = merge_bucket(&current, &bucket, &bounds[k - 1])?;
            // Later buckets were selected against the pre-merge layer;
            // shift their indices past the removed neurons.
            for later in pending.iter_mut().skip(i + 1) {
                for index in later.iter_mut() {
                    *index -= bucket.indices.iter().filter(|&&b| b < *index).count();
                }
            }
            i += 1;
        }
    }
    Ok(current)
}

/// Undoes the coarsest merge step (largest total width of its bias
/// contribution; ties resolved towards the latest step) and replays the
/// remaining steps from the origin network with freshly recomputed bounds.
/// With every recorded step removed the result is the trivial lift.
pub fn refine(
    net: &AbstractNetwork,
    origin: &Network,
    p: &InputBox,
) -> Result<AbstractNetwork, AbstractionError> {
    let records = match net.provenance() {
        None => return Err(AbstractionError::NoProvenance("absent")),
        Some([]) => return Err(AbstractionError::NoProvenance("empty")),
        Some(records) => records,
    };

    let mut worst = 0usize;
    let mut worst_width = records[0].bias_contribution.total_width();
    for (i, record) in records.iter().enumerate().skip(1) {
        let width = record.bias_contribution.total_width();
        if width >= worst_width {
            worst = i;
            worst_width = width;
        }
    }

    // Bucket indices in each record are positions in the network state of
    // their own step. Convert them to stable neuron identities (positions in
    // the origin network) by simulating the full sequence, then replay all
    // but the dropped step against fresh identity tables.
    let mut identity_buckets: Vec<(usize, Vec<usize>)> = Vec::with_capacity(records.len());
    {
        let mut ids: Vec<Vec<usize>> = origin
            .layers()
            .iter()
            .map(|l| (1..=l.out_dim()).collect())
            .collect();
        for record in records {
            let k = record.bucket.layer_index;
            let layer_ids = &mut ids[k - 1];
            let members: Vec<usize> = record
                .bucket
                .zero_based()
                .map(|pos| layer_ids[pos])
                .collect();
            layer_ids.retain(|id| !members.contains(id));
            identity_buckets.push((k, members));
        }
    }

    let mut ids: Vec<Vec<usize>> = origin
        .layers()
        .iter()
        .map(|l| (1..=l.out_dim()).collect())
        .collect();
    let mut current = origin.lift_trivial();
    for (i, (k, members)) in identity_buckets.iter().enumerate() {
        if i == worst {
            continue;
        }
        let layer_ids = &mut ids[k - 1];
        let positions: Vec<usize> = members
            .iter()
            .map(|id| {
                layer_ids
                    .iter()
                    .position(|x| x == id)
                    .expect("merged neuron identity present")
                    + 1
            })
            .collect();
        layer_ids.retain(|id| !members.contains(id));
        let bucket = MergeBucket::new(*k, positions)?;
        let bounds = compute_bounds(&current, p)?;
        current = merge_bucket(&current, &bucket, &bounds[k - 1])?;
    }
    Ok(current)
}

#[cfg(test)]
mod tests;
