use super::*;
use relucert_model::samples;
use relucert_numerics::Interval;

fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

fn iv(lo: &str, hi: &str) -> Interval {
    Interval::new(r(lo), r(hi)).unwrap()
}

fn demo_lifted() -> AbstractNetwork {
    samples::demo_network().lift_trivial()
}

fn cfg(epsilon: &str) -> AbstractionConfig {
    AbstractionConfig::new(r(epsilon), 2).unwrap()
}

#[test]
fn bounds_of_demo_network_match_hand_propagation() {
    let bounds = compute_bounds(&demo_lifted(), &samples::demo_input_box()).unwrap();
    assert_eq!(bounds.len(), 2);
    assert_eq!(bounds[0].layer_index, 1);
    assert_eq!(
        bounds[0].post_activation,
        IntervalVector::new(vec![
            iv("0", "0"),
            iv("0", "0"),
            iv("0.09", "0.11"),
            iv("0.18", "0.22"),
            iv("1.4", "2"),
        ])
    );
    assert_eq!(
        bounds[1].post_activation,
        IntervalVector::new(vec![iv("-0.25", "0.65")])
    );
}

#[test]
fn bucket_selection_clusters_similar_bounds() {
    let bounds = compute_bounds(&demo_lifted(), &samples::demo_input_box()).unwrap();

    let buckets = select_buckets(&bounds[0], &cfg("0.15"));
    assert_eq!(buckets.len(), 1);
    assert_eq!(buckets[0].layer_index, 1);
    assert_eq!(buckets[0].indices, vec![1, 2, 3]);

    let exact = select_buckets(&bounds[0], &cfg("0"));
    assert_eq!(exact.len(), 1);
    assert_eq!(exact[0].indices, vec![1, 2]);

    // Single-neuron layers can never reach min_bucket.
    let single = LayerBounds {
        layer_index: 1,
        post_activation: IntervalVector::new(vec![iv("0", "1")]),
    };
    assert!(select_buckets(&single, &cfg("10")).is_empty());
}

#[test]
fn whole_layer_buckets_are_trimmed_to_proper_subsets() {
    let bounds = LayerBounds {
        layer_index: 1,
        post_activation: IntervalVector::new(vec![iv("0", "1"), iv("0", "1"), iv("0", "1")]),
    };
    let buckets = select_buckets(&bounds, &cfg("0"));
    assert_eq!(buckets.len(), 1);
    assert_eq!(buckets[0].indices, vec![1, 2]);
}

#[test]
fn merging_the_demo_bucket_reproduces_the_reduced_network() {
    let lifted = demo_lifted();
    let bounds = compute_bounds(&lifted, &samples::demo_input_box()).unwrap();
    let bucket = MergeBucket::new(1, vec![1, 2, 3]).unwrap();
    let merged = merge_bucket(&lifted, &bucket, &bounds[0]).unwrap();

    let hidden = &merged.layers()[0];
    assert_eq!(hidden.out_dim(), 2);
    assert_eq!(
        hidden.weights(),
        &[
            vec![r("0"), r("0.2"), r("0"), r("0")],
            vec![r("1"), r("1"), r("1"), r("-1.3")],
        ]
    );
    assert_eq!(hidden.bias_interval(), &IntervalVector::zeros(2));

    let output = &merged.layers()[1];
    assert_eq!(output.weights(), &[vec![r("-5"), r("1")]]);
    assert_eq!(
        output.bias_interval(),
        &IntervalVector::new(vec![iv("-0.55", "-0.45")])
    );

    let records = merged.provenance().unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].bucket, bucket);
    assert_eq!(
        records[0].bounds_used(),
        IntervalVector::new(vec![iv("0", "0"), iv("0", "0"), iv("0.09", "0.11")])
    );
    assert_eq!(
        records[0].bias_contribution,
        IntervalVector::new(vec![iv("-0.55", "-0.45")])
    );

    // Interval bounds of the merged network: the bias interval restores
    // exactly what the dropped columns contributed.
    let merged_bounds = compute_bounds(&merged, &samples::demo_input_box()).unwrap();
    assert_eq!(
        merged_bounds[1].post_activation,
        IntervalVector::new(vec![iv("-0.25", "0.65")])
    );
}

#[test]
fn merging_zero_neurons_leaves_the_bias_interval_unchanged() {
    let lifted = demo_lifted();
    let bounds = compute_bounds(&lifted, &samples::demo_input_box()).unwrap();
    let bucket = MergeBucket::new(1, vec![1, 2]).unwrap();
    let merged = merge_bucket(&lifted, &bucket, &bounds[0]).unwrap();
    assert_eq!(merged.layers()[1].bias_interval(), &IntervalVector::zeros(1));
}

#[test]
fn merge_rejects_output_layer_and_stale_bounds() {
    let lifted = demo_lifted();
    let bounds = compute_bounds(&lifted, &samples::demo_input_box()).unwrap();

    let output_bucket = MergeBucket::new(2, vec![1, 2]).unwrap();
    assert!(matches!(
        merge_bucket(&lifted, &output_bucket, &bounds[1]),
        Err(AbstractionError::OutputLayerMerge { .. })
    ));

    let bucket = MergeBucket::new(1, vec![1, 2]).unwrap();
    assert!(matches!(
        merge_bucket(&lifted, &bucket, &bounds[1]),
        Err(AbstractionError::StaleBounds { .. })
    ));

    let oversized = MergeBucket::new(1, vec![1, 6]).unwrap();
    assert!(matches!(
        merge_bucket(&lifted, &oversized, &bounds[0]),
        Err(AbstractionError::BucketOutOfRange { .. })
    ));
}

#[test]
fn abstracting_the_demo_network_merges_one_bucket() {
    let net = samples::demo_network();
    let abstracted =
        abstract_network(&net, &samples::demo_input_box(), &cfg("0.15")).unwrap();

    assert_eq!(abstracted.layers()[0].out_dim(), 2);
    assert_eq!(abstracted.layers()[1].weights(), &[vec![r("-5"), r("1")]]);
    assert_eq!(
        abstracted.layers()[1].bias_interval(),
        &IntervalVector::new(vec![iv("-0.55", "-0.45")])
    );
    let records = abstracted.provenance().unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].bucket.indices, vec![1, 2, 3]);
}

#[test]
fn zero_epsilon_on_distinct_bounds_changes_nothing() {
    // Rescale the demo hidden rows so every bound is distinct.
    let net = {
        use relucert_model::{Activation, Layer, Network};
        let hidden = Layer::new(
            vec![
                vec![r("0.1"), r("0"), r("0"), r("0")],
                vec![r("0"), r("0.2"), r("0"), r("0")],
                vec![r("0"), r("0"), r("0.3"), r("0")],
            ],
            vec![r("0"), r("0"), r("0")],
            Activation::Relu,
        )
        .unwrap();
        let output = Layer::new(
            vec![vec![r("1"), r("1"), r("1")]],
            vec![r("0")],
            Activation::Identity,
        )
        .unwrap();
        Network::new(vec![hidden, output]).unwrap()
    };
    let p = relucert_model::InputBox::new(IntervalVector::new(vec![
        iv("0.9", "1.1"),
        iv("0.9", "1.1"),
        iv("0.9", "1.1"),
        iv("1", "1"),
    ]));
    let abstracted = abstract_network(&net, &p, &cfg("0")).unwrap();
    assert_eq!(abstracted.provenance(), Some(&[][..]));
    assert_eq!(abstracted.layers(), net.lift_trivial().layers());
}

/// Two hidden layers that each collapse under zero tolerance; the second
/// layer's buckets are found on the already-merged predecessor.
#[test]
fn consecutive_layers_merge_against_manual_construction() {
    use relucert_model::{Activation, Layer, Network};
    let l1 = Layer::new(
        vec![vec![r("1")], vec![r("1")], vec![r("2")]],
        vec![r("0"); 3],
        Activation::Relu,
    )
    .unwrap();
    let l2 = Layer::new(
        vec![
            vec![r("1"), r("0"), r("0")],
            vec![r("0"), r("1"), r("0")],
            vec![r("1"), r("1"), r("1")],
        ],
        vec![r("0"); 3],
        Activation::Relu,
    )
    .unwrap();
    let l3 = Layer::new(
        vec![vec![r("1"), r("1"), r("1")]],
        vec![r("0")],
        Activation::Identity,
    )
    .unwrap();
    let net = Network::new(vec![l1, l2, l3]).unwrap();
    let p = relucert_model::InputBox::new(IntervalVector::new(vec![iv("0", "1")]));

    let abstracted = abstract_network(&net, &p, &cfg("0")).unwrap();

    // Manual application: layer 1 loses {1,2} (bounds [0,1] each), so layer
    // 2 keeps column 3 and gains B̂ = ([0,1],[0,1],[0,2]). On the merged
    // predecessor, layer 2's bounds are ([0,1],[0,1],[0,4]), so {1,2} merge
    // again: layer 3 keeps column 3 and gains B̂ = [1,1]·([0,1],[0,1]) = [0,2].
    assert_eq!(abstracted.layers()[0].weights(), &[vec![r("2")]]);
    assert_eq!(abstracted.layers()[1].weights(), &[vec![r("1")]]);
    assert_eq!(
        abstracted.layers()[1].bias_interval(),
        &IntervalVector::new(vec![iv("0", "2")])
    );
    assert_eq!(abstracted.layers()[2].weights(), &[vec![r("1")]]);
    assert_eq!(
        abstracted.layers()[2].bias_interval(),
        &IntervalVector::new(vec![iv("0", "2")])
    );

    let records = abstracted.provenance().unwrap();
    assert_eq!(records.len(), 2);
    assert_eq!((records[0].bucket.layer_index, &records[0].bucket.indices[..]), (1, &[1, 2][..]));
    assert_eq!((records[1].bucket.layer_index, &records[1].bucket.indices[..]), (2, &[1, 2][..]));
}

#[test]
fn refine_undoes_the_single_demo_merge() {
    let net = samples::demo_network();
    let p = samples::demo_input_box();
    let abstracted = abstract_network(&net, &p, &cfg("0.15")).unwrap();
    let refined = refine(&abstracted, &net, &p).unwrap();
    assert_eq!(refined, net.lift_trivial());
}

#[test]
fn refine_removes_the_widest_merge_step() {
    use relucert_model::{Activation, Layer, Network};
    // Hidden bounds [0,0.05] x2, [0,0.3] x2 and a distinct [0,1] give two
    // zero-tolerance buckets with bias contributions of width 0.1 and 0.6.
    let hidden = Layer::new(
        vec![
            vec![r("0.05")],
            vec![r("0.05")],
            vec![r("0.3")],
            vec![r("0.3")],
            vec![r("1")],
        ],
        vec![r("0"); 5],
        Activation::Relu,
    )
    .unwrap();
    let output = Layer::new(
        vec![vec![r("1"), r("1"), r("1"), r("1"), r("1")]],
        vec![r("0")],
        Activation::Identity,
    )
    .unwrap();
    let net = Network::new(vec![hidden, output]).unwrap();
    let p = relucert_model::InputBox::new(IntervalVector::new(vec![iv("0", "1")]));

    let abstracted = abstract_network(&net, &p, &cfg("0")).unwrap();
    let records = abstracted.provenance().unwrap();
    assert_eq!(records.len(), 2);
    assert_eq!(records[0].bias_contribution.total_width(), r("0.1"));
    assert_eq!(records[1].bias_contribution.total_width(), r("0.6"));

    let refined = refine(&abstracted, &net, &p).unwrap();
    let remaining = refined.provenance().unwrap();
    assert_eq!(remaining.len(), 1);
    assert_eq!(remaining[0].bias_contribution.total_width(), r("0.1"));
    // The narrow pair merged; the wide neurons are back in place.
    assert_eq!(
        refined.layers()[0].weights(),
        &[vec![r("0.3")], vec![r("0.3")], vec![r("1")]]
    );
    assert_eq!(
        refined.layers()[1].bias_interval(),
        &IntervalVector::new(vec![iv("0", "0.1")])
    );
}

#[test]
fn refine_needs_provenance() {
    let net = samples::demo_network();
    let p = samples::demo_input_box();
    assert!(matches!(
        refine(&net.lift_trivial(), &net, &p),
        Err(AbstractionError::NoProvenance("empty"))
    ));
    let no_history = net.lift_trivial().with_provenance(None);
    assert!(matches!(
        refine(&no_history, &net, &p),
        Err(AbstractionError::NoProvenance("absent"))
    ));
}

#[test]
fn abstraction_is_deterministic() {
    let net = samples::demo_network();
    let p = samples::demo_input_box();
    let a = abstract_network(&net, &p, &cfg("0.15")).unwrap();
    let b = abstract_network(&net, &p, &cfg("0.15")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn config_validation() {
    assert!(AbstractionConfig::new(r("-0.1"), 2).is_err());
    assert!(AbstractionConfig::new(r("0.1"), 1).is_err());
    assert!(AbstractionConfig::new(r("0"), 2).is_ok());
}
