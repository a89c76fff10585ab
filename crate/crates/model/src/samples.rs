//! Small hand-built networks and properties used across tests, docs and the
//! README walkthrough.

use relucert_numerics::{Interval, IntervalVector, Rational};

use crate::{Activation, Halfspace, InputBox, Layer, Network, OutputPolytope};

fn r(s: &str) -> Rational {
    s.parse().expect("literal")
}

fn row(entries: &[&str]) -> Vec<Rational> {
    entries.iter().map(|s| r(s)).collect()
}

/// A 4-input, 5-hidden, 1-output ReLU network with zero biases. Small enough
/// to analyze by hand, yet on its standard input box two hidden neurons stay
/// inactive and three stay active, which exercises every bound and merge
/// code path.
pub fn demo_network() -> Network {
    let hidden = Layer::new(
        vec![
            row(&["-1", "-1", "-2", "0"]),
            row(&["-1", "-2", "-1", "-3"]),
            row(&["0.1", "0", "0", "0"]),
            row(&["0", "0.2", "0", "0"]),
            row(&["1", "1", "1", "-1.3"]),
        ],
        row(&["0", "0", "0", "0", "0"]),
        Activation::Relu,
    )
    .expect("hidden layer");
    let output = Layer::new(
        vec![row(&["1", "1", "-5", "-5", "1"])],
        row(&["0"]),
        Activation::Identity,
    )
    .expect("output layer");
    Network::new(vec![hidden, output]).expect("network")
}

/// The box `[0.9,1.1]³ × [1,1]` the demo network is analyzed on.
pub fn demo_input_box() -> InputBox {
    InputBox::new(IntervalVector::new(vec![
        Interval::new(r("0.9"), r("1.1")).unwrap(),
        Interval::new(r("0.9"), r("1.1")).unwrap(),
        Interval::new(r("0.9"), r("1.1")).unwrap(),
        Interval::new(r("1"), r("1")).unwrap(),
    ]))
}

/// The undesired output set `{ y ≤ 0 }`.
pub fn demo_unsafe_output() -> OutputPolytope {
    OutputPolytope::new(vec![Halfspace {
        coeffs: vec![r("1")],
        rhs: r("0"),
    }])
    .unwrap()
}

/// `{ y ≤ rhs }` for a single-output network.
pub fn output_at_most(rhs: &str) -> OutputPolytope {
    OutputPolytope::new(vec![Halfspace {
        coeffs: vec![r("1")],
        rhs: r(rhs),
    }])
    .unwrap()
}
