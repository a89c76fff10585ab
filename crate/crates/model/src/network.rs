use relucert_numerics::{interval_dot, Interval, IntervalVector, Rational};
use serde::{Deserialize, Serialize};

use crate::provenance::MergeRecord;
use crate::ModelError;

/// Per-layer activation. Hidden layers use `Relu`, the output layer is
/// affine (`Identity`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Identity,
}

/// One affine layer `φ(W·h + b)` with exact rational entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    weights: Vec<Vec<Rational>>,
    bias: Vec<Rational>,
    activation: Activation,
}

impl Layer {
    pub fn new(
        weights: Vec<Vec<Rational>>,
        bias: Vec<Rational>,
        activation: Activation,
    ) -> Result<Self, ModelError> {
        if weights.is_empty() {
            return Err(ModelError::BadLayer {
                layer: 0,
                reason: "layer has no rows".into(),
            });
        }
        let in_dim = weights[0].len();
        if weights.iter().any(|row| row.len() != in_dim) {
            return Err(ModelError::BadLayer {
                layer: 0,
                reason: "ragged weight matrix".into(),
            });
        }
        if bias.len() != weights.len() {
            return Err(ModelError::DimensionMismatch {
                expected: weights.len(),
                got: bias.len(),
            });
        }
        Ok(Layer {
            weights,
            bias,
            activation,
        })
    }

    pub fn in_dim(&self) -> usize {
        self.weights[0].len()
    }

    pub fn out_dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Vec<Rational>] {
        &self.weights
    }

    pub fn bias(&self) -> &[Rational] {
        &self.bias
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }
}

/// A feed-forward ReLU network: ReLU hidden layers followed by one affine
/// output layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    layers: Vec<Layer>,
}

impl Network {
    pub fn new(layers: Vec<Layer>) -> Result<Self, ModelError> {
        validate_chain(layers.iter().map(|l| (l.in_dim(), l.out_dim(), l.activation)))?;
        Ok(Network { layers })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].in_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().unwrap().out_dim()
    }

    /// Concrete forward pass `h_k = φ_k(W_k h_{k-1} + b_k)`; exact.
    pub fn eval(&self, x: &[Rational]) -> Result<Vec<Rational>, ModelError> {
        if x.len() != self.input_dim() {
            return Err(ModelError::DimensionMismatch {
                expected: self.input_dim(),
                got: x.len(),
            });
        }
        let mut h = x.to_vec();
        for layer in &self.layers {
            h = layer
                .weights
                .iter()
                .zip(layer.bias.iter())
                .map(|(row, b)| {
                    let pre: Rational =
                        row.iter().zip(h.iter()).map(|(w, v)| w * v).sum::<Rational>() + b;
                    match layer.activation {
                        Activation::Relu => pre.max(Rational::zero()),
                        Activation::Identity => pre,
                    }
                })
                .collect();
        }
        Ok(h)
    }

    /// Like [`Network::eval`] but returns every layer's post-activation
    /// vector, input excluded.
    pub fn eval_trace(&self, x: &[Rational]) -> Result<Vec<Vec<Rational>>, ModelError> {
        if x.len() != self.input_dim() {
            return Err(ModelError::DimensionMismatch {
                expected: self.input_dim(),
                got: x.len(),
            });
        }
        let mut trace = Vec::with_capacity(self.layers.len());
        let mut h = x.to_vec();
        for layer in &self.layers {
            h = layer
                .weights
                .iter()
                .zip(layer.bias.iter())
                .map(|(row, b)| {
                    let pre: Rational =
                        row.iter().zip(h.iter()).map(|(w, v)| w * v).sum::<Rational>() + b;
                    match layer.activation {
                        Activation::Relu => pre.max(Rational::zero()),
                        Activation::Identity => pre,
                    }
                })
                .collect();
            trace.push(h.clone());
        }
        Ok(trace)
    }

    /// Converts every scalar bias `b` into the singleton interval pair
    /// `b ⊕ [0,0]`, producing the trivial abstraction: for every input the
    /// abstract output box is the singleton `{f(x)}`.
    pub fn lift_trivial(&self) -> AbstractNetwork {
        let layers = self
            .layers
            .iter()
            .map(|l| AbstractLayer {
                weights: l.weights.clone(),
                bias: l.bias.clone(),
                bias_interval: IntervalVector::zeros(l.out_dim()),
                activation: l.activation,
            })
            .collect();
        AbstractNetwork {
            layers,
            provenance: Some(Vec::new()),
        }
    }
}

/// One layer of an abstract network: `φ(W·h + b ⊕ B̂)` where `B̂` is a vector
/// of bias intervals capturing accumulated abstraction error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractLayer {
    weights: Vec<Vec<Rational>>,
    bias: Vec<Rational>,
    bias_interval: IntervalVector,
    activation: Activation,
}

impl AbstractLayer {
    pub fn new(
        weights: Vec<Vec<Rational>>,
        bias: Vec<Rational>,
        bias_interval: IntervalVector,
        activation: Activation,
    ) -> Result<Self, ModelError> {
        let base = Layer::new(weights, bias, activation)?;
        if bias_interval.dim() != base.out_dim() {
            return Err(ModelError::DimensionMismatch {
                expected: base.out_dim(),
                got: bias_interval.dim(),
            });
        }
        Ok(AbstractLayer {
            weights: base.weights,
            bias: base.bias,
            bias_interval,
            activation: base.activation,
        })
    }

    pub fn in_dim(&self) -> usize {
        self.weights[0].len()
    }

    pub fn out_dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Vec<Rational>] {
        &self.weights
    }

    pub fn bias(&self) -> &[Rational] {
        &self.bias
    }

    pub fn bias_interval(&self) -> &IntervalVector {
        &self.bias_interval
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    /// Pre-activation box of one neuron given the previous layer's box:
    /// `row·prev + b + B̂`.
    pub fn pre_activation(&self, neuron: usize, prev: &IntervalVector) -> Result<Interval, ModelError> {
        let dot = interval_dot(&self.weights[neuron], prev).map_err(|_| {
            ModelError::DimensionMismatch {
                expected: self.in_dim(),
                got: prev.dim(),
            }
        })?;
        let shifted = dot.add(&Interval::singleton(self.bias[neuron].clone()));
        Ok(shifted.add(self.bias_interval.get(neuron)))
    }
}

/// A network whose biases are intervals; the executable box semantics is
/// [`AbstractNetwork::eval_interval`]. `provenance`, when present, records
/// the merge steps that produced this network from its concrete origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractNetwork {
    layers: Vec<AbstractLayer>,
    provenance: Option<Vec<MergeRecord>>,
}

impl AbstractNetwork {
    pub fn new(
        layers: Vec<AbstractLayer>,
        provenance: Option<Vec<MergeRecord>>,
    ) -> Result<Self, ModelError> {
        validate_chain(layers.iter().map(|l| (l.in_dim(), l.out_dim(), l.activation)))?;
        Ok(AbstractNetwork { layers, provenance })
    }

    pub fn layers(&self) -> &[AbstractLayer] {
        &self.layers
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].in_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().unwrap().out_dim()
    }

    pub fn provenance(&self) -> Option<&[MergeRecord]> {
        self.provenance.as_deref()
    }

    pub fn with_provenance(mut self, provenance: Option<Vec<MergeRecord>>) -> Self {
        self.provenance = provenance;
        self
    }

    /// Interval forward pass: per layer `φ(W·prev + b + B̂)` computed with
    /// exact interval arithmetic. The result is a sound enclosure of the
    /// abstract network's output set on the given input box.
    pub fn eval_interval(&self, x: &IntervalVector) -> Result<IntervalVector, ModelError> {
        if x.dim() != self.input_dim() {
            return Err(ModelError::DimensionMismatch {
                expected: self.input_dim(),
                got: x.dim(),
            });
        }
        let mut prev = x.clone();
        for layer in &self.layers {
            prev = (0..layer.out_dim())
                .map(|i| {
                    let pre = layer.pre_activation(i, &prev)?;
                    Ok(match layer.activation {
                        Activation::Relu => pre.relu(),
                        Activation::Identity => pre,
                    })
                })
                .collect::<Result<_, ModelError>>()?;
        }
        Ok(prev)
    }
}

fn validate_chain(
    layers: impl ExactSizeIterator<Item = (usize, usize, Activation)>,
) -> Result<(), ModelError> {
    let total = layers.len();
    if total == 0 {
        return Err(ModelError::EmptyNetwork);
    }
    let mut prev_out = None;
    for (index, (in_dim, _out_dim, activation)) in layers.enumerate() {
        if let Some(expected) = prev_out {
            if in_dim != expected {
                return Err(ModelError::DimensionMismatch {
                    expected,
                    got: in_dim,
                });
            }
        }
        let is_last = index + 1 == total;
        match (is_last, activation) {
            (true, Activation::Identity) | (false, Activation::Relu) => {}
            _ => {
                return Err(ModelError::UnsupportedActivation {
                    layer: index + 1,
                    activation,
                })
            }
        }
        prev_out = Some(_out_dim);
    }
    Ok(())
}
