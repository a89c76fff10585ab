use relucert_lp::{LinearSystem, Rel};
use relucert_model::{
    AbstractNetwork, Activation, InputBox, NetworkRef, OutputPolytope, Query,
};
use relucert_numerics::{Interval, Rational};
use relucert_proof::{EncodingMode, Phase, ReluId, SplitDecision};

use crate::VerifierError;

/// Variable layout of an encoding. All indices are LP variable indices.
///
/// The order is part of the proof format: inputs first; then per layer its
/// pre-activation variables followed by its post-activation variables (an
/// affine output layer has a single variable per neuron playing both
/// roles); finally, in skip-connection mode, one auxiliary bias variable per
/// neuron, layers in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarMap {
    pub inputs: Vec<usize>,
    /// Per layer: (pre vars, post vars). For identity layers the two lists
    /// are identical.
    pub layers: Vec<(Vec<usize>, Vec<usize>)>,
    /// Per layer: auxiliary bias variables (skip-connection mode only).
    pub aux: Option<Vec<Vec<usize>>>,
    pub num_vars: usize,
}

impl VarMap {
    pub fn outputs(&self) -> &[usize] {
        &self.layers.last().expect("networks are nonempty").1
    }

    fn build(net: &AbstractNetwork, mode: EncodingMode) -> VarMap {
        let mut next = 0usize;
        let mut take = |n: usize| -> Vec<usize> {
            let vars = (next..next + n).collect();
            next += n;
            vars
        };
        let inputs = take(net.input_dim());
        let mut layers = Vec::with_capacity(net.num_layers());
        for layer in net.layers() {
            match layer.activation() {
                Activation::Relu => {
                    let pre = take(layer.out_dim());
                    let post = take(layer.out_dim());
                    layers.push((pre, post));
                }
                Activation::Identity => {
                    let vars = take(layer.out_dim());
                    layers.push((vars.clone(), vars));
                }
            }
        }
        let aux = match mode {
            EncodingMode::SkipConnection => Some(
                net.layers()
                    .iter()
                    .map(|layer| take(layer.out_dim()))
                    .collect(),
            ),
            EncodingMode::InequalityBias => None,
        };
        VarMap {
            inputs,
            layers,
            aux,
            num_vars: next,
        }
    }
}

/// One ReLU's variable pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReluVar {
    pub id: ReluId,
    pub pre: usize,
    pub post: usize,
}

/// A query encoded as an exact LP plus the bookkeeping the search needs.
#[derive(Debug, Clone)]
pub struct Encoding {
    pub mode: EncodingMode,
    pub system: LinearSystem,
    pub var_map: VarMap,
    pub relus: Vec<ReluVar>,
}

/// Encodes a query (concrete networks are lifted trivially first).
pub fn encode(query: &Query, mode: EncodingMode) -> Result<Encoding, VerifierError> {
    let net = match &query.network {
        NetworkRef::Concrete(n) => n.lift_trivial(),
        NetworkRef::Abstract(n) => n.clone(),
    };
    encode_abstract(&net, &query.input, &query.output, mode)
}

/// Encodes an abstract network against an input box and output polytope.
///
/// Row order (also part of the proof format): per layer, per neuron, the
/// affine relation — in inequality-bias mode the `≥`/`≤` pair offset by the
/// bias-interval endpoints, in skip-connection mode one equality coupling
/// the auxiliary bias variable — then one `post - pre ≥ 0` row per ReLU,
/// then the output halfspaces. Variable bounds carry the input box, the
/// interval-propagated pre/post ranges, and the bias intervals.
pub fn encode_abstract(
    net: &AbstractNetwork,
    input: &InputBox,
    output: &OutputPolytope,
    mode: EncodingMode,
) -> Result<Encoding, VerifierError> {
    if input.dim() != net.input_dim() {
        return Err(relucert_model::ModelError::DimensionMismatch {
            expected: net.input_dim(),
            got: input.dim(),
        }
        .into());
    }
    if output.dim() != net.output_dim() {
        return Err(relucert_model::ModelError::DimensionMismatch {
            expected: net.output_dim(),
            got: output.dim(),
        }
        .into());
    }

    let var_map = VarMap::build(net, mode);
    let mut system = LinearSystem::new(var_map.num_vars);

    // Affine rows.
    for (k, layer) in net.layers().iter().enumerate() {
        let prev: &[usize] = if k == 0 {
            &var_map.inputs
        } else {
            &var_map.layers[k - 1].1
        };
        for i in 0..layer.out_dim() {
            let out_var = var_map.layers[k].0[i];
            let mut coeffs = vec![Rational::zero(); var_map.num_vars];
            coeffs[out_var] = Rational::one();
            for (j, w) in layer.weights()[i].iter().enumerate() {
                coeffs[prev[j]] = -w;
            }
            let bias = layer.bias()[i].clone();
            match mode {
                EncodingMode::InequalityBias => {
                    let b_hat = layer.bias_interval().get(i);
                    system
                        .push(coeffs.clone(), Rel::Ge, &bias + b_hat.lo())
                        .expect("row width matches");
                    system
                        .push(coeffs, Rel::Le, &bias + b_hat.hi())
                        .expect("row width matches");
                }
                EncodingMode::SkipConnection => {
                    let aux = var_map.aux.as_ref().expect("skip mode has aux vars");
                    coeffs[aux[k][i]] = -Rational::one();
                    system.push(coeffs, Rel::Eq, bias).expect("row width matches");
                }
            }
        }
    }

    // ReLU relaxation rows: post - pre >= 0. The post >= 0 side and the
    // upper bounds come from the propagated variable bounds.
    let mut relus = Vec::new();
    for (k, layer) in net.layers().iter().enumerate() {
        if layer.activation() != Activation::Relu {
            continue;
        }
        for i in 0..layer.out_dim() {
            let (pre, post) = (var_map.layers[k].0[i], var_map.layers[k].1[i]);
            let mut coeffs = vec![Rational::zero(); var_map.num_vars];
            coeffs[post] = Rational::one();
            coeffs[pre] = -Rational::one();
            system
                .push(coeffs, Rel::Ge, Rational::zero())
                .expect("row width matches");
            relus.push(ReluVar {
                id: ReluId {
                    layer: k + 1,
                    neuron: i + 1,
                },
                pre,
                post,
            });
        }
    }

    // Output polytope rows.
    let outputs = var_map.outputs().to_vec();
    for halfspace in output.halfspaces() {
        let mut coeffs = vec![Rational::zero(); var_map.num_vars];
        for (j, c) in halfspace.coeffs.iter().enumerate() {
            coeffs[outputs[j]] = c.clone();
        }
        system
            .push(coeffs, Rel::Le, halfspace.rhs.clone())
            .expect("row width matches");
    }

    // Root variable bounds from interval propagation with no phase fixings.
    let mut encoding = Encoding {
        mode,
        system,
        var_map,
        relus,
    };
    let bounds = tighten_bounds(net, input, &[], &encoding);
    for (var, iv) in bounds {
        encoding.system.set_bound(var, iv);
    }
    Ok(encoding)
}

/// Interval propagation under a partial phase assignment, producing one
/// bound per LP variable.
///
/// Per ReLU the path decision clamps the pre-activation interval to its
/// half-line (kept unclamped when the intersection is empty — the node's
/// LP rows then carry the contradiction) and pins the post interval to the
/// clamped pre (active) or to `[0,0]` (inactive); undecided ReLUs get
/// `relu(pre)`. Deterministic; checkers rebuild node systems with the same
/// procedure.
pub fn tighten_bounds(
    net: &AbstractNetwork,
    input: &InputBox,
    path: &[SplitDecision],
    encoding: &Encoding,
) -> Vec<(usize, Interval)> {
    let var_map = &encoding.var_map;
    let mut bounds: Vec<(usize, Interval)> = Vec::with_capacity(var_map.num_vars);
    for (&var, iv) in var_map.inputs.iter().zip(input.bounds().iter()) {
        bounds.push((var, iv.clone()));
    }
    let mut prev: relucert_numerics::IntervalVector = input.bounds().clone();
    for (k, layer) in net.layers().iter().enumerate() {
        let mut post_ivs = Vec::with_capacity(layer.out_dim());
        for i in 0..layer.out_dim() {
            let pre_iv = layer.pre_activation(i, &prev).expect("dims match");
            match layer.activation() {
                Activation::Relu => {
                    let decision = path.iter().find(|d| {
                        d.relu.layer == k + 1 && d.relu.neuron == i + 1
                    });
                    let (pre_t, post_t) = match decision.map(|d| d.phase) {
                        Some(Phase::Active) => {
                            // pre ∩ [0, ∞), kept unclamped when empty.
                            let clamped = if pre_iv.hi().is_negative() {
                                pre_iv.clone()
                            } else {
                                Interval::new(
                                    pre_iv.lo().clone().max(Rational::zero()),
                                    pre_iv.hi().clone(),
                                )
                                .expect("hi >= 0 >= lo'")
                            };
                            (clamped.clone(), clamped)
                        }
                        Some(Phase::Inactive) => {
                            // pre ∩ (-∞, 0], kept unclamped when empty.
                            let clamped = if pre_iv.lo().is_positive() {
                                pre_iv.clone()
                            } else {
                                Interval::new(
                                    pre_iv.lo().clone(),
                                    pre_iv.hi().clone().min(Rational::zero()),
                                )
                                .expect("lo <= 0 <= hi'")
                            };
                            (clamped, Interval::zero())
                        }
                        None => (pre_iv.clone(), pre_iv.relu()),
                    };
                    bounds.push((var_map.layers[k].0[i], pre_t));
                    bounds.push((var_map.layers[k].1[i], post_t.clone()));
                    post_ivs.push(post_t);
                }
                Activation::Identity => {
                    bounds.push((var_map.layers[k].0[i], pre_iv.clone()));
                    post_ivs.push(pre_iv);
                }
            }
        }
        prev = post_ivs.into_iter().collect();
    }
    if let Some(aux) = &var_map.aux {
        for (k, layer) in net.layers().iter().enumerate() {
            for i in 0..layer.out_dim() {
                bounds.push((aux[k][i], layer.bias_interval().get(i).clone()));
            }
        }
    }
    bounds
}

/// The LP a proof-tree node stands for: the root encoding's rows, the
/// path's phase rows in order, and variable bounds tightened under the
/// path.
pub fn node_system(
    encoding: &Encoding,
    net: &AbstractNetwork,
    input: &InputBox,
    path: &[SplitDecision],
) -> LinearSystem {
    let mut sys = encoding.system.clone();
    for decision in path {
        let relu = encoding
            .relus
            .iter()
            .find(|r| r.id == decision.relu)
            .expect("path decisions reference encoded relus");
        let mut pre_row = vec![Rational::zero(); encoding.var_map.num_vars];
        pre_row[relu.pre] = Rational::one();
        let mut eq_row = vec![Rational::zero(); encoding.var_map.num_vars];
        eq_row[relu.post] = Rational::one();
        match decision.phase {
            Phase::Active => {
                sys.push(pre_row, Rel::Ge, Rational::zero()).expect("width");
                eq_row[relu.pre] = -Rational::one();
                sys.push(eq_row, Rel::Eq, Rational::zero()).expect("width");
            }
            Phase::Inactive => {
                sys.push(pre_row, Rel::Le, Rational::zero()).expect("width");
                sys.push(eq_row, Rel::Eq, Rational::zero()).expect("width");
            }
        }
    }
    for (var, iv) in tighten_bounds(net, input, path, encoding) {
        sys.set_bound(var, iv);
    }
    sys
}
