use relucert_lp::{check_certificate, optimize, solve_feasibility, Feasibility, Optimum, Sense};
use relucert_model::{
    digest_abstract_network, AbstractNetwork, InputBox, Network, NetworkRef, OutputPolytope,
    Query,
};
use relucert_numerics::{Interval, Rational};
use relucert_proof::{
    EncodingMode, Phase, ProofNode, ReluId, SplitDecision, VerificationProofTree,
};

use crate::encode::{encode, node_system, Encoding};
use crate::VerifierError;

/// A satisfying assignment of the encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatWitness {
    /// The input-coordinate projection, the part the spurious check needs.
    pub input: Vec<Rational>,
    /// Bias choices of the auxiliary skip-connection variables, when the
    /// encoding has them; logs which abstraction slack produced the hit.
    pub aux: Option<Vec<Rational>>,
    /// The full LP assignment over the encoding's variables.
    pub assignment: Vec<Rational>,
}

/// Decision outcome for one query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Sat(SatWitness),
    Unsat(VerificationProofTree),
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }
}

/// Spurious-check outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpuriousCheck {
    RealCounterexample { output: Vec<Rational> },
    Spurious,
}

enum SearchOutcome {
    Sat(SatWitness),
    Closed(ProofNode),
}

/// Complete decision procedure. Terminates because every split fixes one
/// more ReLU phase and fully fixed nodes are pure LPs.
pub fn decide(query: &Query, mode: EncodingMode) -> Result<Verdict, VerifierError> {
    let net = query.network.to_abstract();
    let encoding = encode(query, mode)?;
    let mut path = Vec::new();
    match search(&encoding, &net, &query.input, &mut path)? {
        SearchOutcome::Sat(witness) => Ok(Verdict::Sat(witness)),
        SearchOutcome::Closed(root) => Ok(Verdict::Unsat(VerificationProofTree::new(
            digest_abstract_network(&net),
            mode,
            &query.input,
            &query.output,
            root,
        ))),
    }
}

fn search(
    encoding: &Encoding,
    net: &AbstractNetwork,
    input: &InputBox,
    path: &mut Vec<SplitDecision>,
) -> Result<SearchOutcome, VerifierError> {
    let sys = node_system(encoding, net, input, path);
    let point = match solve_feasibility(&sys)? {
        Feasibility::Infeasible(certificate) => {
            return Ok(SearchOutcome::Closed(ProofNode::Leaf { certificate }))
        }
        Feasibility::Feasible(point) => point,
    };

    // Largest violation |post - relu(pre)| among path-undecided ReLUs;
    // strictly-greater keeps the lowest (layer, neuron) among ties.
    let mut split: Option<(ReluId, Rational)> = None;
    for relu in &encoding.relus {
        if path.iter().any(|d| d.relu == relu.id) {
            continue;
        }
        let expected = point[relu.pre].clone().max(Rational::zero());
        let violation = (&point[relu.post] - &expected).abs();
        if violation.is_zero() {
            continue;
        }
        match &split {
            Some((_, best)) if *best >= violation => {}
            _ => split = Some((relu.id, violation)),
        }
    }

    let Some((relu, _)) = split else {
        let input_vars = &encoding.var_map.inputs;
        let witness = SatWitness {
            input: input_vars.iter().map(|&v| point[v].clone()).collect(),
            aux: encoding.var_map.aux.as_ref().map(|aux| {
                aux.iter()
                    .flatten()
                    .map(|&v| point[v].clone())
                    .collect()
            }),
            assignment: point,
        };
        return Ok(SearchOutcome::Sat(witness));
    };

    path.push(SplitDecision {
        relu,
        phase: Phase::Active,
    });
    let active = match search(encoding, net, input, path)? {
        SearchOutcome::Sat(w) => {
            path.pop();
            return Ok(SearchOutcome::Sat(w));
        }
        SearchOutcome::Closed(node) => node,
    };
    path.pop();

    path.push(SplitDecision {
        relu,
        phase: Phase::Inactive,
    });
    let inactive = match search(encoding, net, input, path)? {
        SearchOutcome::Sat(w) => {
            path.pop();
            return Ok(SearchOutcome::Sat(w));
        }
        SearchOutcome::Closed(node) => node,
    };
    path.pop();

    Ok(SearchOutcome::Closed(ProofNode::Split {
        relu,
        active: Box::new(active),
        inactive: Box::new(inactive),
    }))
}

/// Checks a SAT witness of an abstract query against the original network.
/// The witness input must lie in the box; it is a real counterexample iff
/// the concrete network maps it into the output polytope.
pub fn spurious_check(
    net: &Network,
    query: &Query,
    witness_input: &[Rational],
) -> Result<SpuriousCheck, VerifierError> {
    if !query.input.contains(witness_input)? {
        return Err(VerifierError::WitnessOutsideBox);
    }
    let output = net.eval(witness_input)?;
    if query.output.contains(&output)? {
        Ok(SpuriousCheck::RealCounterexample { output })
    } else {
        Ok(SpuriousCheck::Spurious)
    }
}

/// Decides the abstract query and returns its UNSAT proof tree, after
/// revalidating every leaf certificate against its node's system. Errors
/// when the query is satisfiable.
pub fn verify_with_proofs(
    net: &AbstractNetwork,
    input: &InputBox,
    output: &OutputPolytope,
    mode: EncodingMode,
) -> Result<VerificationProofTree, VerifierError> {
    let query = Query::new(
        NetworkRef::Abstract(net.clone()),
        input.clone(),
        output.clone(),
    )?;
    let tree = match decide(&query, mode)? {
        Verdict::Sat(_) => return Err(VerifierError::QueryIsSat),
        Verdict::Unsat(tree) => tree,
    };
    let encoding = encode(&query, mode)?;
    let mut path = Vec::new();
    revalidate(&encoding, net, input, &tree.root, &mut path)?;
    Ok(tree)
}

fn revalidate(
    encoding: &Encoding,
    net: &AbstractNetwork,
    input: &InputBox,
    node: &ProofNode,
    path: &mut Vec<SplitDecision>,
) -> Result<(), VerifierError> {
    match node {
        ProofNode::Leaf { certificate } => {
            let sys = node_system(encoding, net, input, path);
            if !check_certificate(&sys, certificate)? {
                return Err(VerifierError::Internal(format!(
                    "freshly produced leaf certificate fails at path {path:?}"
                )));
            }
            Ok(())
        }
        ProofNode::Split {
            relu,
            active,
            inactive,
        } => {
            path.push(SplitDecision {
                relu: *relu,
                phase: Phase::Active,
            });
            revalidate(encoding, net, input, active, path)?;
            path.pop();
            path.push(SplitDecision {
                relu: *relu,
                phase: Phase::Inactive,
            });
            revalidate(encoding, net, input, inactive, path)?;
            path.pop();
            Ok(())
        }
    }
}

/// Exact output range of one output neuron over the box: branch over every
/// interval-ambiguous ReLU phase pattern and optimize the fully fixed LPs.
/// The hull over feasible patterns is the exact range of the network's
/// output set (both encodings describe that set exactly).
pub fn output_range(
    net: &AbstractNetwork,
    input: &InputBox,
    output_index: usize,
    mode: EncodingMode,
) -> Result<Interval, VerifierError> {
    // Any output polytope works for encoding the network; a tautological
    // halfspace keeps the LP unconstrained.
    let free = OutputPolytope::new(vec![relucert_model::Halfspace {
        coeffs: vec![Rational::zero(); net.output_dim()],
        rhs: Rational::zero(),
    }])?;
    let encoding = crate::encode::encode_abstract(net, input, &free, mode)?;
    let out_var = encoding.var_map.outputs()[output_index];
    let mut objective = vec![Rational::zero(); encoding.var_map.num_vars];
    objective[out_var] = Rational::one();

    // Phases forced by the root intervals need no branching.
    let root_bounds = crate::encode::tighten_bounds(net, input, &[], &encoding);
    let bound_of = |var: usize| -> &Interval {
        &root_bounds
            .iter()
            .find(|(v, _)| *v == var)
            .expect("every variable is bounded")
            .1
    };
    let mut forced = Vec::new();
    let mut ambiguous = Vec::new();
    for relu in &encoding.relus {
        let pre = bound_of(relu.pre);
        if !pre.lo().is_negative() {
            forced.push(SplitDecision {
                relu: relu.id,
                phase: Phase::Active,
            });
        } else if !pre.hi().is_positive() {
            forced.push(SplitDecision {
                relu: relu.id,
                phase: Phase::Inactive,
            });
        } else {
            ambiguous.push(relu.id);
        }
    }

    let mut range: Option<Interval> = None;
    for pattern in 0u64..(1u64 << ambiguous.len()) {
        let mut path = forced.clone();
        for (bit, relu) in ambiguous.iter().enumerate() {
            path.push(SplitDecision {
                relu: *relu,
                phase: if pattern & (1 << bit) == 0 {
                    Phase::Inactive
                } else {
                    Phase::Active
                },
            });
        }
        let sys = node_system(&encoding, net, input, &path);
        let lo = match optimize(&sys, &objective, Sense::Min)? {
            Optimum::Optimal { value, .. } => value,
            Optimum::Infeasible(_) => continue,
            Optimum::Unbounded => {
                return Err(VerifierError::Internal(
                    "bounded encoding reported an unbounded output".into(),
                ))
            }
        };
        let hi = match optimize(&sys, &objective, Sense::Max)? {
            Optimum::Optimal { value, .. } => value,
            _ => {
                return Err(VerifierError::Internal(
                    "min solved but max did not".into(),
                ))
            }
        };
        let cell = Interval::new(lo, hi).expect("min <= max");
        range = Some(match range {
            None => cell,
            Some(acc) => acc.hull(&cell),
        });
    }
    range.ok_or_else(|| {
        VerifierError::Internal("no feasible phase pattern over a nonempty box".into())
    })
}
