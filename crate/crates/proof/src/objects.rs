use relucert_lp::FarkasCertificate;
use relucert_model::{
    sha256_hex, Halfspace, InputBox, MergeBucket, Network, OutputPolytope,
};
use relucert_numerics::{Interval, IntervalVector};
use serde::{Deserialize, Serialize};

/// How interval biases are encoded into the LP query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EncodingMode {
    /// Each interval bias becomes a pair of inequalities with the interval
    /// endpoints as offsets.
    #[serde(rename = "ineq")]
    InequalityBias,
    /// Each bias coordinate gets a fresh bounded input variable coupled
    /// with weight one, like a skip connection.
    #[serde(rename = "skip")]
    SkipConnection,
}

/// A ReLU neuron addressed by 1-based layer and neuron index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReluId {
    pub layer: usize,
    pub neuron: usize,
}

/// Case-split phase of a ReLU: active pins `post = pre ∧ pre ≥ 0`,
/// inactive pins `post = 0 ∧ pre ≤ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Active,
    Inactive,
}

/// One case-split decision along a proof-tree path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitDecision {
    pub relu: ReluId,
    pub phase: Phase,
}

/// A node of the UNSAT proof tree: either a Farkas certificate refuting the
/// encoding under the path's phase fixings, or a complete case split with
/// both phases present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofNode {
    Leaf {
        certificate: FarkasCertificate,
    },
    Split {
        relu: ReluId,
        active: Box<ProofNode>,
        inactive: Box<ProofNode>,
    },
}

impl ProofNode {
    /// Number of leaves below (and including) this node.
    pub fn num_leaves(&self) -> usize {
        match self {
            ProofNode::Leaf { .. } => 1,
            ProofNode::Split { active, inactive, .. } => {
                active.num_leaves() + inactive.num_leaves()
            }
        }
    }
}

/// The UNSAT proof for one abstract query. `root_encoding_digest` commits
/// to the exact encoding inputs (network digest, properties, mode), so a
/// checker re-encoding the query from scratch can tell whether this tree
/// talks about it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationProofTree {
    pub network_digest: String,
    pub mode: EncodingMode,
    pub root_encoding_digest: String,
    pub root: ProofNode,
}

impl VerificationProofTree {
    pub fn new(
        network_digest: String,
        mode: EncodingMode,
        input: &InputBox,
        output: &OutputPolytope,
        root: ProofNode,
    ) -> Self {
        let root_encoding_digest = encoding_digest(&network_digest, input, output, mode);
        VerificationProofTree {
            network_digest,
            mode,
            root_encoding_digest,
            root,
        }
    }
}

#[derive(Serialize)]
struct EncodingStamp<'a> {
    network_digest: &'a str,
    input_box: &'a [Interval],
    output_halfspaces: &'a [Halfspace],
    mode: EncodingMode,
}

/// Digest of an encoding's defining inputs. Both ends of the pipeline
/// derive the LP system deterministically from these four values, so
/// hashing them pins the encoding itself.
pub fn encoding_digest(
    network_digest: &str,
    input: &InputBox,
    output: &OutputPolytope,
    mode: EncodingMode,
) -> String {
    let stamp = EncodingStamp {
        network_digest,
        input_box: input.bounds().entries(),
        output_halfspaces: output.halfspaces(),
        mode,
    };
    sha256_hex(serde_json::to_string(&stamp).expect("stamp serializes").as_bytes())
}

/// One rule application in the over-approximation proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum AbstractionStep {
    /// Biases become singleton intervals; the lifted network agrees with
    /// the origin pointwise.
    TrivialLift,
    /// Claims `bounds ⊇` the reachable set of layer `layer` under the input
    /// box, on the network state current at this point of the step list.
    BoundAnnotation { layer: usize, bounds: IntervalVector },
    /// Removes the bucket's neurons and adds `bias_contribution` (the
    /// bucket columns times the annotated bounds) to the next layer's bias
    /// interval.
    Merge {
        bucket: MergeBucket,
        bias_contribution: IntervalVector,
    },
}

/// Ordered derivation that the final abstract network over-approximates the
/// origin network on `input_box`; replaying the steps from the origin must
/// reproduce `final_digest`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractionProof {
    pub origin_digest: String,
    pub input_box: InputBox,
    pub steps: Vec<AbstractionStep>,
    pub final_digest: String,
}

/// The full two-part bundle: UNSAT of the abstract query plus the
/// over-approximation argument, together certifying UNSAT of the original
/// query. Embeds the origin network so checking needs no other artifacts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractProof {
    pub origin_network: Network,
    pub input_box: InputBox,
    pub output: OutputPolytope,
    pub abstraction: AbstractionProof,
    pub verification: VerificationProofTree,
}
