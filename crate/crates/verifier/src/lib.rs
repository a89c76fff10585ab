//! Complete decision procedure for verification queries over concrete and
//! abstract ReLU networks.
//!
//! A query is encoded as an exact LP ([`encode`]): input-box bounds, one
//! affine relation per neuron (interval biases become inequality pairs or
//! skip-connection variables depending on [`EncodingMode`]), the triangle
//! relaxation `post ≥ pre`, `post ≥ 0` with interval-propagated upper
//! bounds, and the output polytope's halfspaces. [`decide`] then case-splits
//! ReLU phases: at each node the relaxation is solved, a feasible
//! phase-consistent point is a SAT witness, an infeasible node closes with
//! its Farkas certificate, and otherwise the search splits on the ReLU whose
//! relaxation value strays farthest from `relu(pre)`. UNSAT results assemble
//! a [`VerificationProofTree`] whose leaves refute the encoding under their
//! path's phase fixings.
//!
//! [`run_pipeline`] wraps the whole abstraction-refinement loop: abstract,
//! decide, return real counterexamples, refine away spurious ones, and on
//! UNSAT emit the composed two-part proof bundle.
//!
//! The search is deterministic: Bland's rule in the LP, fixed variable and
//! row orders in the encoding, lowest-index tie-breaks in the split
//! heuristic. Encoding and search are pure; queries can be decided
//! concurrently.

mod encode;
mod pipeline;
mod search;

pub use encode::{encode, encode_abstract, node_system, tighten_bounds, Encoding, ReluVar, VarMap};
pub use pipeline::{run_pipeline, PipelineConfig, PipelineOutcome};
pub use proof_reexports::*;
pub use search::{
    decide, output_range, spurious_check, verify_with_proofs, SatWitness, SpuriousCheck, Verdict,
};

mod proof_reexports {
    pub use relucert_proof::{EncodingMode, Phase, ReluId, SplitDecision};
}

use relucert_abstraction::AbstractionError;
use relucert_model::ModelError;
use relucert_proof::ProofError;

/// Errors raised while encoding, deciding or running the pipeline.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifierError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Abstraction(#[from] AbstractionError),
    #[error(transparent)]
    Lp(#[from] relucert_lp::LpError),
    #[error(transparent)]
    Proof(#[from] ProofError),
    #[error("witness lies outside the input box")]
    WitnessOutsideBox,
    #[error("query is satisfiable; no UNSAT proof exists")]
    QueryIsSat,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
