//! Proof objects and their wire format.
//!
//! An UNSAT result ships as a two-part bundle ([`AbstractProof`]):
//!
//! * an [`AbstractionProof`] — the ordered step list (trivial lift, bound
//!   annotations, merges) showing that the abstract network
//!   over-approximates the original on the input box, so UNSAT transfers
//!   from the abstract query to the original one;
//! * a [`VerificationProofTree`] — a binary case-split tree over ReLU phases
//!   whose leaves carry Farkas certificates refuting the abstract query's
//!   encoding under the path's phase fixings.
//!
//! The two halves are tied together by content digests: the abstraction
//! proof names the origin and final networks, and the tree's
//! [`encoding_digest`] commits to the final network, the properties and the
//! encoding mode. [`compose`] refuses to bundle halves whose digests
//! disagree. Proof files embed the full origin network so a checker needs
//! nothing else.
//!
//! All values here are immutable; serialization is pure and canonical
//! (stable field order, decimal-string numbers), so structural equality and
//! byte equality coincide after a round trip.

mod format;
mod objects;

pub use format::{deserialize, serialize, to_writer_pretty, ProofFile};
pub use objects::{
    encoding_digest, AbstractProof, AbstractionProof, AbstractionStep, EncodingMode, Phase,
    ProofNode, ReluId, SplitDecision, VerificationProofTree,
};

use relucert_model::{digest_network, ModelError, NetworkRef, Query};

/// Errors for proof construction and parsing.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProofError {
    #[error("abstract network carries no provenance; cannot derive an abstraction proof")]
    MissingProvenance,
    #[error("{what} digest mismatch: expected {expected}, got {got}")]
    DigestMismatch {
        what: &'static str,
        expected: String,
        got: String,
    },
    #[error("proof parts disagree: {0}")]
    PartMismatch(&'static str),
    #[error("malformed proof file at line {line}, column {column} (byte {offset}): {message}")]
    Parse {
        line: usize,
        column: usize,
        offset: usize,
        message: String,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Serializes an abstract network's provenance into the ordered rule list:
/// the trivial lift first, then for every merge a bound annotation with the
/// layer bounds the merge actually used, followed by the merge itself.
pub fn prove_over_approximation(
    abstracted: &relucert_model::AbstractNetwork,
    origin: &relucert_model::Network,
    input_box: &relucert_model::InputBox,
) -> Result<AbstractionProof, ProofError> {
    let records = abstracted
        .provenance()
        .ok_or(ProofError::MissingProvenance)?;
    let mut steps = Vec::with_capacity(1 + 2 * records.len());
    steps.push(AbstractionStep::TrivialLift);
    for record in records {
        steps.push(AbstractionStep::BoundAnnotation {
            layer: record.bucket.layer_index,
            bounds: record.layer_bounds.clone(),
        });
        steps.push(AbstractionStep::Merge {
            bucket: record.bucket.clone(),
            bias_contribution: record.bias_contribution.clone(),
        });
    }
    Ok(AbstractionProof {
        origin_digest: digest_network(origin),
        input_box: input_box.clone(),
        steps,
        final_digest: relucert_model::digest_abstract_network(abstracted),
    })
}

/// Bundles the two proof halves after checking they speak about the same
/// networks and properties. The query must range over the original
/// (concrete) network.
pub fn compose(
    abstraction: AbstractionProof,
    verification: VerificationProofTree,
    query: &Query,
) -> Result<AbstractProof, ProofError> {
    let origin = match &query.network {
        NetworkRef::Concrete(net) => net,
        NetworkRef::Abstract(_) => {
            return Err(ProofError::PartMismatch(
                "bundle queries range over the original concrete network",
            ))
        }
    };
    let origin_digest = digest_network(origin);
    if origin_digest != abstraction.origin_digest {
        return Err(ProofError::DigestMismatch {
            what: "origin network",
            expected: abstraction.origin_digest.clone(),
            got: origin_digest,
        });
    }
    if abstraction.input_box != query.input {
        return Err(ProofError::PartMismatch(
            "abstraction proof and query use different input boxes",
        ));
    }
    if verification.network_digest != abstraction.final_digest {
        return Err(ProofError::DigestMismatch {
            what: "abstract network",
            expected: abstraction.final_digest.clone(),
            got: verification.network_digest.clone(),
        });
    }
    let expected_root = encoding_digest(
        &verification.network_digest,
        &query.input,
        &query.output,
        verification.mode,
    );
    if expected_root != verification.root_encoding_digest {
        return Err(ProofError::DigestMismatch {
            what: "root encoding",
            expected: expected_root,
            got: verification.root_encoding_digest.clone(),
        });
    }
    Ok(AbstractProof {
        origin_network: origin.clone(),
        input_box: query.input.clone(),
        output: query.output.clone(),
        abstraction,
        verification,
    })
}
