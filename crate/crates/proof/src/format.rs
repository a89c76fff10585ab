use relucert_model::json::{
    network_from_json, network_to_json, property_from_json, property_to_json, NetworkJson,
    PropertyJson,
};
use relucert_model::NetworkRef;
use relucert_numerics::Interval;
use serde::{Deserialize, Serialize};

use crate::objects::{
    AbstractProof, AbstractionProof, AbstractionStep, EncodingMode, ProofNode,
    VerificationProofTree,
};
use crate::ProofError;

pub const PROOF_FORMAT_VERSION: u32 = 1;

/// On-disk shape of an [`AbstractProof`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProofFile {
    pub version: u32,
    pub query: PropertyJson,
    pub origin_network: NetworkJson,
    pub abstraction: AbstractionJson,
    pub verification: VerificationJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AbstractionJson {
    pub origin_digest: String,
    pub input_box: Vec<Interval>,
    pub steps: Vec<AbstractionStep>,
    pub final_digest: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationJson {
    pub network_digest: String,
    pub mode: EncodingMode,
    pub root_encoding_digest: String,
    pub tree: ProofNode,
}

impl From<&AbstractProof> for ProofFile {
    fn from(proof: &AbstractProof) -> Self {
        ProofFile {
            version: PROOF_FORMAT_VERSION,
            query: property_to_json(&proof.input_box, &proof.output),
            origin_network: network_to_json(&proof.origin_network),
            abstraction: AbstractionJson {
                origin_digest: proof.abstraction.origin_digest.clone(),
                input_box: proof.abstraction.input_box.bounds().entries().to_vec(),
                steps: proof.abstraction.steps.clone(),
                final_digest: proof.abstraction.final_digest.clone(),
            },
            verification: VerificationJson {
                network_digest: proof.verification.network_digest.clone(),
                mode: proof.verification.mode,
                root_encoding_digest: proof.verification.root_encoding_digest.clone(),
                tree: proof.verification.root.clone(),
            },
        }
    }
}

impl TryFrom<ProofFile> for AbstractProof {
    type Error = ProofError;

    fn try_from(file: ProofFile) -> Result<Self, ProofError> {
        if file.version != PROOF_FORMAT_VERSION {
            return Err(ProofError::PartMismatch("unsupported proof format version"));
        }
        let (input_box, output) = property_from_json(&file.query)?;
        let origin_network = match network_from_json(&file.origin_network)? {
            NetworkRef::Concrete(net) => net,
            NetworkRef::Abstract(_) => {
                return Err(ProofError::PartMismatch(
                    "origin network must be concrete (no bias intervals)",
                ))
            }
        };
        Ok(AbstractProof {
            origin_network,
            input_box,
            output,
            abstraction: AbstractionProof {
                origin_digest: file.abstraction.origin_digest,
                input_box: relucert_model::InputBox::new(
                    relucert_numerics::IntervalVector::new(file.abstraction.input_box),
                ),
                steps: file.abstraction.steps,
                final_digest: file.abstraction.final_digest,
            },
            verification: VerificationProofTree {
                network_digest: file.verification.network_digest,
                mode: file.verification.mode,
                root_encoding_digest: file.verification.root_encoding_digest,
                root: file.verification.tree,
            },
        })
    }
}

/// Canonical compact JSON bytes of a proof bundle.
pub fn serialize(proof: &AbstractProof) -> Vec<u8> {
    serde_json::to_vec(&ProofFile::from(proof)).expect("proof serializes")
}

/// Pretty-printed JSON for file output; same canonical field order.
pub fn to_writer_pretty<W: std::io::Write>(
    writer: W,
    proof: &AbstractProof,
) -> std::io::Result<()> {
    serde_json::to_writer_pretty(writer, &ProofFile::from(proof)).map_err(std::io::Error::from)
}

/// Parses a proof bundle, reporting malformed input with line, column and
/// byte offset.
pub fn deserialize(bytes: &[u8]) -> Result<AbstractProof, ProofError> {
    let file: ProofFile = serde_json::from_slice(bytes).map_err(|e| parse_error(bytes, &e))?;
    AbstractProof::try_from(file)
}

pub(crate) fn parse_error(bytes: &[u8], err: &serde_json::Error) -> ProofError {
    let (line, column) = (err.line(), err.column());
    let mut offset = 0usize;
    let mut current_line = 1usize;
    for (i, b) in bytes.iter().enumerate() {
        if current_line == line {
            offset = i + column.saturating_sub(1);
            break;
        }
        if *b == b'\n' {
            current_line += 1;
        }
    }
    if line <= 1 {
        offset = column.saturating_sub(1);
    }
    ProofError::Parse {
        line,
        column,
        offset,
        message: err.to_string(),
    }
}
