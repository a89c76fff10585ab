use sha2::{Digest, Sha256};

use crate::json::{abstract_network_to_json, network_to_json};
use crate::{AbstractNetwork, Network};

/// SHA-256 of the given bytes as lowercase hex.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for byte in digest {
        use std::fmt::Write;
        write!(out, "{byte:02x}").unwrap();
    }
    out
}

/// Content digest of a concrete network: SHA-256 over its canonical JSON
/// form (compact, declaration field order, decimal-string rationals).
pub fn digest_network(net: &Network) -> String {
    let json = serde_json::to_string(&network_to_json(net)).expect("network serializes");
    sha256_hex(json.as_bytes())
}

/// Content digest of an abstract network. Only the structure (layers,
/// weights, biases, bias intervals) is hashed; provenance is metadata and
/// deliberately excluded, so replaying recorded steps reproduces the digest.
pub fn digest_abstract_network(net: &AbstractNetwork) -> String {
    let json =
        serde_json::to_string(&abstract_network_to_json(net)).expect("network serializes");
    sha256_hex(json.as_bytes())
}
