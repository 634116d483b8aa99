//! Run manifests embedded in every output file for reproducibility.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Provenance of one tool invocation. The serialized fields are all
/// deterministic functions of the invocation, so embedding a manifest
/// keeps outputs byte-identical across runs; wall time is reported on the
/// diagnostic stream instead.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub inputs: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunManifest {
    pub fn new(command: impl Into<String>) -> Self {
        RunManifest {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: BTreeMap::new(),
            seed: None,
        }
    }

    pub fn record_input(&mut self, path: impl Into<String>, contents: &[u8]) {
        let mut hasher = Sha256::new();
        hasher.update(contents);
        self.inputs.insert(path.into(), format!("sha256:{:x}", hasher.finalize()));
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("manifest serializes")
    }

    /// Single-line rendering for comment trailers in DOT/CSV outputs.
    pub fn to_comment_line(&self, prefix: &str) -> String {
        format!("{prefix} manifest: {}\n", serde_json::to_string(self).expect("manifest serializes"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digests_are_stable() {
        let mut a = RunManifest::new("laakso graph --family laakso --level 1");
        a.record_input("g.json", b"payload");
        let mut b = RunManifest::new("laakso graph --family laakso --level 1");
        b.record_input("g.json", b"payload");
        assert_eq!(a.to_value(), b.to_value());
        assert!(a.inputs["g.json"].starts_with("sha256:"));
    }
}
