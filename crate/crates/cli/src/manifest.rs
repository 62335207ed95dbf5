//! Run manifests.
//!
//! Every command writes `manifest.json` next to its outputs. The `args`
//! field is the full argument list after config expansion, minus `--out`,
//! `--config` and `--threads`, so replaying it reproduces the outputs.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDigest {
    pub file: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub args: Vec<String>,
    /// Resolved flag values of the command.
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub started_unix_ms: u64,
    pub finished_unix_ms: u64,
    pub warnings: Vec<String>,
    /// Digests of input files read by the command.
    #[serde(default)]
    pub inputs: Vec<OutputDigest>,
    pub outputs: Vec<OutputDigest>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn digest(file: &str, bytes: &[u8]) -> OutputDigest {
    OutputDigest {
        file: file.to_string(),
        bytes: bytes.len() as u64,
        sha256: sha256_hex(bytes),
    }
}

pub fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_millis() as u64)
}

pub fn read_manifest(path: &Path) -> Result<RunManifest, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("cannot read manifest {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::data(format!("manifest {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn round_trip() {
        let m = RunManifest {
            tool: "qcorr".into(),
            version: "0.1.0".into(),
            command: "theory".into(),
            args: vec!["qcorr".into(), "theory".into()],
            config: serde_json::json!({"a": "0.7"}),
            seed: None,
            started_unix_ms: 1,
            finished_unix_ms: 2,
            warnings: vec![],
            inputs: vec![],
            outputs: vec![digest("theory.csv", b"x")],
        };
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<RunManifest>(&text).unwrap(), m);
    }
}
