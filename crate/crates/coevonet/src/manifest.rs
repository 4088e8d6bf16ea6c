//! Run manifests: everything needed to reproduce an output directory.
//!
//! The manifest holds the command, the full configuration, the seed, and
//! SHA-256 digests of every input and output file. It deliberately omits
//! wall-clock time and thread count so that repeated runs produce
//! byte-identical manifests; elapsed time is reported on stderr instead.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

impl FileDigest {
    /// Digest of `bytes`, recorded under `path` as given.
    pub fn of_bytes(path: &str, bytes: &[u8]) -> Self {
        FileDigest {
            path: path.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }

    pub fn of_file(path: &Path) -> std::io::Result<Self> {
        let bytes = std::fs::read(path)?;
        Ok(Self::of_bytes(&path.display().to_string(), &bytes))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest<C: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub master_seed: u64,
    pub config: C,
    pub inputs: Vec<FileDigest>,
    /// Output paths are relative to the output directory.
    pub outputs: Vec<FileDigest>,
}

impl<C: Serialize> RunManifest<C> {
    pub fn new(command: &str, master_seed: u64, config: C) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            master_seed,
            config,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest is always serializable");
        s.push('\n');
        s
    }

    /// Writes `manifest.json` into `dir`.
    pub fn write(&self, dir: &Path) -> std::io::Result<PathBuf> {
        let path = dir.join("manifest.json");
        std::fs::write(&path, self.to_json())?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        let d = FileDigest::of_bytes("x", b"abc");
        assert_eq!(
            d.sha256,
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn json_is_stable() {
        let mut m = RunManifest::new("simulate", 3, serde_json::json!({"w": 5.0}));
        m.outputs.push(FileDigest::of_bytes("series.csv", b""));
        assert_eq!(m.to_json(), m.clone().to_json());
        assert!(m.to_json().contains("\"master_seed\": 3"));
    }
}
