//! Run manifests written next to every output file.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliResult;

pub const MANIFEST_SCHEMA: &str = "btv-manifest/1";

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct OutputDigest {
    pub path: PathBuf,
    pub sha256: String,
}

/// Everything needed to replay a run: the arguments as given, the fully
/// resolved options, the seed and digests of what went in and came out.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema: &'static str,
    pub command: &'static str,
    pub version: &'static str,
    pub args: Vec<String>,
    pub options: serde_json::Value,
    pub seed: Option<u64>,
    pub input: Option<InputDigest>,
    pub outputs: Vec<OutputDigest>,
}

impl RunManifest {
    pub fn new<O: Serialize>(command: &'static str, options: &O, seed: Option<u64>) -> CliResult<Self> {
        Ok(Self {
            schema: MANIFEST_SCHEMA,
            command,
            version: env!("CARGO_PKG_VERSION"),
            args: std::env::args().skip(1).collect(),
            options: serde_json::to_value(options)?,
            seed,
            input: None,
            outputs: Vec::new(),
        })
    }

    pub fn with_input(mut self, path: &Path, bytes: &[u8]) -> Self {
        self.input = Some(InputDigest { path: path.to_path_buf(), sha256: sha256_hex(bytes) });
        self
    }

    pub fn add_output(&mut self, path: &Path, bytes: &[u8]) {
        self.outputs.push(OutputDigest { path: path.to_path_buf(), sha256: sha256_hex(bytes) });
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// `out.json` → `out.json.manifest.json`.
pub fn manifest_path_for(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_and_naming() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
        assert_eq!(manifest_path_for(Path::new("dir/fit.json")), PathBuf::from("dir/fit.json.manifest.json"));
    }
}
