use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::args::Command;
use crate::fail::{Failure, Outcome};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Versions {
    pub fpc_lab: String,
    pub fpc_core: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputDigest {
    pub path: PathBuf,
    pub sha256: String,
}

/// Everything needed to re-run a command. `created_unix` is the only field
/// allowed to differ between a run and its replay.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub params: Command,
    pub versions: Versions,
    pub seed: Option<u64>,
    pub outputs: Vec<OutputDigest>,
    pub created_unix: u64,
}

pub fn sha256_file(path: &Path) -> Outcome<String> {
    let bytes = fs::read(path)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// `<out>.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

impl RunManifest {
    pub fn new(params: &Command, outputs: &[PathBuf]) -> Outcome<Self> {
        let outputs = outputs
            .iter()
            .map(|p| {
                Ok(OutputDigest {
                    path: p.clone(),
                    sha256: sha256_file(p)?,
                })
            })
            .collect::<Outcome<_>>()?;
        Ok(RunManifest {
            command: params.name().to_string(),
            params: params.clone(),
            versions: Versions {
                fpc_lab: env!("CARGO_PKG_VERSION").to_string(),
                fpc_core: fpc_core::VERSION.to_string(),
            },
            seed: params.seed(),
            outputs,
            created_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        })
    }

    pub fn write(&self, path: &Path) -> Outcome<()> {
        fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Outcome<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::args(format!("{}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)?)
    }
}
