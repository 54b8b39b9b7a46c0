//! Run manifests: the resolved command, inputs as absolute paths, the full
//! configuration (for sweeps), the master seed, code version and wall-clock
//! timestamp. Replaying the recorded command reproduces the outputs.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::{CliError, Command};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    pub outputs: Vec<PathBuf>,
    pub command: Command,
}

impl RunManifest {
    pub fn new(command: Command, master_seed: Option<u64>, outputs: Vec<PathBuf>) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        RunManifest { version: env!("CARGO_PKG_VERSION").to_string(), timestamp, master_seed, outputs, command }
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let text = toml::to_string(self).map_err(|e| CliError::config(format!("cannot encode manifest: {e}")))?;
        std::fs::write(path, text).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
    }
}
