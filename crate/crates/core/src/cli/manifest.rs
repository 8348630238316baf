use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::Result;

/// Record of one CLI run, written next to its output.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: Value,
    /// `(path, sha256)` of every input file.
    pub inputs: Vec<(String, String)>,
    pub output: Option<(String, String)>,
    pub version: String,
    pub duration_secs: f64,
}

fn digest(path: &Path) -> String {
    match std::fs::read(path) {
        Ok(bytes) => hex::encode(Sha256::digest(&bytes)),
        Err(_) => String::new(),
    }
}

impl RunManifest {
    pub fn new(command: &str, config: Value, inputs: &[PathBuf], output: Option<&Path>, elapsed: Duration) -> Self {
        RunManifest {
            command: command.to_string(),
            config,
            inputs: inputs.iter().map(|p| (p.display().to_string(), digest(p))).collect(),
            output: output.map(|p| (p.display().to_string(), digest(p))),
            version: env!("CARGO_PKG_VERSION").to_string(),
            duration_secs: elapsed.as_secs_f64(),
        }
    }

    /// Writes to `path`, else to `<output>.manifest.json`, else to stderr.
    pub fn write(&self, path: Option<&Path>, output: Option<&Path>) -> Result<()> {
        let target = match (path, output) {
            (Some(p), _) => p.to_path_buf(),
            (None, Some(o)) => {
                let mut s = o.as_os_str().to_owned();
                s.push(".manifest.json");
                PathBuf::from(s)
            }
            (None, None) => {
                eprintln!("{}", serde_json::to_string(self)?);
                return Ok(());
            }
        };
        std::fs::write(target, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}
