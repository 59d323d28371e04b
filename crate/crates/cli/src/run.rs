//! Output directory handling and the `run.json` manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use boole_core::Limits;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Files written by one invocation, recorded with their hashes.
pub struct Run {
    dir: PathBuf,
    outputs: BTreeMap<String, String>,
    inputs: Vec<Value>,
}

impl Run {
    pub fn new(dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(dir)?;
        Ok(Run {
            dir: dir.to_path_buf(),
            outputs: BTreeMap::new(),
            inputs: Vec::new(),
        })
    }

    /// Reads an input file and records its hash.
    pub fn read_input(&mut self, path: &Path) -> CliResult<String> {
        let bytes = fs::read(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.push(json!({
            "path": path.display().to_string(),
            "sha256": sha256(&bytes),
        }));
        String::from_utf8(bytes)
            .map_err(|_| CliError::Input(format!("{} is not UTF-8", path.display())))
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> CliResult<()> {
        fs::write(self.dir.join(name), bytes)?;
        self.outputs.insert(name.to_string(), sha256(bytes));
        Ok(())
    }

    pub fn write_json(&mut self, name: &str, value: &impl Serialize) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_bytes(name, text.as_bytes())
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> CliResult<()> {
        self.write_bytes(name, text.as_bytes())
    }

    pub fn write_csv<R: IntoIterator<Item = Vec<String>>>(
        &mut self,
        name: &str,
        header: &[&str],
        rows: R,
    ) -> CliResult<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for r in rows {
            w.write_record(&r)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        self.write_bytes(name, &bytes)
    }

    /// Writes `run.json`, echoing the effective configuration.
    pub fn finish(mut self, command: &str, config: Value, seed: u64, tol: Option<f64>, limits: &Limits) -> CliResult<()> {
        let outputs: Vec<Value> = self
            .outputs
            .iter()
            .map(|(file, hash)| json!({ "file": file, "sha256": hash }))
            .collect();
        let manifest = json!({
            "tool": "boole-lab",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "config": config,
            "seed": seed,
            "tol": tol,
            "limits": limits,
            "inputs": std::mem::take(&mut self.inputs),
            "outputs": outputs,
        });
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        fs::write(self.dir.join("run.json"), text)?;
        Ok(())
    }
}

/// Formats a float so it round-trips exactly.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}
