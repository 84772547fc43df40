//! Output files and the run manifest written next to them.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use chirp_af::Scenario;
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
struct FileEntry {
    path: String,
    bytes: usize,
    sha256: String,
}

/// Collects the files of one invocation and writes `<prefix>.meta.json`
/// listing them.
pub struct Run {
    prefix: PathBuf,
    command: &'static str,
    params: Value,
    scenario_hash: Option<String>,
    files: Vec<FileEntry>,
    start: Instant,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn scenario_hash(s: &Scenario) -> String {
    sha256_hex(s.to_json().as_bytes())
}

impl Run {
    pub fn new(prefix: &Path, command: &'static str, params: Value, scenario: Option<&Scenario>) -> Self {
        Self {
            prefix: prefix.to_path_buf(),
            command,
            params,
            scenario_hash: scenario.map(scenario_hash),
            files: Vec::new(),
            start: Instant::now(),
        }
    }

    fn path(&self, ext: &str) -> PathBuf {
        let mut name = self.prefix.as_os_str().to_owned();
        name.push(".");
        name.push(ext);
        PathBuf::from(name)
    }

    pub fn write(&mut self, ext: &str, bytes: &[u8]) -> anyhow::Result<PathBuf> {
        let path = self.path(ext);
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.files.push(FileEntry {
            path: path
                .file_name()
                .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned()),
            bytes: bytes.len(),
            sha256: sha256_hex(bytes),
        });
        Ok(path)
    }

    /// Writes the meta file: `meta` fields plus a `manifest` object.
    pub fn finish(self, meta: Value) -> anyhow::Result<PathBuf> {
        let manifest = json!({
            "command": self.command,
            "params": self.params,
            "scenario_sha256": self.scenario_hash,
            "version": env!("CARGO_PKG_VERSION"),
            "files": self.files,
            "wall_time_s": self.start.elapsed().as_secs_f64(),
        });
        let mut doc = match meta {
            Value::Object(m) => m,
            Value::Null => Map::new(),
            other => {
                let mut m = Map::new();
                m.insert("result".into(), other);
                m
            }
        };
        doc.insert("manifest".into(), manifest);
        let path = self.path("meta.json");
        let text = serde_json::to_string_pretty(&Value::Object(doc))?;
        fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}

/// CSV with 17 significant digits per value.
pub struct Csv(String);

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self(header.join(",") + "\n")
    }

    pub fn row(&mut self, values: &[f64]) {
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                self.0.push(',');
            }
            write!(self.0, "{v:.16e}").expect("writing to a String");
        }
        self.0.push('\n');
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0.into_bytes()
    }
}

/// Raw little-endian `f32` samples.
pub fn f32_le(values: impl IntoIterator<Item = f64>) -> Vec<u8> {
    values.into_iter().flat_map(|v| (v as f32).to_le_bytes()).collect()
}
