use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Shortest round-trip decimal, so that reruns are byte-identical.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:?}")
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// SHA-256 of the compact JSON form of the config with `output_dir` cleared,
/// so that one experiment hashes alike wherever it is written.
pub fn config_hash(config: &ExperimentConfig) -> String {
    let mut c = config.clone();
    c.output_dir = PathBuf::new();
    let text = serde_json::to_string(&c).expect("config serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Serialize)]
struct FileEntry {
    name: String,
    rows: usize,
    sha256: String,
}

#[derive(Serialize)]
struct CheckEntry {
    name: String,
    passed: bool,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    tool_version: &'static str,
    core_version: &'static str,
    experiment: &'static str,
    config_sha256: &'a str,
    config: &'a ExperimentConfig,
    files: &'a [FileEntry],
    checks: &'a [CheckEntry],
}

/// Tables land in `dir`, each opened by `#` lines naming the run.
pub struct Output {
    dir: PathBuf,
    config: ExperimentConfig,
    hash: String,
    files: Vec<FileEntry>,
    checks: Vec<CheckEntry>,
}

impl Output {
    pub fn create(dir: &Path, config: &ExperimentConfig) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        Ok(Self { dir: dir.to_path_buf(), config: config.clone(), hash: config_hash(config), files: Vec::new(), checks: Vec::new() })
    }

    pub fn table(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let mut buf = Vec::new();
        writeln!(buf, "# tool: {TOOL} {TOOL_VERSION}")?;
        writeln!(buf, "# core: fracfujita {}", fracfujita::VERSION)?;
        writeln!(buf, "# experiment: {}", self.config.experiment.name())?;
        writeln!(buf, "# config_sha256: {}", self.hash)?;
        writeln!(buf, "# file: {name}")?;
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(header)?;
        for r in rows {
            debug_assert_eq!(r.len(), header.len(), "{name}: row width");
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("{name}: {}", e.error()))?;
        let path = self.dir.join(name);
        fs::write(&path, &bytes).with_context(|| format!("cannot write {}", path.display()))?;
        self.files.push(FileEntry { name: name.into(), rows: rows.len(), sha256: hex::encode(Sha256::digest(&bytes)) });
        Ok(())
    }

    /// Records a named pass/fail outcome for the manifest and the exit status.
    pub fn check(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push(CheckEntry { name: name.into(), passed });
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }

    pub fn file_names(&self) -> Vec<&str> {
        self.files.iter().map(|f| f.name.as_str()).collect()
    }

    pub fn finish(&self) -> Result<PathBuf> {
        let m = Manifest {
            tool: TOOL,
            tool_version: TOOL_VERSION,
            core_version: fracfujita::VERSION,
            experiment: self.config.experiment.name(),
            config_sha256: &self.hash,
            config: &self.config,
            files: &self.files,
            checks: &self.checks,
        };
        let path = self.dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(&m)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
        Ok(path)
    }
}
