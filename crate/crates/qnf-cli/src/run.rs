use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    InputError,
    CertificateFailure,
    IoError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::IoError => 1,
            Status::InputError => 2,
            Status::CertificateFailure => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// One manifest per run.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub arguments: Vec<String>,
    pub seed: u64,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub checks: Vec<Check>,
    pub status: Status,
    pub message: String,
    pub wall_time_ms: u128,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes `bytes` to `path` through a temporary file in the same directory and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(())
}

/// Input digests, staged outputs and checks of one command.
pub struct RunContext {
    pub out: PathBuf,
    pub seed: u64,
    inputs: Vec<FileDigest>,
    staged: Vec<(String, Vec<u8>)>,
    checks: Vec<Check>,
    pub messages: Vec<String>,
}

impl RunContext {
    pub fn new(out: PathBuf, seed: u64) -> Self {
        RunContext { out, seed, inputs: Vec::new(), staged: Vec::new(), checks: Vec::new(), messages: Vec::new() }
    }

    pub fn read_input(&mut self, path: &Path) -> Result<Vec<u8>, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        self.inputs.push(FileDigest { path: path.display().to_string(), sha256: sha256_hex(&bytes) });
        Ok(bytes)
    }

    /// Outputs are only written once the command has returned without an input error.
    pub fn stage(&mut self, name: &str, bytes: impl Into<Vec<u8>>) {
        self.staged.push((name.to_string(), bytes.into()));
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.to_string(), pass, detail: detail.into() });
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    fn commit(&mut self) -> Result<Vec<FileDigest>, CliError> {
        let mut outputs = Vec::with_capacity(self.staged.len());
        for (name, bytes) in std::mem::take(&mut self.staged) {
            let path = self.out.join(&name);
            write_atomic(&path, &bytes)?;
            outputs.push(FileDigest { path: path.display().to_string(), sha256: sha256_hex(&bytes) });
        }
        Ok(outputs)
    }

    /// Commits staged outputs (unless the command failed on input) and writes `manifest.json`.
    pub fn finish(
        mut self,
        command: &str,
        arguments: Vec<String>,
        result: Result<(), CliError>,
        started: Instant,
    ) -> (Status, String) {
        let (mut status, mut message) = match result {
            Ok(()) if self.checks.iter().all(|c| c.pass) => (Status::Pass, "all checks pass".to_string()),
            Ok(()) => {
                let failed: Vec<&str> = self.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
                (Status::CertificateFailure, format!("failed checks: {}", failed.join(", ")))
            }
            Err(CliError::Input(m)) => (Status::InputError, m),
            Err(CliError::Io(m)) => (Status::IoError, m),
        };
        let mut outputs = Vec::new();
        if let Err(e) = fs::create_dir_all(&self.out) {
            return (Status::IoError, e.to_string());
        }
        if matches!(status, Status::Pass | Status::CertificateFailure) {
            match self.commit() {
                Ok(o) => outputs = o,
                Err(e) => {
                    status = Status::IoError;
                    message = e.to_string();
                }
            }
        }
        let manifest = RunManifest {
            command: command.to_string(),
            arguments,
            seed: self.seed,
            inputs: self.inputs,
            outputs,
            checks: self.checks,
            status,
            message: message.clone(),
            wall_time_ms: started.elapsed().as_millis(),
        };
        let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        if let Err(e) = write_atomic(&self.out.join("manifest.json"), json.as_bytes()) {
            return (Status::IoError, e.to_string());
        }
        (status, message)
    }
}

/// CSV bytes from a header and rows of already formatted fields.
pub fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
    for r in rows {
        w.write_record(&r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}
