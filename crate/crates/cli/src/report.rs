//! Output files. Every file starts with (JSON) or carries in `#` comment
//! lines (CSV) the metadata block, including the config and curve hashes.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::CliError;

/// How `ρ` is read off the curve data.
pub const RHO_CONVENTION: &str = "rho^2 = prod_b (x - x(b)) over ramification points b";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub config_hash: String,
    pub curve: String,
    /// Hash of the canonical curve spec, or of the input file for CSV input.
    pub curve_hash: String,
    pub mode: String,
    pub truncation: Option<usize>,
    pub rho_convention: &'static str,
}

impl Meta {
    pub fn new(config: &RunConfig, curve: String, curve_hash: String, mode: String, truncation: Option<usize>) -> Self {
        let config_hash = sha256_hex(&serde_json::to_vec(config).expect("config serializes"));
        Meta {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            config: config.clone(),
            config_hash,
            curve,
            curve_hash,
            mode,
            truncation,
            rho_convention: RHO_CONVENTION,
        }
    }

    fn comment_lines(&self) -> String {
        let mut s = String::new();
        let trunc = self.truncation.map_or_else(|| "exact".to_string(), |t| t.to_string());
        for (k, v) in [
            ("tool", format!("{} {}", self.tool, self.version)),
            ("config_hash", self.config_hash.clone()),
            ("curve", self.curve.clone()),
            ("curve_hash", self.curve_hash.clone()),
            ("mode", self.mode.clone()),
            ("truncation", trunc),
        ] {
            s.push_str(&format!("# {k}: {v}\n"));
        }
        s
    }
}

/// Writes files into one output directory and remembers what it wrote.
pub struct Writer {
    dir: PathBuf,
    pub written: Vec<PathBuf>,
}

impl Writer {
    pub fn new(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
        Ok(Writer { dir: dir.to_path_buf(), written: Vec::new() })
    }

    fn put(&mut self, name: &str, body: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, body).map_err(|source| CliError::Io { path: path.clone(), source })?;
        self.written.push(path);
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut body = serde_json::to_string_pretty(value).expect("report serializes");
        body.push('\n');
        self.put(name, body.as_bytes())
    }

    /// CSV with the metadata block and `extra` as leading comment lines.
    pub fn csv(&mut self, name: &str, meta: &Meta, extra: &[(&str, String)], header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
        let mut body = meta.comment_lines().into_bytes();
        for (k, v) in extra {
            body.extend_from_slice(format!("# {k}: {v}\n").as_bytes());
        }
        {
            let mut w = csv::Writer::from_writer(&mut body);
            let path = self.dir.join(name);
            let io = |e: csv::Error| CliError::Io { path: path.clone(), source: e.into() };
            w.write_record(header).map_err(io)?;
            for r in rows {
                w.write_record(r).map_err(io)?;
            }
            w.flush().map_err(|source| CliError::Io { path: path.clone(), source })?;
        }
        self.put(name, &body)
    }
}
