use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;

pub const TOOL: &str = "oshima";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `sha256:<hex>` of the canonical config JSON.
pub fn config_hash(config: &ExperimentConfig) -> String {
    let digest = Sha256::digest(config.canonical_json().as_bytes());
    let mut out = String::from("sha256:");
    for byte in digest {
        write!(out, "{byte:02x}").expect("string write");
    }
    out
}

#[derive(Debug, Serialize)]
pub struct Report<'a, T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config_hash: String,
    pub config: &'a ExperimentConfig,
    pub passed: bool,
    pub result: T,
}

impl<'a, T: Serialize> Report<'a, T> {
    pub fn new(config: &'a ExperimentConfig, passed: bool, result: T) -> Self {
        Self {
            tool: TOOL,
            version: VERSION,
            command: config.command(),
            config_hash: config_hash(config),
            config,
            passed,
            result,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}

/// A single assertion: `observed <= bound`. NaN never passes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub observed: f64,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    pub fn at_most(label: impl Into<String>, observed: f64, bound: f64) -> Self {
        Self {
            label: label.into(),
            observed,
            bound,
            passed: observed <= bound,
        }
    }

    /// Number of mismatches, which must be zero.
    pub fn mismatches(label: impl Into<String>, count: usize) -> Self {
        Self::at_most(label, count as f64, 0.0)
    }

    pub fn failed(label: impl Into<String>) -> Self {
        Self::at_most(label, f64::NAN, 0.0)
    }
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Minimal CSV writer for numeric tables; fields never contain separators.
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Round-trip representation of a float for CSV cells.
pub fn cell(x: f64) -> String {
    format!("{x:e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::default_config;

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = default_config("structure").unwrap();
        assert_eq!(config_hash(&a), config_hash(&a.clone()));
        assert_eq!(config_hash(&a).len(), "sha256:".len() + 64);
        let b = ExperimentConfig::from_json(r#"{"command": "structure", "n": 2}"#).unwrap();
        assert_ne!(config_hash(&a), config_hash(&b));
    }

    #[test]
    fn report_embeds_hash_and_version() {
        let config = default_config("structure").unwrap();
        let text = Report::new(&config, true, 42).to_json();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["version"], VERSION);
        assert_eq!(value["config_hash"], config_hash(&config));
        assert_eq!(value["result"], 42);
    }

    #[test]
    fn csv_cells_round_trip() {
        for x in [0.1, -3.25e-9, 1.0 / 3.0] {
            assert_eq!(cell(x).parse::<f64>().unwrap(), x);
        }
        let mut t = Table::new(vec!["a", "b"]);
        t.push(vec![cell(1.0), "x".into()]);
        assert_eq!(t.to_csv(), "a,b\n1e0,x\n");
    }
}
