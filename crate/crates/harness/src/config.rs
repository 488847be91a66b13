//! Flat `key = value` configuration files mirroring the CLI flags.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{HarnessError, Result};

/// Keys accepted in a configuration file.
pub const KEYS: [&str; 13] = [
    "case",
    "epsilon",
    "h",
    "tau",
    "T",
    "domain",
    "sweep",
    "out",
    "table",
    "workers",
    "fp-tol",
    "seed-check",
    "links",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    /// Parses lines of `key = value`; `#` starts a comment, blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                HarnessError::Config(format!(
                    "config line {}: expected key = value, got '{raw}'",
                    n + 1
                ))
            })?;
            let key = key.trim().trim_start_matches("--");
            if !KEYS.contains(&key) {
                return Err(HarnessError::Config(format!(
                    "config line {}: unknown key '{key}'",
                    n + 1
                )));
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

/// Parses `0.25`, `1/64` or `1e-3`.
pub fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || HarnessError::Config(format!("cannot parse number '{s}'"));
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let (n, d): (f64, f64) = (
                num.trim().parse().map_err(|_| bad())?,
                den.trim().parse().map_err(|_| bad())?,
            );
            n / d
        }
        None => s.parse().map_err(|_| bad())?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// Comma-separated list of numbers.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(parse_number)
        .collect()
}

/// `a,b` with `a < b`.
pub fn parse_domain(s: &str) -> Result<(f64, f64)> {
    match parse_list(s)?.as_slice() {
        &[a, b] if a < b => Ok((a, b)),
        _ => Err(HarnessError::Config(format!(
            "domain must be 'a,b' with a < b, got '{s}'"
        ))),
    }
}

pub fn parse_bool(s: &str) -> Result<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        other => Err(HarnessError::Config(format!(
            "expected a boolean, got '{other}'"
        ))),
    }
}
