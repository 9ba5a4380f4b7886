use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Result, VsaError};

/// Flat key-value configuration: one `key = value` per line, `#` comments.
/// Flags override file entries, which override built-in defaults.
#[derive(Debug, Clone, Default)]
pub struct ConfigMap {
    entries: BTreeMap<String, String>,
}

impl ConfigMap {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            VsaError::Config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                VsaError::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { entries })
    }

    /// Highest-precedence source wins: apply flag overrides last.
    pub fn set(&mut self, key: &str, value: String) {
        self.entries.insert(key.to_string(), value);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Parse `key` if present, keeping `default` otherwise.
    pub fn parse_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.entries.get(key) {
            None => Ok(default),
            Some(raw) => raw.parse().map_err(|_| {
                VsaError::Config(format!("config key {key}: cannot parse {raw:?}"))
            }),
        }
    }

    /// Parse a comma-separated list, keeping `default` when absent.
    pub fn parse_list_or<T: FromStr>(&self, key: &str, default: &[T]) -> Result<Vec<T>>
    where
        T: Clone,
    {
        match self.entries.get(key) {
            None => Ok(default.to_vec()),
            Some(raw) => raw
                .split(',')
                .map(|item| {
                    item.trim().parse().map_err(|_| {
                        VsaError::Config(format!("config key {key}: cannot parse {item:?}"))
                    })
                })
                .collect(),
        }
    }

    /// All entries, for manifest provenance.
    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.entries
    }
}
