//! key=value config files and flag/config/environment resolution.
//!
//! Precedence everywhere: explicit flag, then config file entry, then (for
//! the seed) ORTHOPLANAR_SEED, then the built-in default.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Default)]
pub struct Config {
    entries: HashMap<String, String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut entries = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!(
                    "config {}:{}: expected key=value, got '{line}'",
                    path.display(),
                    lineno + 1
                ));
            };
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>, String> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|_| format!("config key {key}: cannot parse '{v}'")),
        }
    }

    /// Flag wins; otherwise the config entry; otherwise the default.
    pub fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, String> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.parsed(key)?.unwrap_or(default)),
        }
    }

    /// Seed precedence adds the environment between config and default.
    pub fn resolve_seed(&self, flag: Option<u64>) -> Result<u64, String> {
        if let Some(s) = flag {
            return Ok(s);
        }
        if let Some(s) = self.parsed::<u64>("seed")? {
            return Ok(s);
        }
        match std::env::var("ORTHOPLANAR_SEED") {
            Ok(v) => v
                .parse::<u64>()
                .map_err(|_| format!("ORTHOPLANAR_SEED: cannot parse '{v}'")),
            Err(_) => Ok(42),
        }
    }

    /// Boolean flags: present on the command line wins; else config
    /// true/false.
    pub fn resolve_switch(&self, flag: bool, key: &str) -> Result<bool, String> {
        if flag {
            return Ok(true);
        }
        self.resolve(None, key, false)
    }
}
