//! Flat `key=value` config files. Keys mirror the long flag names
//! (`alpha`, `beta-range`, `x0`, ...); command-line flags take precedence.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Default)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", i + 1)))?;
            let key = k.trim().trim_start_matches("--").replace('_', "-");
            values.insert(key, v.trim().to_string());
        }
        Ok(Self { values })
    }

    /// Flag value if given, else the file value for `key`.
    pub fn get<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config key {key}: cannot parse {v:?}"))),
        }
    }

    pub fn get_or<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.get(flag, key)?.unwrap_or(default))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let cfg = ConfigFile::parse("alpha = 0.6\n# comment\nbeta=0.5  # trailing\n\nx_0=3\n").unwrap();
        assert_eq!(cfg.get::<f64>(None, "alpha").unwrap(), Some(0.6));
        assert_eq!(cfg.get(Some(0.7), "alpha").unwrap(), Some(0.7));
        assert_eq!(cfg.get::<f64>(None, "beta").unwrap(), Some(0.5));
        assert_eq!(cfg.get::<f64>(None, "x-0").unwrap(), Some(3.0));
        assert_eq!(cfg.get_or::<f64>(None, "mu", 0.4).unwrap(), 0.4);
    }

    #[test]
    fn bad_lines_are_usage_errors() {
        assert!(matches!(ConfigFile::parse("alpha 0.6"), Err(CliError::Usage(_))));
        let cfg = ConfigFile::parse("alpha=abc").unwrap();
        assert!(cfg.get::<f64>(None, "alpha").is_err());
    }
}
