//! Flat `key = value` configuration files and the precedence
//! flags > file > defaults.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

/// Keys read from a config file. Every key must be consumed by the command,
/// so a misspelled key is an error rather than a silent default.
#[derive(Debug, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
    source: Option<String>,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("{}:{}: expected `key = value`", path.display(), i + 1))?;
            let key = k.trim().trim_start_matches("--").replace('_', "-");
            if values.insert(key.clone(), v.trim().to_string()).is_some() {
                bail!("{}:{}: key `{key}` given twice", path.display(), i + 1);
            }
        }
        Ok(Self { values, source: Some(text) })
    }

    /// The flag if given, else the file entry, else `None`.
    pub fn pick<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        let from_file = self.values.remove(key);
        if flag.is_some() {
            return Ok(flag);
        }
        from_file
            .map(|v| v.parse::<T>().map_err(|e| anyhow!("config key `{key}` = `{v}`: {e}")))
            .transpose()
    }

    pub fn or<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.pick(key, flag)?.unwrap_or(default))
    }

    pub fn require<T>(&mut self, key: &str, flag: Option<T>) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.pick(key, flag)?
            .ok_or_else(|| anyhow!("missing required value `--{key}` (flag or config key `{key}`)"))
    }

    /// Fails on keys no option consumed; returns the file text for hashing.
    pub fn finish(self) -> Result<Option<String>> {
        if let Some(k) = self.values.keys().next() {
            bail!("unknown config key `{k}` for this command");
        }
        Ok(self.source)
    }
}

/// Comma-separated list, as in `--N-list 16,32,64`.
#[derive(Debug, Clone, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: Display,
{
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|x| x.trim().parse::<T>().map_err(|e| format!("`{}`: {e}", x.trim())))
            .collect::<Result<Vec<_>, _>>()
            .and_then(|v| if v.is_empty() { Err("empty list".into()) } else { Ok(List(v)) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_beat_file_beat_defaults() {
        let dir = std::env::temp_dir().join(format!("bqlab-config-{}", std::process::id()));
        std::fs::write(&dir, "# comment\np = 3\nN_list = 16, 32\n").unwrap();
        let mut s = Settings::load(Some(&dir)).unwrap();
        assert_eq!(s.or("p", Some(5u32), 2).unwrap(), 5);
        let l: List<u64> = s.require("N-list", None).unwrap();
        assert_eq!(l.0, vec![16, 32]);
        assert_eq!(s.or("t", None, 1.0).unwrap(), 1.0);
        s.finish().unwrap();
        std::fs::remove_file(dir).unwrap();
    }

    #[test]
    fn leftover_keys_are_rejected() {
        let mut s = Settings::default();
        s.values.insert("sigam".into(), "0".into());
        assert!(s.finish().is_err());
    }
}
