//! Flat key=value configuration files.
//!
//! Every long flag of a subcommand may appear in the file under its flag
//! name without the leading dashes (`min-count=5`, `src-seed=1`). Values
//! given on the command line win over the file; keys a subcommand does not
//! know are ignored, so one file can drive a whole pipeline.

use std::collections::HashMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use bilex::{Error, Result};

#[derive(Debug)]
pub struct Config {
    values: HashMap<String, String>,
}

impl Config {
    /// Load a config file, or an empty config when no path is given.
    /// Blank lines and lines starting with `#` are skipped; later
    /// occurrences of a key override earlier ones.
    pub fn load(path: Option<&Path>) -> Result<Config> {
        let mut values = HashMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            for (i, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let Some((key, value)) = line.split_once('=') else {
                    return Err(Error::format(path, i + 1, "expected key=value"));
                };
                values.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(Config { values })
    }

    fn get<T>(&self, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|e| {
                Error::InvalidConfig(format!("config key {key}: cannot parse {raw:?}: {e}"))
            }),
        }
    }
}

/// Flag if given, else the config value, else the default.
pub fn resolve<T>(flag: Option<T>, cfg: &Config, key: &str, default: T) -> Result<T>
where
    T: FromStr,
    T::Err: Display,
{
    Ok(match flag {
        Some(v) => v,
        None => cfg.get(key)?.unwrap_or(default),
    })
}

/// Flag if given, else the config value, else nothing.
pub fn resolve_opt<T>(flag: Option<T>, cfg: &Config, key: &str) -> Result<Option<T>>
where
    T: FromStr,
    T::Err: Display,
{
    Ok(match flag {
        Some(v) => Some(v),
        None => cfg.get(key)?,
    })
}

/// Flag if given, else the config value, else an error naming both spellings.
pub fn resolve_required<T>(flag: Option<T>, cfg: &Config, key: &str) -> Result<T>
where
    T: FromStr,
    T::Err: Display,
{
    resolve_opt(flag, cfg, key)?.ok_or_else(|| {
        Error::InvalidConfig(format!(
            "missing required parameter: pass --{key} or set {key}= in the config file"
        ))
    })
}

/// Boolean flags cannot be unset from the command line, so the flag and the
/// config value are OR-ed.
pub fn resolve_flag(flag: bool, cfg: &Config, key: &str) -> Result<bool> {
    Ok(flag || cfg.get::<bool>(key)?.unwrap_or(false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_config(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    #[test]
    fn flag_beats_config_beats_default() {
        let f = write_config("dim=200\n");
        let cfg = Config::load(Some(f.path())).unwrap();
        assert_eq!(resolve(Some(300usize), &cfg, "dim", 100).unwrap(), 300);
        assert_eq!(resolve(None::<usize>, &cfg, "dim", 100).unwrap(), 200);
        assert_eq!(resolve(None::<usize>, &cfg, "window", 10).unwrap(), 10);
    }

    #[test]
    fn comments_blanks_and_spaces_are_tolerated() {
        let f = write_config("# a comment\n\n  seed = 7 \n");
        let cfg = Config::load(Some(f.path())).unwrap();
        assert_eq!(resolve_required(None::<u64>, &cfg, "seed").unwrap(), 7);
    }

    #[test]
    fn later_keys_override_earlier_ones() {
        let f = write_config("k=1\nk=9\n");
        let cfg = Config::load(Some(f.path())).unwrap();
        assert_eq!(resolve(None::<usize>, &cfg, "k", 5).unwrap(), 9);
    }

    #[test]
    fn unparseable_value_names_the_key() {
        let f = write_config("epochs=many\n");
        let cfg = Config::load(Some(f.path())).unwrap();
        let err = resolve(None::<usize>, &cfg, "epochs", 5).unwrap_err();
        assert!(err.to_string().contains("epochs"), "{err}");
    }

    #[test]
    fn missing_required_parameter_names_both_spellings() {
        let cfg = Config::load(None).unwrap();
        let err = resolve_required(None::<u64>, &cfg, "seed").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("--seed") && msg.contains("seed="), "{msg}");
    }

    #[test]
    fn line_without_equals_is_a_format_error() {
        let f = write_config("dim\n");
        let err = Config::load(Some(f.path())).unwrap_err();
        assert!(matches!(err, Error::Format { line: 1, .. }), "{err}");
    }
}
