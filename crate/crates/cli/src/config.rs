//! Parameter resolution: explicit flag > config-file entry > built-in default.
//! Every resolved value is recorded so the run can emit a manifest that
//! reproduces it exactly.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

/// Merges config-file entries with command-line flags and accumulates the
/// effective settings for the manifest.
pub struct Resolver {
    file: BTreeMap<String, String>,
    resolved: BTreeMap<String, String>,
}

impl Default for Resolver {
    fn default() -> Self {
        Self::new()
    }
}

impl Resolver {
    /// Starts with no config file.
    pub fn new() -> Self {
        Resolver { file: BTreeMap::new(), resolved: BTreeMap::new() }
    }

    /// Loads `key=value` lines; `#` comments and blank lines are skipped,
    /// later duplicates win.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        let mut file = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "config {} line {}: expected key=value, got {:?}",
                    path.display(),
                    lineno + 1,
                    line
                )));
            };
            file.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Resolver { file, resolved: BTreeMap::new() })
    }

    /// Resolves a typed value: flag beats file beats default. Parse failures
    /// name the key.
    pub fn value<T: FromStr + Display>(
        &mut self,
        key: &str,
        flag: Option<&str>,
        default: T,
    ) -> Result<T, CliError> {
        let from_file = self.file.remove(key);
        let (text, origin) = match flag {
            Some(s) => (Some(s.to_string()), "flag"),
            None => (from_file, "config"),
        };
        let value = match text {
            Some(s) => s.parse::<T>().map_err(|_| {
                CliError::Config(format!("{origin} {key}: cannot parse {s:?}"))
            })?,
            None => default,
        };
        self.resolved.insert(key.to_string(), value.to_string());
        Ok(value)
    }

    /// Resolves a boolean switch: flag presence ORs with a truthy file entry.
    pub fn flag(&mut self, key: &str, set: bool) -> Result<bool, CliError> {
        let from_file = match self.file.remove(key) {
            Some(s) => match s.as_str() {
                "true" | "1" => true,
                "false" | "0" => false,
                other => {
                    return Err(CliError::Config(format!(
                        "config {key}: expected true/false, got {other:?}"
                    )))
                }
            },
            None => false,
        };
        let value = set || from_file;
        self.resolved.insert(key.to_string(), value.to_string());
        Ok(value)
    }

    /// Resolves an optional free-form value; recorded only when present.
    pub fn optional(&mut self, key: &str, flag: Option<&str>) -> Option<String> {
        let from_file = self.file.remove(key);
        let value = match flag {
            Some(s) => Some(s.to_string()),
            None => from_file,
        };
        if let Some(v) = &value {
            self.resolved.insert(key.to_string(), v.clone());
        }
        value
    }

    /// Consumes a file entry that must stay out of the manifest (e.g. the
    /// output directory, so a manifest re-run can point elsewhere).
    pub fn outside(&mut self, key: &str, flag: Option<&str>) -> Option<String> {
        let file = self.file.remove(key);
        flag.map(str::to_string).or(file)
    }

    /// Final checks, then the manifest text. Unknown leftover keys are
    /// config errors; a `command` entry must match the subcommand.
    pub fn finish(mut self, command: &str) -> Result<String, CliError> {
        if let Some(recorded) = self.file.remove("command") {
            if recorded != command {
                return Err(CliError::Config(format!(
                    "config is for command {recorded:?}, not {command:?}"
                )));
            }
        }
        if !self.file.is_empty() {
            let keys: Vec<&str> = self.file.keys().map(String::as_str).collect();
            return Err(CliError::Config(format!(
                "unknown config keys: {}",
                keys.join(", ")
            )));
        }
        let mut out = format!("command={command}\n");
        for (key, value) in &self.resolved {
            out.push_str(key);
            out.push('=');
            out.push_str(value);
            out.push('\n');
        }
        Ok(out)
    }
}
