use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use holodyn::algebra::parse_complex;
use holodyn::planes::Window;
use holodyn::Complex64;

use crate::error::CliError;
use crate::schema::CommandSpec;

/// Parses flat `key=value` lines. Blank lines and `#` comments are skipped;
/// a repeated key is an error.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::config(format!(
                "line {}: expected key=value, got {line:?}",
                n + 1
            )));
        };
        let key = k.trim().to_string();
        if out.iter().any(|(seen, _)| *seen == key) {
            return Err(CliError::config(format!(
                "line {}: key {key:?} repeated",
                n + 1
            )));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

/// Effective settings of one run: defaults, then the config file, then flags.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub subcommand: String,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
}

impl ExperimentConfig {
    /// Merges `file` and `flags` over the defaults of `spec`, rejecting keys
    /// the subcommand does not declare.
    pub fn resolve(
        spec: &CommandSpec,
        file: Option<&Path>,
        flags: Vec<(String, String)>,
    ) -> Result<Self, CliError> {
        let mut params = BTreeMap::new();
        for key in spec.keys() {
            if let Some(d) = key.default {
                params.insert(key.name.to_string(), d.to_string());
            }
        }
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            for (k, v) in parse_key_values(&text)? {
                if !spec.declares(&k) {
                    return Err(CliError::config(format!(
                        "unknown key {k:?} for {} in {}",
                        spec.name,
                        path.display()
                    )));
                }
                params.insert(k, v);
            }
        }
        for (k, v) in flags {
            if !spec.declares(&k) {
                return Err(CliError::config(format!(
                    "unknown key {k:?} for {}",
                    spec.name
                )));
            }
            params.insert(k, v);
        }
        let seed = match params.get("seed") {
            Some(s) => s.parse().map_err(|_| {
                CliError::config(format!("seed must be an unsigned integer, got {s:?}"))
            })?,
            None => 0,
        };
        if let Some(fmt) = params.get("format") {
            if !spec.formats.contains(&fmt.as_str()) {
                return Err(CliError::config(format!(
                    "{} does not write {fmt:?}; choose one of {}",
                    spec.name,
                    spec.formats.join(", ")
                )));
            }
        }
        Ok(ExperimentConfig {
            subcommand: spec.name.to_string(),
            params,
            seed,
        })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    pub fn require(&self, key: &str) -> Result<&str, CliError> {
        self.get(key)
            .ok_or_else(|| CliError::config(format!("{} needs --{key}", self.subcommand)))
    }

    pub fn parse<T: FromStr>(&self, key: &str) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        let raw = self.require(key)?;
        raw.parse()
            .map_err(|e| CliError::config(format!("--{key} {raw:?}: {e}")))
    }

    pub fn parse_opt<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key).map(|_| self.parse(key)).transpose()
    }

    pub fn complex(&self, key: &str) -> Result<Complex64, CliError> {
        let raw = self.require(key)?;
        parse_complex(raw).map_err(|e| CliError::config(format!("--{key} {raw:?}: {e}")))
    }

    pub fn flag(&self, key: &str) -> Result<bool, CliError> {
        match self.require(key)? {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            other => Err(CliError::config(format!(
                "--{key} expects true or false, got {other:?}"
            ))),
        }
    }

    /// The `window` and `size` keys.
    pub fn window(&self) -> Result<Window, CliError> {
        Window::parse(self.require("window")?, self.require("size")?)
            .map_err(|e| CliError::config(e.to_string()))
    }

    pub fn format(&self) -> &str {
        self.get("format").unwrap_or("json")
    }
}
