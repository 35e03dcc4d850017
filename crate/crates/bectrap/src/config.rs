//! Flat key-value scenario configuration.
//!
//! Files hold one `key = value` pair per line; `#` starts a comment. Every
//! command validates against its own key schema and rejects unknown or
//! duplicate keys, naming the offending line.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::params::ModelParams;
use crate::state::{make_initial_state, WaveState};

#[derive(Debug, Clone)]
pub struct KeyValues {
    path: PathBuf,
    entries: Vec<(String, String, usize)>,
}

impl KeyValues {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
        Self::parse(path, &text)
    }

    pub fn parse(path: &Path, text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut seen = HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = raw.split('#').next().unwrap_or("").trim();
            if stripped.is_empty() {
                continue;
            }
            let (key, value) = stripped.split_once('=').ok_or_else(|| Error::ConfigLine {
                path: path.to_path_buf(),
                line,
                msg: format!("expected `key = value`, got `{stripped}`"),
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() || value.is_empty() {
                return Err(Error::ConfigLine {
                    path: path.to_path_buf(),
                    line,
                    msg: "empty key or value".into(),
                });
            }
            if !seen.insert(key.clone()) {
                return Err(Error::ConfigLine {
                    path: path.to_path_buf(),
                    line,
                    msg: format!("duplicate key `{key}`"),
                });
            }
            entries.push((key, value, line));
        }
        Ok(Self {
            path: path.to_path_buf(),
            entries,
        })
    }

    /// Reject any key outside `allowed`.
    pub fn check_schema(&self, allowed: &[&str]) -> Result<()> {
        for (key, _, line) in &self.entries {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::ConfigLine {
                    path: self.path.clone(),
                    line: *line,
                    msg: format!("unknown key `{key}` (allowed: {})", allowed.join(", ")),
                });
            }
        }
        Ok(())
    }

    fn lookup(&self, key: &str) -> Option<(&str, usize)> {
        self.entries
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, line)| (v.as_str(), *line))
    }

    fn bad_value(&self, key: &str, line: usize, what: &str) -> Error {
        Error::ConfigLine {
            path: self.path.clone(),
            line,
            msg: format!("key `{key}`: expected {what}"),
        }
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.lookup(key) {
            None => Ok(None),
            Some((v, line)) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| self.bad_value(key, line, "a number")),
        }
    }

    pub fn require_f64(&self, key: &str) -> Result<f64> {
        self.get_f64(key)?
            .ok_or_else(|| Error::Config(format!("{}: missing required key `{key}`", self.path.display())))
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>> {
        match self.lookup(key) {
            None => Ok(None),
            Some((v, line)) => v
                .parse::<usize>()
                .map(Some)
                .map_err(|_| self.bad_value(key, line, "a non-negative integer")),
        }
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.lookup(key).map(|(v, _)| v)
    }

    /// Comma-separated list of numbers.
    pub fn get_f64_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.lookup(key) {
            None => Ok(None),
            Some((v, line)) => v
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(Some)
                .map_err(|_| self.bad_value(key, line, "a comma-separated list of numbers")),
        }
    }

    pub fn require_f64_list(&self, key: &str) -> Result<Vec<f64>> {
        self.get_f64_list(key)?
            .ok_or_else(|| Error::Config(format!("{}: missing required key `{key}`", self.path.display())))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

pub const DEFAULT_GRID_N: usize = 2048;
pub const DEFAULT_GRID_L: f64 = 25.0;
pub const DEFAULT_DT: f64 = 5e-3;
pub const DEFAULT_T_FINAL: f64 = 1999.0;
pub const DEFAULT_SNAPSHOT_INTERVAL: f64 = 10.0;
pub const DEFAULT_OBSERVABLE_INTERVAL: f64 = 1.0;

/// One fully specified evolution scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub params: ModelParams,
    pub grid_n: usize,
    pub grid_l: f64,
    pub dt: f64,
    pub t_final: f64,
    pub snapshot_interval: f64,
}

pub const SCENARIO_KEYS: &[&str] = &[
    "u",
    "beta",
    "x_c",
    "grid.n",
    "grid.L",
    "dt",
    "t_final",
    "snapshot_interval",
];

impl Scenario {
    pub fn from_key_values(kv: &KeyValues) -> Result<Self> {
        Self::from_key_values_with(kv, true)
    }

    /// `need_interaction = false` is used by the sweep command, where `u` and
    /// `beta` come from the sweep axes instead.
    pub fn from_key_values_with(kv: &KeyValues, need_interaction: bool) -> Result<Self> {
        let (u, beta) = if need_interaction {
            (kv.require_f64("u")?, kv.require_f64("beta")?)
        } else {
            (0.0, 0.0)
        };
        let scenario = Self {
            params: ModelParams::new(u, beta, kv.require_f64("x_c")?),
            grid_n: kv.get_usize("grid.n")?.unwrap_or(DEFAULT_GRID_N),
            grid_l: kv.get_f64("grid.L")?.unwrap_or(DEFAULT_GRID_L),
            dt: kv.get_f64("dt")?.unwrap_or(DEFAULT_DT),
            t_final: kv.get_f64("t_final")?.unwrap_or(DEFAULT_T_FINAL),
            snapshot_interval: kv.get_f64("snapshot_interval")?.unwrap_or(DEFAULT_SNAPSHOT_INTERVAL),
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let kv = KeyValues::load(path)?;
        kv.check_schema(SCENARIO_KEYS)?;
        Self::from_key_values(&kv)
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if self.t_final < 0.0 {
            return Err(Error::Config(format!(
                "t_final must be non-negative, got {}",
                self.t_final
            )));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Arc<SpatialGrid>> {
        Ok(Arc::new(SpatialGrid::new(self.grid_n, self.grid_l)?))
    }

    pub fn initial_state(&self) -> Result<WaveState> {
        make_initial_state(&self.grid()?, self.params.x_c)
    }

    /// Canonical one-line rendering, used for manifests and resume digests.
    pub fn canonical_string(&self) -> String {
        format!(
            "u={:e} beta={:e} x_c={:e} grid.n={} grid.L={:e} dt={:e} t_final={:e} snapshot_interval={:e}",
            self.params.u,
            self.params.beta,
            self.params.x_c,
            self.grid_n,
            self.grid_l,
            self.dt,
            self.t_final,
            self.snapshot_interval
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<KeyValues> {
        KeyValues::parse(Path::new("test.cfg"), text)
    }

    #[test]
    fn parses_scenario_with_defaults() {
        let kv = parse("u = 0.5\nbeta = 1.89e-4 # anharmonicity\nx_c = -8\n").unwrap();
        kv.check_schema(SCENARIO_KEYS).unwrap();
        let s = Scenario::from_key_values(&kv).unwrap();
        assert_eq!(s.params.u, 0.5);
        assert_eq!(s.params.beta, 1.89e-4);
        assert_eq!(s.grid_n, 2048);
        assert_eq!(s.grid_l, 25.0);
        assert_eq!(s.dt, 5e-3);
        assert_eq!(s.t_final, 1999.0);
    }

    #[test]
    fn unknown_key_reports_name_and_line() {
        let kv = parse("u = 0.5\nbeta = 2e-4\nxc = -8\n").unwrap();
        let err = kv.check_schema(SCENARIO_KEYS).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("xc"), "{msg}");
        assert!(msg.contains(":3"), "{msg}");
    }

    #[test]
    fn duplicate_key_rejected() {
        let err = parse("u = 0.5\nu = 0.6\n").unwrap_err();
        assert!(err.to_string().contains("duplicate key `u`"));
    }

    #[test]
    fn malformed_line_rejected() {
        let err = parse("u 0.5\n").unwrap_err();
        assert!(err.to_string().contains(":1"));
    }

    #[test]
    fn missing_required_key_is_an_error() {
        let kv = parse("u = 0.5\nbeta = 2e-4\n").unwrap();
        let err = Scenario::from_key_values(&kv).unwrap_err();
        assert!(err.to_string().contains("x_c"));
    }

    #[test]
    fn bad_number_names_key() {
        let kv = parse("u = fast\nbeta = 2e-4\nx_c = -8\n").unwrap();
        let err = Scenario::from_key_values(&kv).unwrap_err();
        assert!(err.to_string().contains("`u`"));
    }
}
