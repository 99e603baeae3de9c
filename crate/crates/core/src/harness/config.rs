//! Experiment configuration.
//!
//! A config file is a flat list of `key = value` lines; blank lines and
//! lines starting with `#` are ignored. Keys use `snake_case` and match the
//! CLI flags (`--energy-grid` is `energy_grid`). Lists are comma separated.
//! The only nested value is the distribution, written in its own
//! `kind{key=value,...}` form:
//!
//! ```text
//! experiment  = wegner
//! dist        = cauchy{center=0,gamma=1}
//! energy      = 0
//! length_grid = 50,100,200
//! beta        = 0.5
//! trials      = 10000
//! seed        = 42
//! ```
//!
//! Command-line flags override file values; every overridden key is listed
//! in the config echo under `overridden`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};

pub const DEFAULT_TRIALS: usize = 10_000;
pub const DEFAULT_STEPS: usize = 100_000;
pub const DEFAULT_BETA: f64 = 0.5;
/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "ANDERSON_LAB_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Lyapunov,
    LdeTail,
    Wegner,
    Regularity,
    Eigenmodes,
    Ids,
    MsaParams,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Self::Lyapunov,
        Self::LdeTail,
        Self::Wegner,
        Self::Regularity,
        Self::Eigenmodes,
        Self::Ids,
        Self::MsaParams,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Lyapunov => "lyapunov",
            Self::LdeTail => "lde-tail",
            Self::Wegner => "wegner",
            Self::Regularity => "regularity",
            Self::Eigenmodes => "eigenmodes",
            Self::Ids => "ids",
            Self::MsaParams => "msa-params",
        }
    }

    /// Small integer mixed into stream ids so experiments never share draws.
    pub fn code(self) -> u64 {
        self as u64 + 1
    }

    fn needs_length(self) -> bool {
        !matches!(self, Self::Lyapunov | Self::MsaParams)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown experiment `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    JsonLines,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Self::Csv),
            "json-lines" | "jsonl" => Ok(Self::JsonLines),
            other => Err(format!("unknown format `{other}` (csv, json-lines)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::JsonLines => "json-lines",
        })
    }
}

/// Observable for `lde-tail`: `norm` is `||T||`, `vector` is `||T e1||`,
/// `entry` is `|<e1, T e1>|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeName {
    Norm,
    Vector,
    Entry,
}

impl FromStr for ModeName {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "norm" => Ok(Self::Norm),
            "vector" => Ok(Self::Vector),
            "entry" => Ok(Self::Entry),
            other => Err(format!("unknown mode `{other}` (norm, vector, entry)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(serialize_with = "display")]
    pub dist: Option<DistributionSpec>,
    pub energies: Vec<f64>,
    pub lengths: Vec<usize>,
    pub trials: usize,
    pub steps: usize,
    pub eps: Option<f64>,
    pub m: Option<f64>,
    pub beta: f64,
    pub p: Option<f64>,
    pub lambda_ref: Option<f64>,
    pub mode: ModeName,
    pub master_seed: u64,
    pub workers: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
    /// Keys whose file value was replaced by a flag.
    pub overridden: Vec<String>,
}

fn display<S: serde::Serializer>(d: &Option<DistributionSpec>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match d {
        Some(d) => s.serialize_str(&d.to_string()),
        None => s.serialize_none(),
    }
}

/// Recognised keys, in the order used for the config echo.
pub const KEYS: &[&str] = &[
    "experiment",
    "dist",
    "energy",
    "energy_grid",
    "length",
    "length_grid",
    "trials",
    "steps",
    "eps",
    "m",
    "beta",
    "p",
    "lambda_ref",
    "mode",
    "seed",
    "workers",
    "out",
    "format",
];

/// Where a raw value came from, for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Flag,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Flag => f.write_str("flag"),
        }
    }
}

/// Raw `key -> (value, origin)` pairs before validation.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, Origin)>,
    overridden: Vec<String>,
}

fn location(key: &str, origin: &Origin) -> String {
    match origin {
        Origin::Line(n) => format!("line {n} (`{key}`)"),
        Origin::Flag => format!("--{}", key.replace('_', "-")),
    }
}

impl RawConfig {
    /// Parses config-file text.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut raw = Self::default();
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Config {
                location: format!("line {n}"),
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(Error::Config {
                    location: format!("line {n}"),
                    message: format!("unknown key `{k}`"),
                });
            }
            if raw.entries.contains_key(k) {
                return Err(Error::Config {
                    location: format!("line {n}"),
                    message: format!("duplicate key `{k}`"),
                });
            }
            raw.entries.insert(k.to_string(), (v.trim().to_string(), Origin::Line(n)));
        }
        Ok(raw)
    }

    /// Applies a flag value; flags beat file values.
    pub fn set_flag(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(Error::Config {
                location: format!("--{}", key.replace('_', "-")),
                message: "unknown flag".into(),
            });
        }
        if let Some((_, Origin::Line(_))) = self.entries.get(key) {
            self.overridden.push(key.to_string());
        }
        self.entries.insert(key.to_string(), (value.into(), Origin::Flag));
        Ok(())
    }

    fn get(&self, key: &str) -> Option<&(String, Origin)> {
        self.entries.get(key)
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        self.get(key)
            .map(|(v, o)| {
                v.parse::<T>().map_err(|e| Error::Config {
                    location: location(key, o),
                    message: format!("cannot parse `{v}`: {e}"),
                })
            })
            .transpose()
    }

    fn parse_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: fmt::Display,
    {
        self.get(key)
            .map(|(v, o)| {
                v.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse::<T>().map_err(|e| Error::Config {
                            location: location(key, o),
                            message: format!("cannot parse `{s}`: {e}"),
                        })
                    })
                    .collect()
            })
            .transpose()
    }

    fn missing(&self, key: &str, experiment: Experiment) -> Error {
        Error::Config {
            location: format!("--{}", key.replace('_', "-")),
            message: format!("`{key}` is required for {experiment}"),
        }
    }

    /// Validates everything needed by the chosen experiment.
    pub fn into_config(self) -> Result<ExperimentConfig> {
        let experiment: Experiment = self.parse("experiment")?.ok_or_else(|| Error::Config {
            location: "experiment".into(),
            message: "no experiment selected".into(),
        })?;

        let dist: Option<DistributionSpec> = match self.get("dist") {
            Some((v, o)) => Some(v.parse().map_err(|e: Error| Error::Config {
                location: location("dist", o),
                message: e.to_string(),
            })?),
            None => None,
        };
        if dist.is_none() && experiment != Experiment::MsaParams {
            return Err(self.missing("dist", experiment));
        }

        let single_e: Option<f64> = self.parse("energy")?;
        let grid_e: Option<Vec<f64>> = self.parse_list("energy_grid")?;
        let energies = match (single_e, grid_e) {
            (Some(_), Some(_)) => {
                return Err(Error::Config {
                    location: "--energy-grid".into(),
                    message: "give either `energy` or `energy_grid`, not both".into(),
                })
            }
            (Some(e), None) => vec![e],
            (None, Some(g)) => g,
            (None, None) => Vec::new(),
        };
        if energies.is_empty() && experiment != Experiment::MsaParams {
            return Err(self.missing("energy", experiment));
        }
        if let Some(e) = energies.iter().find(|e| !e.is_finite()) {
            return Err(Error::Config {
                location: "--energy".into(),
                message: format!("energy must be finite, got {e}"),
            });
        }

        let single_l: Option<usize> = self.parse("length")?;
        let grid_l: Option<Vec<usize>> = self.parse_list("length_grid")?;
        let lengths = match (single_l, grid_l) {
            (Some(_), Some(_)) => {
                return Err(Error::Config {
                    location: "--length-grid".into(),
                    message: "give either `length` or `length_grid`, not both".into(),
                })
            }
            (Some(l), None) => vec![l],
            (None, Some(g)) => g,
            (None, None) => Vec::new(),
        };
        if experiment.needs_length() {
            if lengths.is_empty() {
                return Err(self.missing("length", experiment));
            }
            let min = if experiment == Experiment::Ids || experiment == Experiment::LdeTail {
                10
            } else {
                2
            };
            let even = experiment != Experiment::LdeTail;
            if let Some(l) = lengths.iter().find(|&&l| l < min || (even && l % 2 != 0)) {
                return Err(Error::Config {
                    location: "--length".into(),
                    message: format!(
                        "length {l} invalid for {experiment} (need >= {min}{})",
                        if even { " and even" } else { "" }
                    ),
                });
            }
        }

        let trials = self.parse("trials")?.unwrap_or(DEFAULT_TRIALS);
        if trials == 0 {
            return Err(Error::Config {
                location: "--trials".into(),
                message: "trials must be positive".into(),
            });
        }
        if experiment == Experiment::Wegner && trials < 1000 {
            return Err(Error::Config {
                location: "--trials".into(),
                message: format!("wegner needs at least 1000 trials, got {trials}"),
            });
        }
        let steps = self.parse("steps")?.unwrap_or(DEFAULT_STEPS);
        if steps < 1000 {
            return Err(Error::Config {
                location: "--steps".into(),
                message: format!("steps must be >= 1000, got {steps}"),
            });
        }
        let eps: Option<f64> = self.parse("eps")?;
        if let Some(e) = eps {
            if !(e > 0.0) {
                return Err(Error::Config {
                    location: "--eps".into(),
                    message: format!("eps must be positive, got {e}"),
                });
            }
        }
        let m: Option<f64> = self.parse("m")?;
        if let Some(m) = m {
            if !(m > 0.0) {
                return Err(Error::Config {
                    location: "--m".into(),
                    message: format!("m must be positive, got {m}"),
                });
            }
        }
        let beta = self.parse("beta")?.unwrap_or(DEFAULT_BETA);
        if experiment == Experiment::Wegner && !(beta > 0.0 && beta < 1.0) {
            return Err(Error::Config {
                location: "--beta".into(),
                message: format!("beta must lie in (0,1), got {beta}"),
            });
        }
        let p: Option<f64> = self.parse("p")?;
        if experiment == Experiment::MsaParams {
            match p {
                None => return Err(self.missing("p", experiment)),
                Some(p) if !(p > 11.0) => {
                    return Err(Error::Config {
                        location: "--p".into(),
                        message: format!("msa-params needs p > 11, got {p}"),
                    })
                }
                _ => {}
            }
        }
        let lambda_ref = self.parse("lambda_ref")?;
        let mode = self.parse("mode")?.unwrap_or(ModeName::Norm);
        let master_seed = self.parse("seed")?.unwrap_or(0);
        let workers = match self.parse::<usize>("workers")? {
            Some(w) => w,
            None => default_workers(),
        };
        if workers == 0 {
            return Err(Error::Config {
                location: "--workers".into(),
                message: "workers must be positive".into(),
            });
        }
        let output = self.get("out").map(|(v, _)| PathBuf::from(v));
        let format = self.parse("format")?.unwrap_or(Format::Csv);

        Ok(ExperimentConfig {
            experiment,
            dist,
            energies,
            lengths,
            trials,
            steps,
            eps,
            m,
            beta,
            p,
            lambda_ref,
            mode,
            master_seed,
            workers,
            output,
            format,
            overridden: self.overridden,
        })
    }
}

impl ExperimentConfig {
    /// The config as `key = value` lines that [`parse_config`] reads back
    /// to an equal config. Reals use the shortest round-trip form.
    pub fn to_config_text(&self) -> String {
        fn list<T: fmt::Display>(xs: &[T]) -> String {
            xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        }
        let mut lines = vec![format!("experiment = {}", self.experiment)];
        if let Some(d) = &self.dist {
            lines.push(format!("dist = {d}"));
        }
        if !self.energies.is_empty() {
            lines.push(format!("energy_grid = {}", list(&self.energies)));
        }
        if !self.lengths.is_empty() {
            lines.push(format!("length_grid = {}", list(&self.lengths)));
        }
        lines.push(format!("trials = {}", self.trials));
        lines.push(format!("steps = {}", self.steps));
        for (k, v) in [("eps", self.eps), ("m", self.m), ("p", self.p), ("lambda_ref", self.lambda_ref)] {
            if let Some(v) = v {
                lines.push(format!("{k} = {v}"));
            }
        }
        lines.push(format!("beta = {}", self.beta));
        let mode = match self.mode {
            ModeName::Norm => "norm",
            ModeName::Vector => "vector",
            ModeName::Entry => "entry",
        };
        lines.push(format!("mode = {mode}"));
        lines.push(format!("seed = {}", self.master_seed));
        lines.push(format!("workers = {}", self.workers));
        if let Some(out) = &self.output {
            lines.push(format!("out = {}", out.display()));
        }
        lines.push(format!("format = {}", self.format));
        lines.join("\n") + "\n"
    }
}

/// Worker count from `ANDERSON_LAB_WORKERS`, else the number of cores.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Builds a config from optional file text plus flag overrides.
pub fn parse_config(file_text: Option<&str>, flags: &[(&str, String)]) -> Result<ExperimentConfig> {
    let mut raw = match file_text {
        Some(t) => RawConfig::from_text(t)?,
        None => RawConfig::default(),
    };
    for (k, v) in flags {
        raw.set_flag(k, v.clone())?;
    }
    raw.into_config()
}
