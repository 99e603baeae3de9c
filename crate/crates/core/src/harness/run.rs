use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use super::config::{Experiment, ExperimentConfig, ModeName};
use super::output::{preflight, render_results, write_results, ResultRow, Value};
use crate::cocycle::{lde_tail, lloyd_lyapunov, lyapunov_estimate, LambdaRef, LambdaSource, LdeMode};
use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::localization::{eigenmode_decay_rates, msa_parameter_suite, regularity_probability, wegner_probability};
use crate::rng::SeedSpec;
use crate::spectrum::ids_estimate;
use crate::stats::{self, Z95};

/// Trials used when a reference exponent has to be estimated.
const PILOT_TRIALS: usize = 10;

#[derive(Debug, Clone, Serialize)]
pub struct ResultRecord {
    pub experiment: Experiment,
    pub config: ExperimentConfig,
    pub rows: Vec<ResultRow>,
    pub wall_clock_seconds: f64,
    pub library_version: &'static str,
    /// False when a grid point failed and the run stopped early.
    pub complete: bool,
}

/// Stream id for grid point `(energy_index, length_index)`.
pub fn stream_id(experiment: Experiment, energy_index: usize, length_index: usize) -> u64 {
    (experiment.code() << 48) | ((energy_index as u64) << 24) | length_index as u64
}

/// Stream id of the pilot run that estimates a reference exponent.
pub fn pilot_stream_id(experiment: Experiment, energy_index: usize) -> u64 {
    (experiment.code() << 48) | (1 << 47) | energy_index as u64
}

/// Reference exponent: the user's value, else the closed form for centred
/// or shifted Cauchy laws, else a pilot estimate.
pub fn reference_lambda(
    config: &ExperimentConfig,
    dist: &DistributionSpec,
    energy: f64,
    energy_index: usize,
) -> Result<LambdaRef> {
    if let Some(value) = config.lambda_ref {
        return Ok(LambdaRef {
            value,
            source: LambdaSource::User,
        });
    }
    if let DistributionSpec::Cauchy { center, gamma } = *dist {
        if gamma > 0.0 {
            return Ok(LambdaRef {
                value: lloyd_lyapunov(energy - center, gamma)?,
                source: LambdaSource::Oracle,
            });
        }
    }
    let seed = SeedSpec::new(config.master_seed, pilot_stream_id(config.experiment, energy_index), 0);
    let est = lyapunov_estimate(dist, energy, config.steps, PILOT_TRIALS, seed)?;
    Ok(LambdaRef {
        value: est.lambda_hat,
        source: LambdaSource::Estimate,
    })
}

fn source_name(s: LambdaSource) -> &'static str {
    match s {
        LambdaSource::Oracle => "oracle",
        LambdaSource::Estimate => "estimate",
        LambdaSource::User => "user",
    }
}

fn base_row(config: &ExperimentConfig, energy: Option<f64>, length: Option<usize>) -> ResultRow {
    ResultRow {
        experiment: config.experiment.name().to_string(),
        dist: config.dist.map(|d| d.to_string()).unwrap_or_default(),
        energy,
        length,
        trials: config.trials,
        seed: config.master_seed,
        estimate: None,
        ci_low: None,
        ci_high: None,
        extras: Vec::new(),
    }
}

fn tail_row(mut row: ResultRow, t: &stats::TailEstimate) -> ResultRow {
    row.estimate = Some(t.point);
    row.ci_low = Some(t.ci_low);
    row.ci_high = Some(t.ci_high);
    row.extras.push(("hits".into(), Value::Int(t.hits)));
    row
}

/// All grid points in output order: energies outer, lengths inner.
fn grid(config: &ExperimentConfig) -> Vec<(usize, usize)> {
    match config.experiment {
        Experiment::MsaParams => vec![(0, 0)],
        Experiment::Lyapunov => (0..config.energies.len()).map(|i| (i, 0)).collect(),
        _ => (0..config.energies.len())
            .flat_map(|i| (0..config.lengths.len()).map(move |j| (i, j)))
            .collect(),
    }
}

/// Computes one grid point.
pub fn run_point(config: &ExperimentConfig, ei: usize, li: usize) -> Result<ResultRow> {
    let exp = config.experiment;
    if exp == Experiment::MsaParams {
        let p = config.p.ok_or_else(|| Error::Config {
            location: "--p".into(),
            message: "`p` is required for msa-params".into(),
        })?;
        let s = msa_parameter_suite(p, config.beta, config.lambda_ref)?;
        let mut row = base_row(config, None, None);
        row.trials = 0;
        let report = s
            .constraint_report
            .iter()
            .map(|c| format!("{}:{}:{}", c.name, if c.satisfied { "ok" } else { "violated" }, super::output::render_real(c.slack)))
            .collect::<Vec<_>>()
            .join(";");
        row.extras = vec![
            ("p".into(), Value::Real(s.p)),
            ("beta".into(), Value::Real(s.beta)),
            ("kappa".into(), Value::Real(s.kappa)),
            ("q1".into(), Value::Real(s.q1)),
            ("q2".into(), Value::Real(s.q2)),
            ("eta".into(), Value::Real(s.eta)),
            ("p_prime".into(), Value::Real(s.p_prime)),
            ("m0".into(), Value::real(s.m0.is_finite().then_some(s.m0))),
            ("all_satisfied".into(), Value::Text(s.all_satisfied().to_string())),
            ("constraints".into(), Value::Text(report)),
        ];
        return Ok(row);
    }

    let dist = config.dist.expect("validated config has a distribution");
    let energy = config.energies[ei];
    let seed = SeedSpec::new(config.master_seed, stream_id(exp, ei, li), 0);
    let stream = Value::Int(seed.stream_id);

    if exp == Experiment::Lyapunov {
        let est = lyapunov_estimate(&dist, energy, config.steps, config.trials, seed)?;
        let mut row = base_row(config, Some(energy), Some(config.steps));
        row.estimate = Some(est.lambda_hat);
        row.ci_low = Some(est.lambda_hat - Z95 * est.stderr);
        row.ci_high = Some(est.lambda_hat + Z95 * est.stderr);
        let oracle = match dist {
            DistributionSpec::Cauchy { center, gamma } if gamma > 0.0 => lloyd_lyapunov(energy - center, gamma).ok(),
            _ => None,
        };
        row.extras = vec![
            ("stream".into(), stream),
            ("stderr".into(), Value::Real(est.stderr)),
            ("oracle".into(), Value::real(oracle)),
        ];
        return Ok(row);
    }

    let length = config.lengths[li];
    let row = base_row(config, Some(energy), Some(length));
    match exp {
        Experiment::LdeTail => {
            let lam = reference_lambda(config, &dist, energy, ei)?;
            let eps = config.eps.unwrap_or(lam.value / 2.0);
            let mode = match config.mode {
                ModeName::Norm => LdeMode::Norm,
                ModeName::Vector => LdeMode::Vector([1.0, 0.0]),
                ModeName::Entry => LdeMode::Entry([1.0, 0.0], [1.0, 0.0]),
            };
            let t = lde_tail(&dist, energy, length, eps, lam, config.trials, seed, mode)?;
            let mut row = tail_row(row, &t);
            row.extras.extend([
                ("stream".into(), stream),
                ("eps".into(), Value::Real(eps)),
                ("lambda_ref".into(), Value::Real(lam.value)),
                ("lambda_source".into(), Value::Text(source_name(lam.source).into())),
            ]);
            Ok(row)
        }
        Experiment::Wegner => {
            let t = wegner_probability(&dist, energy, length, config.beta, config.trials, seed)?;
            let mut row = tail_row(row, &t);
            row.extras.extend([
                ("stream".into(), stream),
                ("beta".into(), Value::Real(config.beta)),
                ("log_threshold".into(), Value::Real(-(length as f64).powf(config.beta))),
            ]);
            Ok(row)
        }
        Experiment::Regularity => {
            let (m, lam) = match config.m {
                Some(m) => (m, None),
                None => {
                    let lam = reference_lambda(config, &dist, energy, ei)?;
                    (lam.value / 8.0, Some(lam))
                }
            };
            let t = regularity_probability(&dist, energy, m, length, config.trials, seed)?;
            let mut row = tail_row(row, &t);
            row.extras.extend([
                ("stream".into(), stream),
                ("m".into(), Value::Real(m)),
                ("lambda_ref".into(), Value::real(lam.map(|l| l.value))),
                ("lambda_source".into(), lam.map_or(Value::Missing, |l| Value::Text(source_name(l.source).into()))),
            ]);
            Ok(row)
        }
        Experiment::Eigenmodes => {
            let lam = reference_lambda(config, &dist, energy, ei)?;
            let rates = eigenmode_decay_rates(&dist, energy, length, config.trials, seed)?;
            let ok: Vec<f64> = rates.iter().filter_map(|r| r.as_ref().ok().copied()).collect();
            let failures = rates.len() - ok.len();
            let mut row = row;
            if !ok.is_empty() {
                let m = stats::mean(&ok);
                let se = if ok.len() > 1 {
                    (ok.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (ok.len() - 1) as f64 / ok.len() as f64).sqrt()
                } else {
                    0.0
                };
                row.estimate = Some(m);
                row.ci_low = Some(m - Z95 * se);
                row.ci_high = Some(m + Z95 * se);
            }
            let in_band = ok
                .iter()
                .filter(|&&r| r >= 0.5 * lam.value && r <= 1.5 * lam.value)
                .count();
            row.extras.extend([
                ("stream".into(), stream),
                ("failures".into(), Value::Int(failures as u64)),
                ("lambda_ref".into(), Value::Real(lam.value)),
                ("lambda_source".into(), Value::Text(source_name(lam.source).into())),
                ("in_band_fraction".into(), Value::Real(in_band as f64 / rates.len() as f64)),
            ]);
            Ok(row)
        }
        Experiment::Ids => {
            let est = ids_estimate(&dist, energy, length, config.trials, seed)?;
            let mut row = row;
            row.estimate = Some(est.value);
            row.ci_low = Some(est.value - Z95 * est.stderr);
            row.ci_high = Some(est.value + Z95 * est.stderr);
            row.extras.extend([("stream".into(), stream), ("stderr".into(), Value::Real(est.stderr))]);
            Ok(row)
        }
        Experiment::Lyapunov | Experiment::MsaParams => unreachable!("handled above"),
    }
}

fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Runs every grid point on a pool of `config.workers` threads.
///
/// With an output path, the path is checked before any work starts; the
/// results go to that path and a `.meta.json` sidecar holds the config echo,
/// timing and provenance. If a grid point fails or panics, the rows computed
/// so far are written to `<out>.partial`, the sidecar is marked incomplete,
/// and the error is returned.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ResultRecord> {
    if let Some(out) = &config.output {
        preflight(out)?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Aborted(format!("cannot start worker pool: {e}")))?;
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut failure = None;
    for (ei, li) in grid(config) {
        let res = pool.install(|| catch_unwind(AssertUnwindSafe(|| run_point(config, ei, li))));
        match res {
            Ok(Ok(row)) => rows.push(row),
            Ok(Err(e)) => {
                failure = Some(e.to_string());
                break;
            }
            Err(panic) => {
                let msg = panic
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "worker panicked".into());
                failure = Some(format!("worker panic: {msg}"));
                break;
            }
        }
    }
    let record = ResultRecord {
        experiment: config.experiment,
        config: config.clone(),
        rows,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        library_version: env!("CARGO_PKG_VERSION"),
        complete: failure.is_none(),
    };
    if let Some(out) = &config.output {
        let target = if record.complete { out.clone() } else { sidecar(out, ".partial") };
        write_results(&record.rows, config.format, &target)?;
        let meta = serde_json::to_vec_pretty(&record_meta(&record)).expect("serialisable");
        let meta_path = sidecar(out, ".meta.json");
        std::fs::write(&meta_path, meta).map_err(|source| Error::Io { path: meta_path, source })?;
    }
    match failure {
        None => Ok(record),
        Some(msg) => Err(Error::Aborted(msg)),
    }
}

fn record_meta(r: &ResultRecord) -> serde_json::Value {
    serde_json::json!({
        "experiment": r.experiment,
        "config": r.config,
        "config_text": r.config.to_config_text(),
        "rows": r.rows.len(),
        "wall_clock_seconds": r.wall_clock_seconds,
        "library_version": r.library_version,
        "seed_provenance": {
            "master_seed": r.config.master_seed,
            "stream_layout": "(experiment_code << 48) | (energy_index << 24) | length_index",
            "pilot_stream_layout": "(experiment_code << 48) | (1 << 47) | energy_index",
        },
        "complete": r.complete,
    })
}

/// Renders the rows of a record, as written to the output file.
pub fn render_record(record: &ResultRecord) -> Result<Vec<u8>> {
    render_results(&record.rows, record.config.format)
}
