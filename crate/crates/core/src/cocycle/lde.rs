use rayon::prelude::*;

use super::product::{product_apply, scaled_product};
use crate::distributions::{sample, DistributionSpec};
use crate::error::{domain, ensure_finite, Result};
use crate::rng::SeedSpec;
use crate::stats::TailEstimate;

/// Which growth quantity a large-deviation run observes.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub enum LdeMode {
    /// `||T||`
    Norm,
    /// `||T x||` for the unit vector `x`.
    Vector([f64; 2]),
    /// `|<x, T y>|` for unit vectors `x`, `y`.
    Entry([f64; 2], [f64; 2]),
}

/// Where a reference exponent came from; echoed into result metadata.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub enum LambdaSource {
    Oracle,
    Estimate,
    User,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LambdaRef {
    pub value: f64,
    pub source: LambdaSource,
}

fn unit(x: [f64; 2]) -> Result<[f64; 2]> {
    let n = x[0].hypot(x[1]);
    if !(n > 0.0) || !n.is_finite() {
        return Err(domain("direction vector must be nonzero"));
    }
    Ok([x[0] / n, x[1] / n])
}

/// `log` of the observed quantity over one window of `values.len()` sites.
pub fn lde_log_quantity(energy: f64, path: &crate::distributions::PotentialPath, mode: LdeMode) -> Result<f64> {
    let a = path.origin - 1;
    let b = path.last_site();
    Ok(match mode {
        LdeMode::Norm => scaled_product(energy, path, a, b)?.log_norm(),
        LdeMode::Vector(x) => product_apply(energy, path, a, b, unit(x)?)?.0.log_abs,
        LdeMode::Entry(x, y) => {
            let x = unit(x)?;
            let (n, dir) = product_apply(energy, path, a, b, unit(y)?)?;
            n.log_abs + (x[0] * dir[0] + x[1] * dir[1]).abs().ln()
        }
    })
}

/// Frequency of `|log Q - L lambda_ref| > L eps` over `trials` fresh windows
/// of length `length`, where `Q` is the quantity selected by `mode`.
pub fn lde_tail(
    dist: &DistributionSpec,
    energy: f64,
    length: usize,
    eps: f64,
    lambda_ref: LambdaRef,
    trials: usize,
    seed: SeedSpec,
    mode: LdeMode,
) -> Result<TailEstimate> {
    let logs = lde_deviations(dist, energy, length, lambda_ref, trials, seed, mode)?;
    tail_from_deviations(&logs, length, eps)
}

/// Per-trial `|log Q - L lambda_ref|`. Exposed so nested thresholds can be
/// evaluated on one set of samples.
pub fn lde_deviations(
    dist: &DistributionSpec,
    energy: f64,
    length: usize,
    lambda_ref: LambdaRef,
    trials: usize,
    seed: SeedSpec,
    mode: LdeMode,
) -> Result<Vec<f64>> {
    if length < 10 {
        return Err(domain(format!("lde_tail needs L >= 10, got {length}")));
    }
    if trials == 0 {
        return Err(domain("lde_tail needs at least one trial"));
    }
    ensure_finite("energy", energy)?;
    ensure_finite("lambda_ref", lambda_ref.value)?;
    dist.validate()?;
    let center = length as f64 * lambda_ref.value;
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let path = sample(dist, length, seed.trial(t))?;
            Ok((lde_log_quantity(energy, &path, mode)? - center).abs())
        })
        .collect()
}

pub fn tail_from_deviations(deviations: &[f64], length: usize, eps: f64) -> Result<TailEstimate> {
    if !(eps > 0.0) {
        return Err(domain(format!("eps must be > 0, got {eps}")));
    }
    let threshold = length as f64 * eps;
    let hits = deviations.iter().filter(|&&d| d > threshold).count();
    Ok(TailEstimate::from_counts(hits as u64, deviations.len() as u64))
}
