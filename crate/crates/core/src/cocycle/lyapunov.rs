use num_complex::Complex64;
use rayon::prelude::*;

use super::product::log_norm_checkpoints;
use crate::distributions::{sample, DistributionSpec};
use crate::error::{domain, ensure_finite, Result};
use crate::rng::SeedSpec;
use crate::stats::{self, Z95};

/// Blocks per trial used for the error bar.
const BLOCKS_PER_TRIAL: usize = 10;
/// Groups for the median-of-means error bar.
const MOM_GROUPS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LyapunovEstimate {
    /// Mean over trials of `log ||T_{[0,steps]}|| / steps`.
    pub lambda_hat: f64,
    pub stderr: f64,
    pub steps: usize,
    pub trials: usize,
    /// The law is a point mass, so every trial sees the same matrix.
    pub trivial_law: bool,
}

impl LyapunovEstimate {
    /// `lambda_hat - z * stderr` at 95%.
    pub fn lower_bound(&self) -> f64 {
        self.lambda_hat - Z95 * self.stderr
    }
}

/// Monte-Carlo Lyapunov exponent at energy `energy`.
///
/// Each trial draws a fresh path of `steps` sites from stream
/// `seed.trial(t)`. The point estimate is the plain mean of the per-trial
/// growth rates. The error bar comes from per-block growth increments
/// (ten blocks per trial) summarised by median-of-means, since the
/// increments only have polynomial moments under heavy tails.
pub fn lyapunov_estimate(
    dist: &DistributionSpec,
    energy: f64,
    steps: usize,
    trials: usize,
    seed: SeedSpec,
) -> Result<LyapunovEstimate> {
    if steps < 1000 {
        return Err(domain(format!("lyapunov_estimate needs steps >= 1000, got {steps}")));
    }
    if trials == 0 {
        return Err(domain("lyapunov_estimate needs at least one trial"));
    }
    ensure_finite("energy", energy)?;
    dist.validate()?;
    let trivial_law = !dist.is_nontrivial();
    if trivial_law {
        log::warn!("{dist} is concentrated on a point; the product is deterministic");
    }

    let per_trial: Vec<Vec<f64>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let path = sample(dist, steps, seed.trial(t))?;
            log_norm_checkpoints(energy, &path.values, BLOCKS_PER_TRIAL)
        })
        .collect::<Result<_>>()?;

    let lambda_hat = stats::mean(
        &per_trial
            .iter()
            .map(|c| c[BLOCKS_PER_TRIAL - 1] / steps as f64)
            .collect::<Vec<_>>(),
    );
    let mut block_rates = Vec::with_capacity(trials * BLOCKS_PER_TRIAL);
    for checkpoints in &per_trial {
        let mut prev = 0.0;
        let mut start = 0;
        for (j, &c) in checkpoints.iter().enumerate() {
            let end = (j + 1) * steps / BLOCKS_PER_TRIAL;
            block_rates.push((c - prev) / (end - start) as f64);
            prev = c;
            start = end;
        }
    }
    // Block rates are per step; the mean of `k` of them has the spread of a
    // `steps * trials / k`-step average.
    let (_, se_block) = stats::median_of_means(&block_rates, MOM_GROUPS);
    Ok(LyapunovEstimate {
        lambda_hat,
        stderr: se_block,
        steps,
        trials,
        trivial_law,
    })
}

/// Closed-form Lyapunov exponent of the Anderson model with Cauchy disorder
/// of width `gamma` centred at 0: `Re log(z + sqrt(z^2 - 1))`,
/// `z = (E + i gamma)/2`, on the branch with `|z + sqrt(z^2 - 1)| >= 1`.
pub fn lloyd_lyapunov(energy: f64, gamma: f64) -> Result<f64> {
    ensure_finite("energy", energy)?;
    ensure_finite("gamma", gamma)?;
    if gamma < 0.0 {
        return Err(domain(format!("gamma must be >= 0, got {gamma}")));
    }
    if gamma == 0.0 && energy.abs() <= 2.0 {
        return Err(domain(format!(
            "free model inside the band (E = {energy}) has exponent 0 on a branch cut"
        )));
    }
    let z = Complex64::new(energy, gamma) / 2.0;
    let root = (z * z - 1.0).sqrt();
    let w = [z + root, z - root]
        .into_iter()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("two candidates");
    Ok(w.norm().ln())
}

/// Minimum over `energy_grid` of the 95% lower confidence bounds of
/// [`lyapunov_estimate`]. Every grid point reuses the same streams (common
/// random numbers), which keeps the comparison across energies tight.
pub fn lambda_min_estimate(
    dist: &DistributionSpec,
    energy_grid: &[f64],
    steps: usize,
    trials: usize,
    seed: SeedSpec,
) -> Result<f64> {
    if energy_grid.is_empty() {
        return Err(domain("energy grid is empty"));
    }
    let mut best = f64::INFINITY;
    for &e in energy_grid {
        best = best.min(lyapunov_estimate(dist, e, steps, trials, seed)?.lower_bound());
    }
    Ok(best)
}
