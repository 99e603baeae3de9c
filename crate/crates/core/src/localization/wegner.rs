use rayon::prelude::*;

use crate::distributions::{sample_at, DistributionSpec};
use crate::error::{domain, ensure_finite, Result};
use crate::rng::SeedSpec;
use crate::spectrum::{hamiltonian, spectral_distance, Box};
use crate::stats::TailEstimate;

/// Spectral window for a Wegner-type event `dist(sigma(H), E) <= t`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub enum Window {
    /// `t = exp(-L^beta)`, compared in the log domain.
    ExpNegPow { beta: f64 },
    /// A fixed width `t`.
    Width(f64),
    /// `t = +inf`; every box hits.
    Unbounded,
}

impl Window {
    fn contains(&self, distance: f64, length: usize) -> bool {
        match *self {
            Self::ExpNegPow { beta } => distance.ln() <= -(length as f64).powf(beta),
            Self::Width(t) => distance <= t,
            Self::Unbounded => true,
        }
    }
}

/// Per-box `dist(sigma(H_{Lambda_L}), E)` over `trials` fresh boxes.
pub fn spectral_distances(
    dist: &DistributionSpec,
    energy: f64,
    length: usize,
    trials: usize,
    seed: SeedSpec,
) -> Result<Vec<f64>> {
    ensure_finite("energy", energy)?;
    let bx = Box::centered(length)?;
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let path = sample_at(dist, bx.left(), bx.size(), seed.trial(t))?;
            Ok(spectral_distance(&hamiltonian(&path, bx)?, energy))
        })
        .collect()
}

/// Frequency of `distances` inside `window`.
pub fn window_frequency(distances: &[f64], length: usize, window: Window) -> TailEstimate {
    let hits = distances.iter().filter(|&&d| window.contains(d, length)).count();
    TailEstimate::from_counts(hits as u64, distances.len() as u64)
}

/// Frequency of `dist(sigma(H_{Lambda_L}), E) <= exp(-L^beta)`.
///
/// The threshold is compared as `log dist <= -L^beta`, which stays exact
/// when `exp(-L^beta)` underflows.
pub fn wegner_probability(
    dist: &DistributionSpec,
    energy: f64,
    length: usize,
    beta: f64,
    trials: usize,
    seed: SeedSpec,
) -> Result<TailEstimate> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(domain(format!("beta must lie in (0,1), got {beta}")));
    }
    wegner_window_probability(dist, energy, length, Window::ExpNegPow { beta }, trials, seed)
}

pub fn wegner_window_probability(
    dist: &DistributionSpec,
    energy: f64,
    length: usize,
    window: Window,
    trials: usize,
    seed: SeedSpec,
) -> Result<TailEstimate> {
    if trials < 1000 {
        return Err(domain(format!("Wegner experiments need at least 1000 trials, got {trials}")));
    }
    let d = spectral_distances(dist, energy, length, trials, seed)?;
    Ok(window_frequency(&d, length, window))
}

/// `t -> P[dist <= t]` on one set of boxes.
pub fn wegner_curve(
    dist: &DistributionSpec,
    energy: f64,
    length: usize,
    widths: &[f64],
    trials: usize,
    seed: SeedSpec,
) -> Result<Vec<TailEstimate>> {
    if trials < 1000 {
        return Err(domain(format!("Wegner experiments need at least 1000 trials, got {trials}")));
    }
    let d = spectral_distances(dist, energy, length, trials, seed)?;
    Ok(widths.iter().map(|&t| window_frequency(&d, length, Window::Width(t))).collect())
}
