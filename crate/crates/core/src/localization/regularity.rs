use rayon::prelude::*;

use crate::distributions::{sample_at, DistributionSpec, PotentialPath};
use crate::error::{domain, ensure_finite, Result};
use crate::rng::SeedSpec;
use crate::spectrum::{greens_entry, Box, Side};
use crate::stats::TailEstimate;

/// Outcome of the `(m, E)`-regularity test of one box.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RegularityVerdict {
    pub bx: Box,
    pub energy: f64,
    pub m: f64,
    /// `log |G(x, x - L/2)|`, `+inf` when resonant.
    pub left_log: f64,
    /// `log |G(x, x + L/2)|`, `+inf` when resonant.
    pub right_log: f64,
    pub regular: bool,
}

/// A box is `(m, E)`-regular when both boundary Green's entries satisfy
/// `|G(x, x +- L/2)| <= exp(-m L / 2)`. Resonant boxes are irregular.
pub fn is_regular(path: &PotentialPath, bx: Box, energy: f64, m: f64) -> Result<RegularityVerdict> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(domain(format!("decay rate m must be positive, got {m}")));
    }
    ensure_finite("energy", energy)?;
    let left = greens_entry(path, bx, energy, Side::Left)?;
    let right = greens_entry(path, bx, energy, Side::Right)?;
    let threshold = -m * bx.length as f64 / 2.0;
    let regular = !left.resonant
        && !right.resonant
        && left.value.log_abs <= threshold
        && right.value.log_abs <= threshold;
    Ok(RegularityVerdict {
        bx,
        energy,
        m,
        left_log: left.value.log_abs,
        right_log: right.value.log_abs,
        regular,
    })
}

/// Fraction of fresh boxes `Lambda_L(0)` that are `(m, E)`-regular.
pub fn regularity_probability(
    dist: &DistributionSpec,
    energy: f64,
    m: f64,
    length: usize,
    trials: usize,
    seed: SeedSpec,
) -> Result<TailEstimate> {
    if trials == 0 {
        return Err(domain("regularity_probability needs at least one trial"));
    }
    let bx = Box::centered(length)?;
    let flags: Vec<bool> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let path = sample_at(dist, bx.left(), bx.size(), seed.trial(t))?;
            Ok(is_regular(&path, bx, energy, m)?.regular)
        })
        .collect::<Result<_>>()?;
    let hits = flags.iter().filter(|&&r| r).count() as u64;
    Ok(TailEstimate::from_counts(hits, trials as u64))
}
