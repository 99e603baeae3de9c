//! Eigenvalue counting and bisection for `H` with unit off-diagonals.

use super::TridiagonalHamiltonian;
use crate::error::{domain, Result};

/// Replacement for an exactly zero pivot. Positive, so an eigenvalue equal
/// to the shift is not counted as lying below it.
const ZERO_PIVOT: f64 = 1e-300;

/// Number of eigenvalues strictly below `energy`.
///
/// Counts the negative pivots of the `LDL^T` factorisation of `H - E`:
/// `d_0 = V_0 - E`, `d_i = (V_i - E) - 1/d_{i-1}`.
pub fn sturm_count(h: &TridiagonalHamiltonian, energy: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0f64;
    for (i, &v) in h.diag.iter().enumerate() {
        d = if i == 0 { v - energy } else { (v - energy) - 1.0 / d };
        if d == 0.0 {
            d = ZERO_PIVOT;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k`-th eigenvalue (0-based, ascending) inside `[lo, hi)`, where
/// `sturm_count(lo) <= k < sturm_count(hi)`. `tol == 0` bisects until the
/// bracket stops shrinking.
fn bisect(h: &TridiagonalHamiltonian, k: usize, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    loop {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return mid;
        }
        if sturm_count(h, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

fn outer_bracket(h: &TridiagonalHamiltonian) -> (f64, f64) {
    let b = h.norm_bound();
    (-b - 1.0, b + 1.0)
}

/// All eigenvalues in `[lo, hi]`, ascending, each to absolute accuracy `tol`.
pub fn eigenvalues(h: &TridiagonalHamiltonian, lo: f64, hi: f64, tol: f64) -> Result<Vec<f64>> {
    if !(tol > 0.0) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    if !(lo < hi) {
        return Err(domain(format!("need lo < hi, got [{lo}, {hi}]")));
    }
    let (blo, bhi) = outer_bracket(h);
    let lo = lo.max(blo);
    let hi = hi.min(bhi).next_up();
    let first = sturm_count(h, lo);
    let last = sturm_count(h, hi);
    Ok((first..last).map(|k| bisect(h, k, lo, hi, tol)).collect())
}

/// The eigenvalues immediately below and at-or-above `energy`, each located
/// by bisection to the last representable bit.
pub fn bracketing_eigenvalues(h: &TridiagonalHamiltonian, energy: f64) -> (Option<f64>, Option<f64>) {
    let (blo, bhi) = outer_bracket(h);
    let below = sturm_count(h, energy);
    let lower = (below > 0).then(|| bisect(h, below - 1, blo.min(energy), energy, 0.0));
    let upper = (below < h.size()).then(|| bisect(h, below, energy, bhi.max(energy.next_up()), 0.0));
    (lower, upper)
}

/// `dist(sigma(H), E)`, from the two eigenvalues that bracket `E`.
pub fn spectral_distance(h: &TridiagonalHamiltonian, energy: f64) -> f64 {
    let (lower, upper) = bracketing_eigenvalues(h, energy);
    let a = lower.map_or(f64::INFINITY, |l| energy - l);
    let b = upper.map_or(f64::INFINITY, |u| u - energy);
    a.min(b).max(0.0)
}

/// The eigenvalue closest to `energy`.
pub fn nearest_eigenvalue(h: &TridiagonalHamiltonian, energy: f64) -> f64 {
    match bracketing_eigenvalues(h, energy) {
        (Some(l), Some(u)) => {
            if energy - l <= u - energy {
                l
            } else {
                u
            }
        }
        (Some(l), None) => l,
        (None, Some(u)) => u,
        (None, None) => unreachable!("a Hamiltonian has at least one eigenvalue"),
    }
}

/// True iff some eigenvalue lies within `tol` of `energy`.
pub fn has_eigenvalue_near(h: &TridiagonalHamiltonian, energy: f64, tol: f64) -> bool {
    sturm_count(h, energy + tol) > sturm_count(h, energy - tol)
        || spectral_distance_is_zero(h, energy)
}

fn spectral_distance_is_zero(h: &TridiagonalHamiltonian, energy: f64) -> bool {
    sturm_count(h, energy.next_up()) > sturm_count(h, energy)
}
