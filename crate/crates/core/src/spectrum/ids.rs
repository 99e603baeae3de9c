use rayon::prelude::*;

use super::{hamiltonian, sturm_count, Box};
use crate::distributions::{sample_at, DistributionSpec};
use crate::error::{domain, ensure_finite, Result};
use crate::rng::SeedSpec;
use crate::stats;

/// Finite-volume integrated density of states with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct IdsEstimate {
    pub value: f64,
    pub stderr: f64,
    pub trials: usize,
}

/// Mean of `sturm_count(H, E) / size` over `trials` fresh boxes `Lambda_L(0)`.
pub fn ids_estimate(
    dist: &DistributionSpec,
    energy: f64,
    length: usize,
    trials: usize,
    seed: SeedSpec,
) -> Result<IdsEstimate> {
    Ok(ids_curve(dist, &[energy], length, trials, seed)?[0])
}

/// [`ids_estimate`] on an energy grid, every energy seeing the same boxes,
/// so each per-sample curve is nondecreasing in `E`.
pub fn ids_curve(
    dist: &DistributionSpec,
    energies: &[f64],
    length: usize,
    trials: usize,
    seed: SeedSpec,
) -> Result<Vec<IdsEstimate>> {
    if length < 10 {
        return Err(domain(format!("ids_estimate needs L >= 10, got {length}")));
    }
    if trials == 0 {
        return Err(domain("ids_estimate needs at least one trial"));
    }
    for &e in energies {
        ensure_finite("energy", e)?;
    }
    let bx = Box::centered(length)?;
    let fractions: Vec<Vec<f64>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let path = sample_at(dist, bx.left(), bx.size(), seed.trial(t))?;
            let h = hamiltonian(&path, bx)?;
            Ok(energies
                .iter()
                .map(|&e| sturm_count(&h, e) as f64 / h.size() as f64)
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok((0..energies.len())
        .map(|j| {
            let xs: Vec<f64> = fractions.iter().map(|f| f[j]).collect();
            let m = stats::mean(&xs);
            let var = if trials > 1 {
                xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (trials - 1) as f64
            } else {
                0.0
            };
            IdsEstimate {
                value: m,
                stderr: (var / trials as f64).sqrt(),
                trials,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_law_gives_half_at_zero() {
        let d = DistributionSpec::cauchy(0.0, 1.0);
        let est = ids_estimate(&d, 0.0, 100, 2000, SeedSpec::new(4, 4, 0)).unwrap();
        // Odd box size: the fraction is k/101, symmetric about 1/2.
        assert!((est.value - 0.5).abs() < 3.0 * est.stderr.max(1.0 / 101.0 / 45.0), "{est:?}");
    }

    #[test]
    fn free_band_top() {
        let d = DistributionSpec::PointMass { value: 0.0 };
        let est = ids_estimate(&d, 2.0 + 1e-9, 50, 3, SeedSpec::new(4, 4, 0)).unwrap();
        assert_eq!(est.value, 1.0);
        let below = ids_estimate(&d, -2.0 - 1e-9, 50, 3, SeedSpec::new(4, 4, 0)).unwrap();
        assert_eq!(below.value, 0.0);
    }

    #[test]
    fn monotone_on_a_grid() {
        let d = DistributionSpec::LogPareto { p_tail: 4.0 };
        let grid: Vec<f64> = (-20..=20).map(|k| k as f64 * 0.25).collect();
        let curve = ids_curve(&d, &grid, 40, 200, SeedSpec::new(4, 5, 0)).unwrap();
        assert!(curve.windows(2).all(|w| w[0].value <= w[1].value));
    }

    #[test]
    fn short_boxes_rejected() {
        let d = DistributionSpec::cauchy(0.0, 1.0);
        assert!(ids_estimate(&d, 0.0, 8, 10, SeedSpec::new(0, 0, 0)).is_err());
    }
}
