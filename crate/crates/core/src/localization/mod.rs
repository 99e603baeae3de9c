//! Localization experiments on boxes `Lambda_L(0)`: regularity of Green's
//! functions, Wegner-type spectral proximity, eigenfunction decay rates and
//! the multiscale-analysis parameter checker.

mod decay;
mod msa;
mod regularity;
mod wegner;

pub use decay::decay_rate;
pub use msa::{msa_parameter_suite, Constraint, MsaParams};
pub use regularity::{is_regular, regularity_probability, RegularityVerdict};
pub use wegner::{spectral_distances, wegner_curve, wegner_probability, wegner_window_probability, window_frequency, Window};

use rayon::prelude::*;

use crate::distributions::{sample_at, DistributionSpec};
use crate::error::Result;
use crate::rng::SeedSpec;
use crate::spectrum::{hamiltonian, localized_eigenvector, nearest_eigenvalue, Box};

/// Decay rate of the eigenvector whose eigenvalue is nearest `energy`, for
/// each of `trials` fresh boxes. Failures (too few usable points) are kept
/// per trial so callers can count them.
pub fn eigenmode_decay_rates(
    dist: &DistributionSpec,
    energy: f64,
    length: usize,
    trials: usize,
    seed: SeedSpec,
) -> Result<Vec<Result<f64>>> {
    let bx = Box::centered(length)?;
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let path = sample_at(dist, bx.left(), bx.size(), seed.trial(t))?;
            let h = hamiltonian(&path, bx)?;
            let lam = nearest_eigenvalue(&h, energy);
            let v = localized_eigenvector(&h, lam)?;
            Ok(decay_rate(&v))
        })
        .collect()
}

