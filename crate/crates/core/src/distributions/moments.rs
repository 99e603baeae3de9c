use super::DistributionSpec;
use crate::error::{Error, Result};
use crate::rng::SeedSpec;
use crate::stats;

/// Monte-Carlo estimate of `E[(log+ |X|)^p]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MomentEstimate {
    pub mean: f64,
    /// Median-of-means standard error over ten batches.
    pub stderr: f64,
    /// Means of the ten consecutive batches.
    pub batch_means: [f64; BATCHES],
    /// Set when the running mean over nested prefixes keeps growing, the
    /// usual signature of an infinite moment.
    pub divergence_suspected: bool,
}

pub const BATCHES: usize = 10;

/// Estimates `E[(log+ |X|)^p]` from `trials` draws of one stream.
pub fn log_plus_moment_estimate(
    dist: &DistributionSpec,
    p: f64,
    trials: usize,
    seed: SeedSpec,
) -> Result<MomentEstimate> {
    if trials < 100 {
        return Err(Error::InsufficientSample(format!(
            "moment estimate needs at least 100 trials, got {trials}"
        )));
    }
    if !(p >= 1.0) {
        return Err(crate::error::domain(format!("moment order must be >= 1, got {p}")));
    }
    dist.validate()?;
    let mut rng = seed.rng();
    let values: Vec<f64> = (0..trials)
        .map(|_| {
            let x = dist.draw(&mut rng).abs();
            if x > 1.0 {
                x.ln().powf(p)
            } else {
                0.0
            }
        })
        .collect();
    let mean = stats::mean(&values);
    let (_, stderr) = stats::median_of_means(&values, BATCHES);
    let mut batch_means = [0.0; BATCHES];
    batch_means.copy_from_slice(&stats::block_means(&values, BATCHES));

    // Prefix means at n/8, n/4, n/2, n.
    let prefix: Vec<f64> = [8, 4, 2, 1]
        .iter()
        .map(|d| stats::mean(&values[..trials / d]))
        .collect();
    let growing = prefix.windows(2).all(|w| w[1] > w[0]);
    let divergence_suspected = growing && prefix[3] > 1.5 * prefix[0];

    Ok(MomentEstimate {
        mean,
        stderr,
        batch_means,
        divergence_suspected,
    })
}
