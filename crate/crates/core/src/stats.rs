//! Small statistical helpers shared by the Monte-Carlo estimators.

/// z-value for a two-sided 95% interval.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Monte-Carlo event frequency with a 95% Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TailEstimate {
    pub hits: u64,
    pub trials: u64,
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl TailEstimate {
    pub fn from_counts(hits: u64, trials: u64) -> Self {
        assert!(trials > 0 && hits <= trials, "invalid counts {hits}/{trials}");
        let n = trials as f64;
        let point = hits as f64 / n;
        let z2 = Z95 * Z95;
        let denom = 1.0 + z2 / n;
        let center = (point + z2 / (2.0 * n)) / denom;
        let half = Z95 * (point * (1.0 - point) / n + z2 / (4.0 * n * n)).sqrt() / denom;
        // Clamp rounding so that ci_low <= point <= ci_high holds exactly.
        let ci_low = if hits == 0 { 0.0 } else { (center - half).clamp(0.0, point) };
        let ci_high = if hits == trials { 1.0 } else { (center + half).clamp(point, 1.0) };
        Self {
            hits,
            trials,
            point,
            ci_low,
            ci_high,
        }
    }

    /// Binomial standard error of the point estimate.
    pub fn stderr(&self) -> f64 {
        (self.point * (1.0 - self.point) / self.trials as f64).sqrt()
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Median-of-means summary of `xs` split into `groups` contiguous blocks.
///
/// Returns `(median of block means, standard error)`; the error is the
/// spread of block means scaled by the asymptotic efficiency of the median
/// (`sqrt(pi/2)`) and by `1/sqrt(groups)`. Fewer than two values give a
/// standard error of zero.
pub fn median_of_means(xs: &[f64], groups: usize) -> (f64, f64) {
    assert!(!xs.is_empty());
    let g = groups.clamp(1, xs.len());
    let means = block_means(xs, g);
    let center = median(&means);
    if g < 2 {
        return (center, 0.0);
    }
    let m = mean(&means);
    let var = means.iter().map(|b| (b - m).powi(2)).sum::<f64>() / (g - 1) as f64;
    let se = (std::f64::consts::FRAC_PI_2).sqrt() * (var / g as f64).sqrt();
    (center, se)
}

/// Means of `groups` contiguous, nearly equal blocks of `xs`.
pub fn block_means(xs: &[f64], groups: usize) -> Vec<f64> {
    let n = xs.len();
    (0..groups)
        .map(|j| {
            let lo = j * n / groups;
            let hi = (j + 1) * n / groups;
            mean(&xs[lo..hi])
        })
        .collect()
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let mx = mean(xs);
    let my = mean(ys);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
