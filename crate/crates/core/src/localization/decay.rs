use crate::error::{Error, Result};
use crate::stats::ls_slope;

/// Entries at or below this magnitude are treated as underflowed.
const FLOOR: f64 = 1e-300;
const MIN_POINTS: usize = 4;

/// Exponential decay rate of a localised vector.
///
/// Finds the peak (ties go to the entry nearest the middle), then on each
/// side fits `log|v(n)|` against the distance from the peak by least squares,
/// using only the outer half of that side. The result is the negated mean
/// slope over the sides with at least four usable points.
pub fn decay_rate(v: &[f64]) -> Result<f64> {
    let n = v.len();
    if n < 16 {
        return Err(Error::InsufficientData(format!("decay_rate needs >= 16 entries, got {n}")));
    }
    let mid = (n - 1) as f64 / 2.0;
    let peak = (0..n)
        .max_by(|&i, &j| {
            v[i].abs()
                .total_cmp(&v[j].abs())
                .then_with(|| (j as f64 - mid).abs().total_cmp(&(i as f64 - mid).abs()))
        })
        .expect("nonempty");

    let side_slope = |indices: Vec<usize>| -> Option<f64> {
        // `indices` ordered by increasing distance from the peak.
        let side_len = indices.len();
        let (xs, ys): (Vec<f64>, Vec<f64>) = indices
            .into_iter()
            .skip(side_len / 2)
            .filter(|&i| v[i].abs() > FLOOR)
            .map(|i| ((i as f64 - peak as f64).abs(), v[i].abs().ln()))
            .unzip();
        (xs.len() >= MIN_POINTS).then(|| ls_slope(&xs, &ys))
    };
    let left = side_slope((0..peak).rev().collect());
    let right = side_slope((peak + 1..n).collect());
    let slopes: Vec<f64> = left.into_iter().chain(right).collect();
    if slopes.is_empty() {
        return Err(Error::InsufficientData(format!(
            "fewer than {MIN_POINTS} usable points on both sides of the peak at {peak}"
        )));
    }
    Ok(-slopes.iter().sum::<f64>() / slopes.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_profile(rate: f64, n: usize, center: usize) -> Vec<f64> {
        (0..n).map(|i| (-rate * (i as f64 - center as f64).abs()).exp()).collect()
    }

    #[test]
    fn exact_exponential() {
        let r = decay_rate(&exp_profile(0.3, 101, 50)).unwrap();
        assert!((r - 0.3).abs() < 1e-6, "{r}");
    }

    #[test]
    fn flat_vector() {
        assert_eq!(decay_rate(&[0.25; 64]).unwrap(), 0.0);
    }

    #[test]
    fn too_short_or_too_sparse() {
        assert!(decay_rate(&[1.0; 15]).is_err());
        let mut v = vec![0.0; 40];
        v[20] = 1.0;
        assert!(matches!(decay_rate(&v), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn peak_at_the_edge_uses_the_other_side() {
        let r = decay_rate(&exp_profile(0.7, 60, 0)).unwrap();
        assert!((r - 0.7).abs() < 1e-9);
    }
}
