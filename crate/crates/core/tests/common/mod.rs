//! Reference implementations used only by tests. They share no code with the
//! library: dense elimination, Jacobi rotations and closed forms.
#![allow(dead_code)]

use anderson_lab::distributions::{sample_at, DistributionSpec, PotentialPath};
use anderson_lab::rng::SeedSpec;

/// Dense matrix of `E - H` on `diag` with unit off-diagonal hopping.
pub fn e_minus_h(energy: f64, diag: &[f64]) -> Vec<Vec<f64>> {
    let n = diag.len();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        m[i][i] = energy - diag[i];
        if i + 1 < n {
            m[i][i + 1] = -1.0;
            m[i + 1][i] = -1.0;
        }
    }
    m
}

/// `(sign, log|det|)` by Gaussian elimination with partial pivoting.
pub fn dense_log_det(mut m: Vec<Vec<f64>>) -> (i8, f64) {
    let n = m.len();
    let (mut sign, mut log_abs) = (1i8, 0.0f64);
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
        if m[p][c] == 0.0 {
            return (0, f64::NEG_INFINITY);
        }
        if p != c {
            m.swap(p, c);
            sign = -sign;
        }
        let piv = m[c][c];
        if piv < 0.0 {
            sign = -sign;
        }
        log_abs += piv.abs().ln();
        for r in c + 1..n {
            let f = m[r][c] / piv;
            if f != 0.0 {
                for k in c..n {
                    m[r][k] -= f * m[c][k];
                }
            }
        }
    }
    (sign, log_abs)
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
pub fn dense_inverse(mut m: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut inv: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(i == j)).collect()).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
        m.swap(p, c);
        inv.swap(p, c);
        let piv = m[c][c];
        for k in 0..n {
            m[c][k] /= piv;
            inv[c][k] /= piv;
        }
        for r in 0..n {
            if r != c {
                let f = m[r][c];
                if f != 0.0 {
                    for k in 0..n {
                        m[r][k] -= f * m[c][k];
                        inv[r][k] -= f * inv[c][k];
                    }
                }
            }
        }
    }
    inv
}

/// Eigenvalues of the tridiagonal `H` by cyclic Jacobi rotations on the
/// dense matrix, sorted ascending.
pub fn jacobi_eigenvalues(diag: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        a[i][i] = diag[i];
        if i + 1 < n {
            a[i][i + 1] = 1.0;
            a[i + 1][i] = 1.0;
        }
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Lloyd's exponent through `arccosh((|E+2+ig| + |E-2+ig|)/4)`.
pub fn lloyd_arccosh(energy: f64, gamma: f64) -> f64 {
    let s = ((energy + 2.0).hypot(gamma) + (energy - 2.0).hypot(gamma)) / 4.0;
    (s + (s * s - 1.0).sqrt()).ln()
}

/// `log^{p*}` written out from its definition.
pub fn log_p_star_ref(x: f64, p: f64) -> f64 {
    let knee = p.exp();
    if x >= knee {
        x.ln().powf(p)
    } else {
        p.powf(p) * x / knee
    }
}

/// Small random instance: a path over `[origin, origin + n)`, a law tag and
/// an energy, all drawn from `seed`.
pub fn random_instance(seed: SeedSpec, origin: i64, sizes: std::ops::RangeInclusive<usize>) -> (PotentialPath, f64, &'static str) {
    let mut rng = seed.rng();
    let span = (sizes.end() - sizes.start() + 1) as u64;
    let n = sizes.start() + (rng.next_u64() % span) as usize;
    let energy = 6.0 * rng.open01() - 3.0;
    let (dist, tag) = if rng.next_u64() % 2 == 0 {
        (DistributionSpec::cauchy(0.0, 1.0), "cauchy")
    } else {
        (DistributionSpec::Bernoulli { a: -1.5, b: 1.5, q: 0.5 }, "bernoulli")
    };
    (sample_at(&dist, origin, n, seed.trial(1 << 32)).unwrap(), energy, tag)
}
