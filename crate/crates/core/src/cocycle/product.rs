//! Forward transfer products `T_{[a,b]} = T_b T_{b-1} ... T_{a+1}`.
//!
//! The product over `[a,b]` uses the potential on sites `a+1..=b`, so it
//! has `b - a` factors and maps `(psi(a+1), psi(a))` to `(psi(b+1), psi(b))`.
//! Every routine renormalises after each factor; a single Cauchy step can
//! be `1e10` or larger, so unscaled doubles would overflow within a few
//! hundred steps.

use super::{one_step, Matrix2, ScaledMatrix, SignedLog};
use crate::distributions::PotentialPath;
use crate::error::{domain, ensure_finite, Error, Result};

fn window(path: &PotentialPath, a: i64, b: i64) -> Result<&[f64]> {
    if a > b {
        return Err(Error::Unsupported(format!(
            "backward product requested (a = {a} > b = {b})"
        )));
    }
    path.sites(a + 1, b)
}

/// Left-multiplies the one-step matrices for `values` in order.
pub fn scaled_product_of(energy: f64, values: &[f64]) -> Result<ScaledMatrix> {
    let mut acc = ScaledMatrix::IDENTITY;
    for &v in values {
        acc.push_left(&one_step(energy, v)?);
    }
    Ok(acc)
}

/// `T_{[a,b]}` in scaled form; `a == b` gives the identity.
pub fn scaled_product(energy: f64, path: &PotentialPath, a: i64, b: i64) -> Result<ScaledMatrix> {
    scaled_product_of(energy, window(path, a, b)?)
}

/// `log ||T||` after each of `checkpoints` nearly equal blocks of `values`.
pub(crate) fn log_norm_checkpoints(
    energy: f64,
    values: &[f64],
    checkpoints: usize,
) -> Result<Vec<f64>> {
    let n = values.len();
    let mut acc = ScaledMatrix::IDENTITY;
    let mut out = Vec::with_capacity(checkpoints);
    let mut start = 0;
    for j in 1..=checkpoints {
        let end = j * n / checkpoints;
        for &v in &values[start..end] {
            acc.push_left(&one_step(energy, v)?);
        }
        out.push(acc.log_norm());
        start = end;
    }
    Ok(out)
}

/// Applies `T_{[a,b]}` to the unit vector `x` by iterated
/// apply-and-normalise. Returns `||T x||` and the unit image direction.
pub fn product_apply(
    energy: f64,
    path: &PotentialPath,
    a: i64,
    b: i64,
    x: [f64; 2],
) -> Result<(SignedLog, [f64; 2])> {
    ensure_finite("energy", energy)?;
    let norm = x[0].hypot(x[1]);
    if norm == 0.0 || !norm.is_finite() {
        return Err(domain("product_apply needs a nonzero finite vector"));
    }
    let values = window(path, a, b)?;
    let mut v = [x[0] / norm, x[1] / norm];
    let mut log_growth = 0.0;
    for &pot in values {
        v = one_step(energy, pot)?.apply(v);
        let r = v[0].hypot(v[1]);
        log_growth += r.ln();
        v = [v[0] / r, v[1] / r];
    }
    Ok((SignedLog::new(1, log_growth), v))
}

/// `<e1, T_{[a,b]} e1>` as a signed log.
///
/// This is the three-term recurrence `u(n+1) = (E - V_n) u(n) - u(n-1)` from
/// `(u(a+1), u(a)) = (1, 0)`, read off at `u(b+1)`. Equivalently it is
/// `det(E - H)` restricted to the sites `a+1..=b` (1 for an empty window).
pub fn entry_11_signed_log(energy: f64, path: &PotentialPath, a: i64, b: i64) -> Result<SignedLog> {
    ensure_finite("energy", energy)?;
    Ok(det_recurrence(energy, window(path, a, b)?))
}

/// `det(E - H)` of the free-boundary tridiagonal block with diagonal `values`.
pub(crate) fn det_recurrence(energy: f64, values: &[f64]) -> SignedLog {
    let (mut cur, mut prev) = (1.0f64, 0.0f64);
    let mut log_scale = 0.0;
    for &v in values {
        let next = (energy - v) * cur - prev;
        prev = cur;
        cur = next;
        let m = cur.abs().max(prev.abs());
        // m > 0: (cur, prev) is the image of a nonzero vector under an
        // invertible map.
        if m != 1.0 {
            cur /= m;
            prev /= m;
            log_scale += m.ln();
        }
    }
    SignedLog::from_scaled(cur, log_scale)
}

/// `||T x||` for a unit `x`, through the scaled product.
pub fn apply_scaled(m: &ScaledMatrix, x: [f64; 2]) -> SignedLog {
    let y = m.body.apply(x);
    SignedLog::from_scaled(y[0].hypot(y[1]), m.log_scale)
}

#[doc(hidden)]
pub fn dense_product(energy: f64, values: &[f64]) -> Matrix2 {
    values
        .iter()
        .fold(Matrix2::IDENTITY, |acc, &v| Matrix2::new(energy - v, -1.0, 1.0, 0.0) * acc)
}
