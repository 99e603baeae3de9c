//! The hybrid logarithm `log^{p*}`: `(log x)^p` for `x >= e^p`, extended
//! linearly to the origin below that. The two branches meet at `x = e^p`
//! with common value `p^p` and common slope `(p/e)^p`, so the function is
//! concave, vanishes at 0 and is therefore subadditive.

use crate::error::{domain, Result};

fn check(x: f64, p: f64) -> Result<()> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain(format!("log_p_star needs finite x >= 0, got {x}")));
    }
    if !(p >= 1.0) || !p.is_finite() {
        return Err(domain(format!("log_p_star needs p >= 1, got {p}")));
    }
    Ok(())
}

pub fn log_p_star(x: f64, p: f64) -> Result<f64> {
    check(x, p)?;
    if x.ln() >= p {
        Ok(x.ln().powf(p))
    } else {
        Ok((p / std::f64::consts::E).powf(p) * x)
    }
}

/// Derivative of [`log_p_star`]; at `x = e^p` both branches give `(p/e)^p`.
pub fn log_p_star_slope(x: f64, p: f64) -> Result<f64> {
    check(x, p)?;
    if x.ln() >= p {
        Ok(p * x.ln().powf(p - 1.0) / x)
    } else {
        Ok((p / std::f64::consts::E).powf(p))
    }
}

/// Constant `C_p` in `log^{p*}(xy) <= C_p log^{p*}(x) log^{p*}(y)`.
///
/// One works for `p >= e`. Below that the bound can fail near `x = y = 1`;
/// the value 1 is still returned, with a warning.
pub fn submultiplicative_constant(p: f64) -> f64 {
    if p < std::f64::consts::E {
        log::warn!("log^(p*) submultiplicativity with C_p = 1 is only guaranteed for p >= e (p = {p})");
    }
    1.0
}
