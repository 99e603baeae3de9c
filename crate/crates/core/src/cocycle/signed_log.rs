use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul, Neg};

/// A real number `sign * exp(log_abs)`.
///
/// Products, quotients and comparisons of magnitudes never leave the log
/// domain, so values like `1e-5000` or determinants of length-10^6 products
/// are representable.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SignedLog {
    pub sign: i8,
    pub log_abs: f64,
}

impl SignedLog {
    pub const ZERO: Self = Self {
        sign: 0,
        log_abs: f64::NEG_INFINITY,
    };
    pub const ONE: Self = Self {
        sign: 1,
        log_abs: 0.0,
    };

    pub fn new(sign: i8, log_abs: f64) -> Self {
        if sign == 0 || log_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self {
                sign: sign.signum(),
                log_abs,
            }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self::new(if x > 0.0 { 1 } else { -1 }, x.abs().ln())
        }
    }

    /// `x * exp(log_scale)` without forming the product.
    pub fn from_scaled(x: f64, log_scale: f64) -> Self {
        let s = Self::from_f64(x);
        Self::new(s.sign, s.log_abs + log_scale)
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        Self::new(self.sign.abs(), self.log_abs)
    }

    /// Materialises the value; overflows to +-inf or underflows to 0 as f64 does.
    pub fn to_f64(self) -> f64 {
        f64::from(self.sign) * self.log_abs.exp()
    }

    pub fn recip(self) -> Self {
        if self.is_zero() {
            Self::new(1, f64::INFINITY)
        } else {
            Self::new(self.sign, -self.log_abs)
        }
    }

    /// Compares magnitudes.
    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        self.log_abs.total_cmp(&other.log_abs)
    }
}

impl Mul for SignedLog {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.sign * rhs.sign, self.log_abs + rhs.log_abs)
    }
}

impl Div for SignedLog {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl Neg for SignedLog {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.sign, self.log_abs)
    }
}

impl fmt::Display for SignedLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}exp({})", if s < 0 { "-" } else { "+" }, self.log_abs),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_stays_in_log_domain() {
        let tiny = SignedLog::new(-1, -5000.0);
        let huge = SignedLog::new(1, 4000.0);
        let q = tiny / huge;
        assert_eq!(q.sign, -1);
        assert_eq!(q.log_abs, -9000.0);
        assert_eq!((tiny * SignedLog::ZERO), SignedLog::ZERO);
        assert_eq!((-huge).sign, -1);
    }

    #[test]
    fn round_trips_ordinary_values() {
        for x in [3.5, -0.25, 1.0, -1e-200] {
            let s = SignedLog::from_f64(x);
            // exp(ln x) loses about |ln x| ulps.
            let tol = 4.0 * f64::EPSILON * (1.0 + x.abs().ln().abs());
            assert!((s.to_f64() - x).abs() <= tol * x.abs(), "{x}");
        }
        assert!(SignedLog::from_f64(0.0).is_zero());
    }
}
