use std::ops::Mul;

use crate::error::{ensure_finite, Result};

/// Real 2x2 matrix `[[m11, m12], [m21, m22]]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Matrix2 {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl Matrix2 {
    pub const IDENTITY: Self = Self::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(m11: f64, m12: f64, m21: f64, m22: f64) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn max_abs(&self) -> f64 {
        self.m11.abs().max(self.m12.abs()).max(self.m21.abs()).max(self.m22.abs())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.m11 * s, self.m12 * s, self.m21 * s, self.m22 * s)
    }

    pub fn apply(&self, x: [f64; 2]) -> [f64; 2] {
        [
            self.m11 * x[0] + self.m12 * x[1],
            self.m21 * x[0] + self.m22 * x[1],
        ]
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        let s = self.m11 * self.m11 + self.m12 * self.m12 + self.m21 * self.m21 + self.m22 * self.m22;
        let d = self.det().abs();
        // sigma_max^2 = (s + sqrt(s^2 - 4 d^2)) / 2, factored to limit cancellation.
        let disc = ((s - 2.0 * d).max(0.0) * (s + 2.0 * d)).sqrt();
        (0.5 * (s + disc)).sqrt()
    }
}

impl Mul for Matrix2 {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        Self::new(
            self.m11 * r.m11 + self.m12 * r.m21,
            self.m11 * r.m12 + self.m12 * r.m22,
            self.m21 * r.m11 + self.m22 * r.m21,
            self.m21 * r.m12 + self.m22 * r.m22,
        )
    }
}

/// The one-step transfer matrix `[[E - v, -1], [1, 0]]`, which maps
/// `(psi(n), psi(n-1))` to `(psi(n+1), psi(n))` for `H psi = E psi`.
pub fn one_step(energy: f64, v: f64) -> Result<Matrix2> {
    ensure_finite("energy", energy)?;
    ensure_finite("potential value", v)?;
    Ok(Matrix2::new(energy - v, -1.0, 1.0, 0.0))
}

/// A matrix `exp(log_scale) * body` with `max_abs(body) == 1`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ScaledMatrix {
    pub body: Matrix2,
    pub log_scale: f64,
}

impl ScaledMatrix {
    pub const IDENTITY: Self = Self {
        body: Matrix2::IDENTITY,
        log_scale: 0.0,
    };

    pub fn from_matrix(m: Matrix2) -> Self {
        let mut s = Self {
            body: m,
            log_scale: 0.0,
        };
        s.renormalize();
        s
    }

    pub(crate) fn renormalize(&mut self) {
        let mx = self.body.max_abs();
        if mx > 0.0 && mx != 1.0 {
            self.body = self.body.scale(1.0 / mx);
            self.log_scale += mx.ln();
        }
    }

    /// `log ||M||` with the spectral norm.
    pub fn log_norm(&self) -> f64 {
        self.log_scale + self.body.operator_norm().ln()
    }

    /// `log|det M| = log|det body| + 2 log_scale`; zero for SL(2) products.
    pub fn log_abs_det(&self) -> f64 {
        self.body.det().abs().ln() + 2.0 * self.log_scale
    }

    /// Left-multiplies by `step` and renormalises.
    pub fn push_left(&mut self, step: &Matrix2) {
        self.body = *step * self.body;
        self.renormalize();
    }
}
