//! Multiscale-analysis parameter recipe for `p > 11`:
//!
//! ```text
//! kappa = min(p - 11, 0.01)
//! q1    = 1 + kappa/16
//! q2    = 10 + kappa/4
//! eta   = (11 + kappa/4) / (11 + kappa/2)
//! p'    = (11 + eta + kappa/2) / eta
//! ```
//!
//! and the side conditions those parameters are meant to satisfy. The recipe
//! is evaluated in exact rational arithmetic so that boundary cases are
//! decided exactly: `q2 = 4 q1 + 6` holds identically, so the strict
//! inequality `q2 > 4 q1 + 6` fails with slack exactly 0. Violations are
//! reported, never corrected.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Constraint {
    pub name: String,
    pub satisfied: bool,
    /// Signed margin; positive iff satisfied. For intervals, the distance to
    /// the nearer endpoint.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct MsaParams {
    pub p: f64,
    pub beta: f64,
    pub kappa: f64,
    pub q1: f64,
    pub q2: f64,
    pub eta: f64,
    pub p_prime: f64,
    /// `lambda_bound / 8`, or NaN when no bound was supplied.
    pub m0: f64,
    pub constraint_report: Vec<Constraint>,
}

impl MsaParams {
    pub fn constraint(&self, name: &str) -> Option<&Constraint> {
        self.constraint_report.iter().find(|c| c.name == name)
    }

    pub fn all_satisfied(&self) -> bool {
        self.constraint_report.iter().all(|c| c.satisfied)
    }
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite input")
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn greater(name: &str, lhs: &BigRational, rhs: &BigRational) -> Constraint {
    let slack = lhs - rhs;
    Constraint {
        name: name.to_string(),
        satisfied: slack.is_positive(),
        slack: to_f64(&slack),
    }
}

fn inside(name: &str, x: &BigRational, lo: &BigRational, hi: &BigRational) -> Constraint {
    let a = x - lo;
    let b = hi - x;
    let slack = if a < b { a } else { b };
    Constraint {
        name: name.to_string(),
        satisfied: slack.is_positive(),
        slack: to_f64(&slack),
    }
}

/// Evaluates the recipe and its side conditions.
///
/// `lambda_bound`, a lower bound for the Lyapunov exponent on the energy
/// window, sets the initial decay rate `m0 = lambda_bound / 8`, inside the
/// admissible range `m0 < lambda_bound / 4`.
pub fn msa_parameter_suite(p: f64, beta: f64, lambda_bound: Option<f64>) -> Result<MsaParams> {
    if !p.is_finite() || p <= 11.0 {
        return Err(domain(format!("the recipe needs p > 11, got {p}")));
    }
    if !beta.is_finite() {
        return Err(domain(format!("beta must be finite, got {beta}")));
    }
    let pr = exact(p);
    let br = exact(beta);
    let eleven = ratio(11, 1);

    let p_minus = &pr - &eleven;
    let cap = ratio(1, 100);
    let kappa = if p_minus < cap { p_minus } else { cap };
    let q1 = BigRational::one() + &kappa / ratio(16, 1);
    let q2 = ratio(10, 1) + &kappa / ratio(4, 1);
    let eta = (&eleven + &kappa / ratio(4, 1)) / (&eleven + &kappa / ratio(2, 1));
    let p_prime = (&eleven + &eta + &kappa / ratio(2, 1)) / &eta;
    let exponent = BigRational::one() + &eta - &eta * &p_prime;

    let mut report = vec![
        greater("q1 > 1", &q1, &BigRational::one()),
        greater("q2 > 4*q1 + 6", &q2, &(ratio(4, 1) * &q1 + ratio(6, 1))),
        inside("beta in (0,1)", &br, &BigRational::zero(), &BigRational::one()),
        inside("eta in (0,beta)", &eta, &BigRational::zero(), &br),
        inside("p_prime in (1,p)", &p_prime, &BigRational::one(), &pr),
        greater("1 + eta - eta*p_prime < -q2", &(-&q2), &exponent),
    ];

    let m0 = match lambda_bound {
        Some(l) => {
            if !(l > 0.0) || !l.is_finite() {
                return Err(domain(format!("lambda bound must be positive, got {l}")));
            }
            let lr = exact(l);
            let m0 = &lr / ratio(8, 1);
            report.push(inside("m0 in (0,lambda/4)", &m0, &BigRational::zero(), &(&lr / ratio(4, 1))));
            to_f64(&m0)
        }
        None => f64::NAN,
    };

    Ok(MsaParams {
        p,
        beta,
        kappa: to_f64(&kappa),
        q1: to_f64(&q1),
        q2: to_f64(&q2),
        eta: to_f64(&eta),
        p_prime: to_f64(&p_prime),
        m0,
        constraint_report: report,
    })
}
