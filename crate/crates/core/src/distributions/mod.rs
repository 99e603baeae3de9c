//! Single-site laws for the random potential.
//!
//! The laws here only need to satisfy a logarithmic moment condition
//! `E[(log+ |X|)^p] < inf`. Two heavy-tailed families are provided:
//!
//! * `cauchy{center,gamma}`: every log-moment is finite, and the Lyapunov
//!   exponent of the associated Anderson model is known in closed form.
//! * `logpareto{p_tail}`: symmetric sign, `|X| >= e`, and
//!   `P[|X| > x] = (log x)^(-p_tail)` for `x >= e`. The `q`-th log-moment is
//!   finite iff `q < p_tail`.
//!
//! Laws are written as `kind{key=value,...}`, for example
//! `cauchy{center=0,gamma=1}`. The accepted forms are
//!
//! ```text
//! bernoulli{a=<real>,b=<real>,q=<prob>}   value b with probability q, else a
//! uniform{lo=<real>,hi=<real>}
//! cauchy{center=<real>,gamma=<real>}
//! logpareto{p_tail=<real>}
//! pointmass{value=<real>}
//! ```
//!
//! Whitespace around tokens is ignored, keys may come in any order and every
//! key is required. `Display` writes the canonical form, which parses back to
//! an identical value.

mod logstar;
mod moments;

pub use logstar::{log_p_star, log_p_star_slope, submultiplicative_constant};
pub use moments::{log_plus_moment_estimate, MomentEstimate};

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};
use crate::rng::{SeedSpec, TrialRng};

/// Largest magnitude a draw may take. Log-Pareto draws beyond it saturate,
/// keeping every downstream product finite; `ln(1e300) ~ 690.8`.
pub const MAX_MAGNITUDE: f64 = 1e300;

/// A single-site law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionSpec {
    Bernoulli { a: f64, b: f64, q: f64 },
    Uniform { lo: f64, hi: f64 },
    Cauchy { center: f64, gamma: f64 },
    LogPareto { p_tail: f64 },
    PointMass { value: f64 },
}

/// A realisation of the potential: `values[i]` is `V` at site `origin + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialPath {
    pub origin: i64,
    pub values: Vec<f64>,
}

impl PotentialPath {
    pub fn new(origin: i64, values: Vec<f64>) -> Self {
        Self { origin, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Last covered site (inclusive). Meaningless for an empty path.
    pub fn last_site(&self) -> i64 {
        self.origin + self.values.len() as i64 - 1
    }

    pub fn covers(&self, first: i64, last: i64) -> bool {
        first > last || (first >= self.origin && last <= self.last_site())
    }

    /// Potential values on sites `first..=last`.
    pub fn sites(&self, first: i64, last: i64) -> Result<&[f64]> {
        if first > last {
            return Ok(&[]);
        }
        if !self.covers(first, last) {
            return Err(Error::Range(format!(
                "sites [{first}, {last}] not covered by path [{}, {}]",
                self.origin,
                self.last_site()
            )));
        }
        let lo = (first - self.origin) as usize;
        let hi = (last - self.origin) as usize;
        Ok(&self.values[lo..=hi])
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl DistributionSpec {
    pub fn cauchy(center: f64, gamma: f64) -> Self {
        Self::Cauchy { center, gamma }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Bernoulli { a, b, q } => a.is_finite() && b.is_finite() && (0.0..=1.0).contains(&q),
            Self::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && lo <= hi,
            Self::Cauchy { center, gamma } => center.is_finite() && gamma.is_finite() && gamma >= 0.0,
            Self::LogPareto { p_tail } => p_tail.is_finite() && p_tail > 1.0,
            Self::PointMass { value } => value.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(domain(format!("invalid parameters for {self}")))
        }
    }

    /// True iff the law is not concentrated on a single point.
    pub fn is_nontrivial(&self) -> bool {
        match *self {
            Self::Bernoulli { a, b, q } => a != b && q > 0.0 && q < 1.0,
            Self::Uniform { lo, hi } => lo < hi,
            Self::Cauchy { gamma, .. } => gamma > 0.0,
            Self::LogPareto { .. } => true,
            Self::PointMass { .. } => false,
        }
    }

    /// Invariant under `V -> -V`.
    pub fn is_symmetric(&self) -> bool {
        match *self {
            Self::Bernoulli { a, b, q } => (a == -b && q == 0.5) || (a == 0.0 && b == 0.0),
            Self::Uniform { lo, hi } => lo == -hi,
            Self::Cauchy { center, .. } => center == 0.0,
            Self::LogPareto { .. } => true,
            Self::PointMass { value } => value == 0.0,
        }
    }

    /// Inverse CDF. Defined for the continuous kinds only.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(domain(format!("quantile level must lie in (0,1), got {u}")));
        }
        match *self {
            Self::Uniform { lo, hi } => Ok(lo + (hi - lo) * u),
            Self::Cauchy { center, gamma } => {
                Ok(center + gamma * (std::f64::consts::PI * (u - 0.5)).tan())
            }
            Self::LogPareto { p_tail } => {
                // Lower half maps to the negative branch, upper half to the
                // positive one; w is the tail probability P[|X| > |x|].
                let (sign, w) = if u < 0.5 {
                    (-1.0, 2.0 * u)
                } else {
                    (1.0, 2.0 * (1.0 - u))
                };
                let log_mag = w.powf(-1.0 / p_tail);
                Ok(sign * log_mag.exp().min(MAX_MAGNITUDE))
            }
            Self::Bernoulli { .. } | Self::PointMass { .. } => Err(Error::Unsupported(format!(
                "{self} has no inverse CDF; it is drawn directly"
            ))),
        }
    }

    /// One draw from the law.
    pub fn draw(&self, rng: &mut TrialRng) -> f64 {
        match *self {
            Self::PointMass { value } => value,
            Self::Bernoulli { a, b, q } => {
                if rng.open01() < q {
                    b
                } else {
                    a
                }
            }
            _ => self
                .quantile(rng.open01())
                .expect("continuous kinds accept every level in (0,1)"),
        }
    }

    /// Tail function `P[|X| > x]` where it has a closed form.
    pub fn abs_tail(&self, x: f64) -> Option<f64> {
        match *self {
            Self::LogPareto { p_tail } => Some(if x < std::f64::consts::E {
                1.0
            } else {
                x.ln().powf(-p_tail)
            }),
            Self::Cauchy { center, gamma } if center == 0.0 && gamma > 0.0 => {
                Some(if x < 0.0 {
                    1.0
                } else {
                    1.0 - 2.0 * (x / gamma).atan() / std::f64::consts::PI
                })
            }
            _ => None,
        }
    }
}

/// Draws `n` i.i.d. samples from `dist`, placed on sites `0..n`.
pub fn sample(dist: &DistributionSpec, n: usize, seed: SeedSpec) -> Result<PotentialPath> {
    sample_at(dist, 0, n, seed)
}

/// As [`sample`], with the first value placed on site `origin`.
pub fn sample_at(
    dist: &DistributionSpec,
    origin: i64,
    n: usize,
    seed: SeedSpec,
) -> Result<PotentialPath> {
    if n == 0 {
        return Err(Error::EmptyPath);
    }
    dist.validate()?;
    let mut rng = seed.rng();
    let values = (0..n).map(|_| dist.draw(&mut rng)).collect();
    Ok(PotentialPath::new(origin, values))
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Bernoulli { a, b, q } => write!(f, "bernoulli{{a={a},b={b},q={q}}}"),
            Self::Uniform { lo, hi } => write!(f, "uniform{{lo={lo},hi={hi}}}"),
            Self::Cauchy { center, gamma } => write!(f, "cauchy{{center={center},gamma={gamma}}}"),
            Self::LogPareto { p_tail } => write!(f, "logpareto{{p_tail={p_tail}}}"),
            Self::PointMass { value } => write!(f, "pointmass{{value={value}}}"),
        }
    }
}

impl FromStr for DistributionSpec {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let err = |message: String| Error::DistributionSyntax {
            input: input.to_string(),
            message,
        };
        let s = input.trim();
        let open = s.find('{').ok_or_else(|| err("expected `kind{...}`".into()))?;
        if !s.ends_with('}') {
            return Err(err("missing closing `}`".into()));
        }
        let kind = s[..open].trim();
        let body = &s[open + 1..s.len() - 1];
        let mut fields: Vec<(String, f64)> = Vec::new();
        for item in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got `{item}`")))?;
            let k = k.trim();
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| err(format!("value of `{k}` is not a number: `{}`", v.trim())))?;
            if fields.iter().any(|(seen, _)| seen == k) {
                return Err(err(format!("duplicate key `{k}`")));
            }
            fields.push((k.to_string(), v));
        }
        let expected: &[&str] = match kind {
            "bernoulli" => &["a", "b", "q"],
            "uniform" => &["lo", "hi"],
            "cauchy" => &["center", "gamma"],
            "logpareto" => &["p_tail"],
            "pointmass" => &["value"],
            other => return Err(err(format!("unknown distribution kind `{other}`"))),
        };
        if let Some((k, _)) = fields.iter().find(|(k, _)| !expected.contains(&k.as_str())) {
            return Err(err(format!("unknown key `{k}` for {kind}")));
        }
        let get = |key: &str| {
            fields
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| *v)
                .ok_or_else(|| err(format!("missing key `{key}` for {kind}")))
        };
        let spec = match kind {
            "bernoulli" => Self::Bernoulli {
                a: get("a")?,
                b: get("b")?,
                q: get("q")?,
            },
            "uniform" => Self::Uniform {
                lo: get("lo")?,
                hi: get("hi")?,
            },
            "cauchy" => Self::Cauchy {
                center: get("center")?,
                gamma: get("gamma")?,
            },
            "logpareto" => Self::LogPareto {
                p_tail: get("p_tail")?,
            },
            _ => Self::PointMass {
                value: get("value")?,
            },
        };
        spec.validate().map_err(|e| err(e.to_string()))?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seed() -> SeedSpec {
        SeedSpec::new(2024, 1, 0)
    }

    #[test]
    fn pointmass_path_is_constant() {
        let p = sample(&DistributionSpec::PointMass { value: 0.0 }, 5, seed()).unwrap();
        assert_eq!(p.values, vec![0.0; 5]);
    }

    #[test]
    fn empty_path_rejected() {
        let d = DistributionSpec::cauchy(0.0, 1.0);
        assert!(matches!(sample(&d, 0, seed()), Err(Error::EmptyPath)));
    }

    #[test]
    fn bernoulli_values_and_mean() {
        let d = DistributionSpec::Bernoulli { a: -1.0, b: 1.0, q: 0.5 };
        let p = sample(&d, 10_000, seed()).unwrap();
        assert!(p.values.iter().all(|&v| v == -1.0 || v == 1.0));
        // sd of the mean is 0.01, so 0.05 is a 5-sigma band.
        let m = crate::stats::mean(&p.values);
        assert!(m.abs() < 0.05, "mean {m}");
    }

    #[test]
    fn sampling_is_deterministic() {
        let d = DistributionSpec::LogPareto { p_tail: 3.0 };
        assert_eq!(sample(&d, 100, seed()).unwrap(), sample(&d, 100, seed()).unwrap());
    }

    #[test]
    fn cauchy_quantiles() {
        let d = DistributionSpec::cauchy(0.0, 1.0);
        assert_eq!(d.quantile(0.5).unwrap(), 0.0);
        assert!((d.quantile(0.75).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn logpareto_quantile_positive_branch() {
        let d = DistributionSpec::LogPareto { p_tail: 3.0 };
        // Upper half: w = 2(1-u) = 0.125.
        let x = d.quantile(1.0 - 0.0625).unwrap();
        assert!((x - 2f64.exp()).abs() < 1e-12, "{x}");
        assert!((d.quantile(0.0625).unwrap() + 2f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn quantile_errors() {
        let d = DistributionSpec::cauchy(0.0, 1.0);
        assert!(matches!(d.quantile(0.0), Err(Error::Domain(_))));
        assert!(matches!(d.quantile(1.0), Err(Error::Domain(_))));
        let b = DistributionSpec::Bernoulli { a: 0.0, b: 1.0, q: 0.5 };
        assert!(matches!(b.quantile(0.3), Err(Error::Unsupported(_))));
    }

    #[test]
    fn nontrivial_flags() {
        use DistributionSpec::*;
        assert!(Bernoulli { a: -1.0, b: 1.0, q: 0.5 }.is_nontrivial());
        assert!(!Bernoulli { a: 1.0, b: 1.0, q: 0.5 }.is_nontrivial());
        assert!(!Bernoulli { a: -1.0, b: 1.0, q: 1.0 }.is_nontrivial());
        assert!(Uniform { lo: 0.0, hi: 1.0 }.is_nontrivial());
        assert!(!Uniform { lo: 1.0, hi: 1.0 }.is_nontrivial());
        assert!(DistributionSpec::cauchy(0.0, 1.0).is_nontrivial());
        assert!(!DistributionSpec::cauchy(0.0, 0.0).is_nontrivial());
        assert!(LogPareto { p_tail: 2.0 }.is_nontrivial());
        assert!(!PointMass { value: 3.0 }.is_nontrivial());
    }

    #[test]
    fn logpareto_empirical_tail() {
        let p_tail = 3.0;
        let d = DistributionSpec::LogPareto { p_tail };
        let n = 100_000;
        let path = sample(&d, n, seed()).unwrap();
        assert!(path.values.iter().all(|v| v.abs() >= std::f64::consts::E * (1.0 - 1e-15)));
        for k in [2.0f64, 4.0] {
            let x = k.exp();
            let expect = k.powf(-p_tail);
            let hits = path.values.iter().filter(|v| v.abs() > x).count();
            let freq = hits as f64 / n as f64;
            let se = (expect * (1.0 - expect) / n as f64).sqrt();
            assert!((freq - expect).abs() < 3.0 * se, "x=e^{k}: {freq} vs {expect}");
        }
    }

    #[test]
    fn parse_examples() {
        let d: DistributionSpec = "cauchy{center=0,gamma=1}".parse().unwrap();
        assert_eq!(d, DistributionSpec::cauchy(0.0, 1.0));
        let d: DistributionSpec = " bernoulli{ q=0.25, a=-1 ,b=2 } ".parse().unwrap();
        assert_eq!(d, DistributionSpec::Bernoulli { a: -1.0, b: 2.0, q: 0.25 });
        for bad in [
            "cauchy",
            "cauchy{center=0}",
            "cauchy{center=0,gamma=1,extra=2}",
            "gauss{mu=0}",
            "cauchy{center=x,gamma=1}",
            "logpareto{p_tail=0.5}",
            "uniform{lo=0,lo=1}",
        ] {
            assert!(bad.parse::<DistributionSpec>().is_err(), "{bad}");
        }
    }

    fn any_dist() -> impl Strategy<Value = DistributionSpec> {
        let real = -1e6f64..1e6;
        prop_oneof![
            (real.clone(), real.clone(), 0.0f64..=1.0)
                .prop_map(|(a, b, q)| DistributionSpec::Bernoulli { a, b, q }),
            (real.clone(), 0.0f64..1e3).prop_map(|(lo, w)| DistributionSpec::Uniform { lo, hi: lo + w }),
            (real.clone(), 0.0f64..1e3).prop_map(|(c, g)| DistributionSpec::cauchy(c, g)),
            (1.0001f64..50.0).prop_map(|p_tail| DistributionSpec::LogPareto { p_tail }),
            real.prop_map(|value| DistributionSpec::PointMass { value }),
        ]
    }

    proptest! {
        #[test]
        fn display_parses_back(d in any_dist()) {
            let text = d.to_string();
            prop_assert_eq!(text.parse::<DistributionSpec>().unwrap(), d);
        }
    }
}
