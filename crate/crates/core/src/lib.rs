//! A numerical laboratory for one-dimensional Anderson models
//! `(H psi)(n) = psi(n+1) + psi(n-1) + V_n psi(n)` whose i.i.d. potential
//! only satisfies a logarithmic moment condition.
//!
//! * [`distributions`]: seeded heavy-tailed single-site laws, the `log^{p*}`
//!   function and log-moment diagnostics.
//! * [`cocycle`]: overflow-safe transfer products, Lyapunov exponents and
//!   large-deviation tails.
//! * [`spectrum`]: Sturm counting, eigenpairs, Green's functions and the
//!   integrated density of states on finite boxes.
//! * [`localization`]: box regularity, Wegner-type probabilities,
//!   eigenfunction decay and the multiscale parameter recipe.
//! * [`harness`]: the `anderson-lab` command line and result files.
//!
//! ```
//! use anderson_lab::cocycle::{lloyd_lyapunov, lyapunov_estimate};
//! use anderson_lab::distributions::DistributionSpec;
//! use anderson_lab::rng::SeedSpec;
//!
//! let cauchy: DistributionSpec = "cauchy{center=0,gamma=1}".parse()?;
//! let est = lyapunov_estimate(&cauchy, 0.0, 20_000, 4, SeedSpec::new(1, 0, 0))?;
//! let exact = lloyd_lyapunov(0.0, 1.0)?;
//! assert!((est.lambda_hat - exact).abs() < 0.05);
//! # Ok::<(), anderson_lab::Error>(())
//! ```

pub mod cocycle;
pub mod distributions;
pub mod error;
pub mod harness;
pub mod localization;
pub mod rng;
pub mod spectrum;
pub mod stats;

pub use error::{Error, Result};
