use std::path::PathBuf;

/// Errors raised by the numerical kernels and the experiment harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("path is empty")]
    EmptyPath,
    #[error("index range error: {0}")]
    Range(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("insufficient sample: {0}")]
    InsufficientSample(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("energy {energy} is resonant (distance to spectrum {distance:e})")]
    Resonance { energy: f64, distance: f64 },
    #[error("inverse iteration did not converge: residual {residual:e} exceeds {bound:e}")]
    NoConvergence { residual: f64, bound: f64 },
    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },
    #[error("malformed distribution `{input}`: {message}")]
    DistributionSyntax { input: String, message: String },
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("experiment aborted: {0}")]
    Aborted(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn ensure_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite, got {x}")))
    }
}
