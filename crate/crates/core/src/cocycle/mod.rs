//! The Schrödinger cocycle: overflow-safe transfer products, Lyapunov
//! exponents and empirical large-deviation tails.

mod lde;
mod lyapunov;
mod matrix;
mod product;
mod signed_log;

pub use lde::{lde_deviations, lde_log_quantity, lde_tail, tail_from_deviations, LambdaRef, LambdaSource, LdeMode};
pub use lyapunov::{lambda_min_estimate, lloyd_lyapunov, lyapunov_estimate, LyapunovEstimate};
pub use matrix::{one_step, Matrix2, ScaledMatrix};
pub use product::{apply_scaled, dense_product, entry_11_signed_log, product_apply, scaled_product, scaled_product_of};
pub(crate) use product::det_recurrence;
pub use signed_log::SignedLog;
