//! Finite-volume spectral kernel for `H` on a box: Sturm counting,
//! bisection eigenvalues, inverse-iteration eigenvectors, Green's functions
//! and the integrated density of states.

mod eigvec;
mod greens;
mod hamiltonian;
mod ids;
mod sturm;

pub use eigvec::{eigenvector, localized_eigenvector, RESIDUAL_TOL};
pub use greens::{
    greens_direct, greens_entry, poisson_residual, resonance_tolerance, DenseResolvent, GreensValue, Side,
    DENSE_MAX, RESONANCE_REL,
};
pub use hamiltonian::{hamiltonian, Box, TridiagonalHamiltonian};
pub use ids::{ids_curve, ids_estimate, IdsEstimate};
pub use sturm::{
    bracketing_eigenvalues, eigenvalues, has_eigenvalue_near, nearest_eigenvalue, spectral_distance, sturm_count,
};
