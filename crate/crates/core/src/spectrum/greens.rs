//! Finite-volume Green's functions `G(x,y) = <delta_x, (H - E)^{-1} delta_y>`.
//!
//! Boundary entries are evaluated from determinants. With
//! `P[s..t] = det(E - H)` on the sites `s..=t` (1 when the range is empty),
//! a direct cofactor expansion gives, for `a <= x <= y <= b`,
//!
//! ```text
//! G(x, y) = -P[a..x-1] * P[y+1..b] / P[a..b]
//! ```
//!
//! The dense-oracle tests pin this form, signs included. `P[s..t]` is the
//! `(1,1)` entry of the transfer product over the window `(s-1, t]`, that is
//! `entry_11_signed_log(E, path, s - 1, t)`: a product labelled `[a,b]`
//! covers the `b - a` sites `a+1..=b`, one fewer than the interval `[a,b]`.

use super::{hamiltonian, sturm, Box, TridiagonalHamiltonian};
use crate::cocycle::{det_recurrence, SignedLog};
use crate::distributions::PotentialPath;
use crate::error::{domain, ensure_finite, Error, Result};

/// Largest size accepted by the dense routines.
pub const DENSE_MAX: usize = 64;
/// Dense solves refuse energies this close to the spectrum.
pub const DENSE_RESONANCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GreensValue {
    /// `G(x, x +- L/2)`; `+inf` in log form when resonant.
    pub value: SignedLog,
    pub resonant: bool,
}

/// `greens_entry` flags resonance below `RESONANCE_REL * (2 + max|V|)`.
pub const RESONANCE_REL: f64 = 1e-12;

pub fn resonance_tolerance(h: &TridiagonalHamiltonian) -> f64 {
    RESONANCE_REL * h.norm_bound()
}

/// `P[first..last]` from a path.
fn p_det(energy: f64, path: &PotentialPath, first: i64, last: i64) -> Result<SignedLog> {
    Ok(det_recurrence(energy, path.sites(first, last)?))
}

/// Boundary Green's entry `G(x, x + L/2)` (right) or `G(x, x - L/2)` (left)
/// of the box, with `x` its centre.
pub fn greens_entry(path: &PotentialPath, bx: Box, energy: f64, side: Side) -> Result<GreensValue> {
    ensure_finite("energy", energy)?;
    let h = hamiltonian(path, bx)?;
    if sturm::has_eigenvalue_near(&h, energy, resonance_tolerance(&h)) {
        return Ok(GreensValue {
            value: SignedLog::new(1, f64::INFINITY),
            resonant: true,
        });
    }
    let (a, x, b) = (bx.left(), bx.center, bx.right());
    let denom = p_det(energy, path, a, b)?;
    let numer = match side {
        Side::Right => p_det(energy, path, a, x - 1)?,
        // G(x, a) = G(a, x) by symmetry.
        Side::Left => p_det(energy, path, x + 1, b)?,
    };
    Ok(GreensValue {
        value: -(numer / denom),
        resonant: false,
    })
}

/// Dense LU with partial pivoting of `H - E`, for oracle-sized problems.
pub struct DenseResolvent {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    offset: i64,
}

impl DenseResolvent {
    pub fn new(h: &TridiagonalHamiltonian, energy: f64) -> Result<Self> {
        let n = h.size();
        if n > DENSE_MAX {
            return Err(domain(format!("dense Green's function limited to size {DENSE_MAX}, got {n}")));
        }
        ensure_finite("energy", energy)?;
        if sturm::has_eigenvalue_near(h, energy, DENSE_RESONANCE_TOL) {
            return Err(Error::Resonance {
                energy,
                distance: sturm::spectral_distance(h, energy),
            });
        }
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = h.diag[i] - energy;
            if i + 1 < n {
                a[i * n + i + 1] = 1.0;
                a[(i + 1) * n + i] = 1.0;
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
                .expect("nonempty");
            if a[p * n + k] == 0.0 {
                return Err(Error::Resonance { energy, distance: 0.0 });
            }
            if p != k {
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                perm.swap(k, p);
            }
            for i in k + 1..n {
                let f = a[i * n + k] / a[k * n + k];
                a[i * n + k] = f;
                for c in k + 1..n {
                    a[i * n + c] -= f * a[k * n + c];
                }
            }
        }
        Ok(Self {
            n,
            lu: a,
            perm,
            offset: h.offset,
        })
    }

    /// Column `(H - E)^{-1} delta_site`.
    pub fn column(&self, site: i64) -> Result<Vec<f64>> {
        let n = self.n;
        let j = site - self.offset;
        if j < 0 || j as usize >= n {
            return Err(Error::Range(format!("site {site} outside the box")));
        }
        let mut b: Vec<f64> = self.perm.iter().map(|&p| if p == j as usize { 1.0 } else { 0.0 }).collect();
        for i in 0..n {
            for k in 0..i {
                b[i] -= self.lu[i * n + k] * b[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                b[i] -= self.lu[i * n + k] * b[k];
            }
            b[i] /= self.lu[i * n + i];
        }
        Ok(b)
    }
}

/// `G(x, y)` by a dense solve of `(H - E) w = delta_y`; sites are absolute.
pub fn greens_direct(h: &TridiagonalHamiltonian, energy: f64, x: i64, y: i64) -> Result<f64> {
    let xi = h.local_index(x)?;
    let col = DenseResolvent::new(h, energy)?.column(y)?;
    Ok(col[xi])
}

/// Checks the Poisson identity `psi(x) = -G(x,a) psi(a-1) - G(x,b) psi(b+1)`
/// on every `x` in the box `[a, b]`.
///
/// `psi` solves `H psi = E psi` on `[a-1, b+1]` with initial data
/// `psi(a-1) = psi_before`, `psi(a) = psi_first`; the recurrence uses only
/// the potential on the box. Returns the largest residual relative to the
/// magnitude of the terms in the identity at that site.
pub fn poisson_residual(
    path: &PotentialPath,
    bx: Box,
    energy: f64,
    psi_before: f64,
    psi_first: f64,
) -> Result<f64> {
    let h = hamiltonian(path, bx)?;
    if h.size() > DENSE_MAX {
        return Err(domain(format!("poisson check limited to size {DENSE_MAX}")));
    }
    let resolvent = DenseResolvent::new(&h, energy)?;
    let (a, b) = (bx.left(), bx.right());
    let n = h.size();

    // psi[0] = psi(a-1), psi[i+1] = psi(a+i), psi[n+1] = psi(b+1).
    let mut psi = vec![0.0; n + 2];
    psi[0] = psi_before;
    psi[1] = psi_first;
    for i in 0..n {
        psi[i + 2] = (energy - h.diag[i]) * psi[i + 1] - psi[i];
    }
    let col_a = resolvent.column(a)?;
    let col_b = resolvent.column(b)?;
    let mut worst = 0.0f64;
    for i in 0..n {
        // G(x,a) = G(a,x): column a, row x.
        let ta = col_a[i] * psi[0];
        let tb = col_b[i] * psi[n + 1];
        let lhs = psi[i + 1];
        let scale = lhs.abs() + ta.abs() + tb.abs();
        if scale > 0.0 {
            worst = worst.max((lhs + ta + tb).abs() / scale);
        }
    }
    Ok(worst)
}
