use crate::distributions::PotentialPath;
use crate::error::{domain, Result};

/// The box `Lambda_L(x) = [x - L/2, x + L/2]`, with `L` even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Box {
    pub center: i64,
    pub length: usize,
}

impl Box {
    pub fn new(center: i64, length: usize) -> Result<Self> {
        if length == 0 || length % 2 != 0 {
            return Err(domain(format!("box length must be even and positive, got {length}")));
        }
        Ok(Self { center, length })
    }

    /// `Lambda_L(0)`.
    pub fn centered(length: usize) -> Result<Self> {
        Self::new(0, length)
    }

    pub fn half(&self) -> i64 {
        (self.length / 2) as i64
    }

    pub fn left(&self) -> i64 {
        self.center - self.half()
    }

    pub fn right(&self) -> i64 {
        self.center + self.half()
    }

    /// Number of sites, `L + 1`.
    pub fn size(&self) -> usize {
        self.length + 1
    }
}

/// `H` restricted to an interval: diagonal `V`, off-diagonals 1.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TridiagonalHamiltonian {
    pub diag: Vec<f64>,
    /// Site index of `diag[0]`.
    pub offset: i64,
}

impl TridiagonalHamiltonian {
    pub fn new(diag: Vec<f64>, offset: i64) -> Self {
        assert!(!diag.is_empty(), "Hamiltonian needs at least one site");
        Self { diag, offset }
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn max_abs_potential(&self) -> f64 {
        self.diag.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `2 + max |V|`, an upper bound for `||H||`.
    pub fn norm_bound(&self) -> f64 {
        2.0 + self.max_abs_potential()
    }

    /// `(H - shift) v`.
    pub fn apply_shifted(&self, shift: f64, v: &[f64]) -> Vec<f64> {
        let n = self.size();
        (0..n)
            .map(|i| {
                let mut s = (self.diag[i] - shift) * v[i];
                if i > 0 {
                    s += v[i - 1];
                }
                if i + 1 < n {
                    s += v[i + 1];
                }
                s
            })
            .collect()
    }

    pub fn local_index(&self, site: i64) -> Result<usize> {
        let i = site - self.offset;
        if i < 0 || i as usize >= self.size() {
            return Err(crate::error::Error::Range(format!(
                "site {site} outside [{}, {}]",
                self.offset,
                self.offset + self.size() as i64 - 1
            )));
        }
        Ok(i as usize)
    }
}

/// `H_{Lambda}` built from the potential on the box.
pub fn hamiltonian(path: &PotentialPath, bx: Box) -> Result<TridiagonalHamiltonian> {
    let diag = path.sites(bx.left(), bx.right())?.to_vec();
    Ok(TridiagonalHamiltonian::new(diag, bx.left()))
}
