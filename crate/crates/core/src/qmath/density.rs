use serde::{Serialize, Serializer};

use super::{hermitian_eigenvalues, C64, ALGEBRAIC_TOL, MAX_SYSTEMS};
use crate::{Error, Result};

const EIGEN_FLOOR: f64 = -1e-10;

/// Mixed state of `k` two-level systems: Hermitian, unit trace, positive
/// semidefinite (eigenvalues ≥ −1e-10).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_systems: usize,
    entries: Vec<C64>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let d = self.dim();
        let rows: Vec<&[C64]> = self.entries.chunks(d).collect();
        rows.serialize(serializer)
    }
}

impl DensityMatrix {
    /// Validates and wraps row-major entries.
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim * dim != entries.len() || dim < 2 || !dim.is_power_of_two() {
            return Err(Error::BadLength(entries.len()));
        }
        let num_systems = dim.trailing_zeros() as usize;
        if num_systems > MAX_SYSTEMS {
            return Err(Error::TooManySystems(num_systems));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let rho = Self {
            num_systems,
            entries,
        };
        for r in 0..dim {
            for c in r..dim {
                if (rho.get(r, c) - rho.get(c, r).conj()).norm() > ALGEBRAIC_TOL {
                    return Err(Error::InvalidDensityMatrix(format!(
                        "not Hermitian at ({r}, {c})"
                    )));
                }
            }
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace is {tr}")));
        }
        if let Some(&min) = rho.eigenvalues().first() {
            if min < EIGEN_FLOOR {
                return Err(Error::InvalidDensityMatrix(format!(
                    "negative eigenvalue {min:e}"
                )));
            }
        }
        Ok(rho)
    }

    pub(crate) fn from_entries_unchecked(num_systems: usize, entries: Vec<C64>) -> Self {
        Self {
            num_systems,
            entries,
        }
    }

    /// `I / 2^k`.
    pub fn maximally_mixed(num_systems: usize) -> Self {
        let d = 1 << num_systems;
        let mut entries = vec![C64::new(0.0, 0.0); d * d];
        for i in 0..d {
            entries[i * d + i] = C64::new(1.0 / d as f64, 0.0);
        }
        Self {
            num_systems,
            entries,
        }
    }

    /// Convex combination `Σ wᵢ ρᵢ`. Weights must be non-negative and sum to 1.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            return Err(Error::InvalidArgument("empty mixture".into()));
        };
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(Error::InvalidArgument(format!(
                "mixture weights must be a probability vector (sum {total})"
            )));
        }
        let mut entries = vec![C64::new(0.0, 0.0); first.entries.len()];
        for (w, rho) in parts {
            if rho.num_systems != first.num_systems {
                return Err(Error::DimensionMismatch {
                    expected: first.num_systems,
                    found: rho.num_systems,
                });
            }
            for (acc, z) in entries.iter_mut().zip(&rho.entries) {
                *acc += z * *w;
            }
        }
        Ok(Self {
            num_systems: first.num_systems,
            entries,
        })
    }

    pub fn num_systems(&self) -> usize {
        self.num_systems
    }

    pub fn dim(&self) -> usize {
        1 << self.num_systems
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim() + col]
    }

    pub fn trace(&self) -> f64 {
        let d = self.dim();
        (0..d).map(|i| self.entries[i * d + i].re).sum()
    }

    /// `Tr ρ²`; 1 for pure states, `2^-k` for the maximally mixed state.
    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ |ρ_rc|² for Hermitian ρ
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.entries, self.dim())
    }

    pub fn max_deviation(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `½ Σ |λᵢ(self − other)|`.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        if self.num_systems != other.num_systems {
            return Err(Error::DimensionMismatch {
                expected: self.num_systems,
                found: other.num_systems,
            });
        }
        let diff: Vec<C64> = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        let sum: f64 = hermitian_eigenvalues(&diff, self.dim())
            .iter()
            .map(|l| l.abs())
            .sum();
        Ok((0.5 * sum).clamp(0.0, 1.0))
    }
}

/// `½ Σ |λᵢ(r − s)|`.
pub fn trace_distance(r: &DensityMatrix, s: &DensityMatrix) -> Result<f64> {
    r.trace_distance(s)
}
