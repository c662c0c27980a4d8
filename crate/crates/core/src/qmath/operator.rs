use std::fmt;

use serde::{Deserialize, Serialize};

use super::{C64, ALGEBRAIC_TOL, MAX_SYSTEMS};
use crate::{Error, Result};

/// Declared structure of an [`Operator`], checked on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Unitary,
    Hermitian,
    Projector,
    General,
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Unitary => "unitary",
            Self::Hermitian => "hermitian",
            Self::Projector => "projector",
            Self::General => "general",
        })
    }
}

/// A dense `2^k × 2^k` complex matrix acting on `k` two-level systems.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    num_systems: usize,
    entries: Vec<C64>,
    kind: OperatorKind,
}

impl Operator {
    /// Builds an operator from row-major entries, validating the declared kind
    /// to within `1e-12` entrywise.
    pub fn new(entries: Vec<C64>, kind: OperatorKind) -> Result<Self> {
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
        let op = Self {
            num_systems,
            entries,
            kind,
        };
        op.validate()?;
        Ok(op)
    }

    pub(crate) fn new_unchecked(entries: Vec<C64>, kind: OperatorKind) -> Self {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        Self {
            num_systems: dim.trailing_zeros() as usize,
            entries,
            kind,
        }
    }

    fn validate(&self) -> Result<()> {
        let fail = |reason: String| {
            Err(Error::InvalidOperator {
                kind: match self.kind {
                    OperatorKind::Unitary => "unitary",
                    OperatorKind::Hermitian => "hermitian",
                    OperatorKind::Projector => "projector",
                    OperatorKind::General => "general",
                },
                reason,
            })
        };
        match self.kind {
            OperatorKind::General => Ok(()),
            OperatorKind::Hermitian => {
                let dev = self.max_deviation(&self.adjoint());
                if dev > ALGEBRAIC_TOL {
                    return fail(format!("differs from its adjoint by {dev:e}"));
                }
                Ok(())
            }
            OperatorKind::Unitary => {
                let dev = self
                    .adjoint()
                    .matmul(self)
                    .max_deviation(&Self::identity(self.num_systems));
                if dev > ALGEBRAIC_TOL {
                    return fail(format!("U†U differs from identity by {dev:e}"));
                }
                Ok(())
            }
            OperatorKind::Projector => {
                let herm = self.max_deviation(&self.adjoint());
                let idem = self.matmul(self).max_deviation(self);
                if herm > ALGEBRAIC_TOL || idem > ALGEBRAIC_TOL {
                    return fail(format!("P = P† off by {herm:e}, P² = P off by {idem:e}"));
                }
                Ok(())
            }
        }
    }

    pub fn identity(num_systems: usize) -> Self {
        let dim = 1 << num_systems;
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = C64::new(1.0, 0.0);
        }
        Self {
            num_systems,
            entries,
            kind: OperatorKind::Unitary,
        }
    }

    pub fn pauli_x() -> Self {
        Self::from_2x2([[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 0.0]], OperatorKind::Unitary)
    }

    pub fn pauli_y() -> Self {
        Self::from_2x2([[0.0, 0.0], [0.0, -1.0], [0.0, 1.0], [0.0, 0.0]], OperatorKind::Unitary)
    }

    pub fn pauli_z() -> Self {
        Self::from_2x2([[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [-1.0, 0.0]], OperatorKind::Unitary)
    }

    fn from_2x2(e: [[f64; 2]; 4], kind: OperatorKind) -> Self {
        Self {
            num_systems: 1,
            entries: e.iter().map(|&[re, im]| C64::new(re, im)).collect(),
            kind,
        }
    }

    pub fn num_systems(&self) -> usize {
        self.num_systems
    }

    pub fn dim(&self) -> usize {
        1 << self.num_systems
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim() + col]
    }

    /// Re-tags the operator, validating the new kind.
    pub fn with_kind(mut self, kind: OperatorKind) -> Result<Self> {
        self.kind = kind;
        self.validate()?;
        Ok(self)
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim();
        let mut entries = vec![C64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for c in 0..d {
                entries[c * d + r] = self.entries[r * d + c].conj();
            }
        }
        Self {
            num_systems: self.num_systems,
            entries,
            kind: self.kind,
        }
    }

    /// Matrix product `self · rhs`. The result is tagged `General`.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        let d = self.dim();
        let mut entries = vec![C64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.entries[r * d + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..d {
                    entries[r * d + c] += a * rhs.entries[k * d + c];
                }
            }
        }
        Self {
            num_systems: self.num_systems,
            entries,
            kind: OperatorKind::General,
        }
    }

    /// Kronecker product with `self` on the more significant systems.
    /// Unitary ⊗ unitary stays unitary, hermitian ⊗ hermitian stays hermitian.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (da, db) = (self.dim(), rhs.dim());
        let d = da * db;
        let mut entries = vec![C64::new(0.0, 0.0); d * d];
        for ra in 0..da {
            for ca in 0..da {
                let a = self.entries[ra * da + ca];
                for rb in 0..db {
                    for cb in 0..db {
                        entries[(ra * db + rb) * d + ca * db + cb] = a * rhs.entries[rb * db + cb];
                    }
                }
            }
        }
        let kind = match (self.kind, rhs.kind) {
            (a, b) if a == b => a,
            _ => OperatorKind::General,
        };
        Self {
            num_systems: self.num_systems + rhs.num_systems,
            entries,
            kind,
        }
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C64 {
        let d = self.dim();
        (0..d).map(|i| self.entries[i * d + i]).sum()
    }
}
