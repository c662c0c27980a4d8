use serde::{Deserialize, Serialize};

use super::{
    check_sites, scatter, site_mask, DensityMatrix, Operator, OperatorKind, C64, CHAINED_TOL,
    MAX_SYSTEMS, ZERO_NORM_SQR,
};
use crate::{Error, Result};

/// Normalized pure state of `n` two-level systems.
///
/// Amplitudes are indexed by basis label with site 0 as the most significant
/// bit. Every constructor normalizes, so `Σ|a|² = 1` holds to `1e-12`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<C64>", into = "Vec<C64>")]
pub struct StateVector {
    num_systems: usize,
    amplitudes: Vec<C64>,
}

impl TryFrom<Vec<C64>> for StateVector {
    type Error = Error;

    fn try_from(raw: Vec<C64>) -> Result<Self> {
        Self::new(raw)
    }
}

impl From<StateVector> for Vec<C64> {
    fn from(s: StateVector) -> Self {
        s.amplitudes
    }
}

impl StateVector {
    /// Normalizes `raw` into a state. The length must be a power of two
    /// between 2 and `2^MAX_SYSTEMS`.
    pub fn new(raw: Vec<C64>) -> Result<Self> {
        let len = raw.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::BadLength(len));
        }
        let num_systems = len.trailing_zeros() as usize;
        if num_systems > MAX_SYSTEMS {
            return Err(Error::TooManySystems(num_systems));
        }
        if raw.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Self::normalized(num_systems, raw)
    }

    /// Real-amplitude convenience wrapper around [`StateVector::new`].
    pub fn from_real(raw: &[f64]) -> Result<Self> {
        Self::new(raw.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub(crate) fn normalized(num_systems: usize, mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if norm_sqr < ZERO_NORM_SQR {
            return Err(Error::ZeroNorm);
        }
        // already-normalized input is kept bit-for-bit
        if (norm_sqr - 1.0).abs() > 8.0 * f64::EPSILON {
            let scale = 1.0 / norm_sqr.sqrt();
            amplitudes.iter_mut().for_each(|z| *z *= scale);
        }
        Ok(Self {
            num_systems,
            amplitudes,
        })
    }

    /// Computational basis state `|index⟩` of `num_systems` systems.
    pub fn basis(num_systems: usize, index: usize) -> Result<Self> {
        if num_systems == 0 {
            return Err(Error::BadLength(1));
        }
        if num_systems > MAX_SYSTEMS {
            return Err(Error::TooManySystems(num_systems));
        }
        let dim = 1 << num_systems;
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self {
            num_systems,
            amplitudes,
        })
    }

    /// `|0…0⟩`.
    pub fn zeros(num_systems: usize) -> Result<Self> {
        Self::basis(num_systems, 0)
    }

    pub fn num_systems(&self) -> usize {
        self.num_systems
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Multiplies by `e^{iφ}`.
    pub fn with_global_phase(&self, phase: f64) -> Self {
        let f = C64::from_polar(1.0, phase);
        Self {
            num_systems: self.num_systems,
            amplitudes: self.amplitudes.iter().map(|z| z * f).collect(),
        }
    }

    /// `self ⊗ other`, with `self` on the leading sites.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let num_systems = self.num_systems + other.num_systems;
        if num_systems > MAX_SYSTEMS {
            return Err(Error::TooManySystems(num_systems));
        }
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ok(Self {
            num_systems,
            amplitudes,
        })
    }

    /// `⟨self|other⟩`, conjugating `self`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check_same_size(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`, clamped into `[0, 1]`.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr().clamp(0.0, 1.0))
    }

    fn check_same_size(&self, other: &Self) -> Result<()> {
        if self.num_systems != other.num_systems {
            return Err(Error::DimensionMismatch {
                expected: self.num_systems,
                found: other.num_systems,
            });
        }
        Ok(())
    }

    fn check_operator(&self, op: &Operator, sites: &[usize]) -> Result<()> {
        check_sites(sites, self.num_systems)?;
        if op.num_systems() != sites.len() {
            return Err(Error::DimensionMismatch {
                expected: sites.len(),
                found: op.num_systems(),
            });
        }
        Ok(())
    }

    /// Applies `op` to `sites` (identity elsewhere).
    ///
    /// Projectors renormalize the result and report [`Error::ZeroNorm`] when
    /// they annihilate the state. Other kinds must preserve the norm to
    /// `1e-10`, otherwise [`Error::NonNormalizing`] is returned; use
    /// [`StateVector::expectation`] for observables.
    pub fn apply(&self, op: &Operator, sites: &[usize]) -> Result<Self> {
        self.check_operator(op, sites)?;
        let out = apply_raw(&self.amplitudes, self.num_systems, op, sites);
        match op.kind() {
            OperatorKind::Projector => Self::normalized(self.num_systems, out),
            _ => {
                let norm_sqr: f64 = out.iter().map(|z| z.norm_sqr()).sum();
                if (norm_sqr - 1.0).abs() > CHAINED_TOL {
                    return Err(Error::NonNormalizing(norm_sqr));
                }
                Self::normalized(self.num_systems, out)
            }
        }
    }

    /// Applies a projector and returns the collapsed state together with the
    /// Born probability `‖P s‖²` of the branch.
    pub fn project(&self, projector: &Operator, sites: &[usize]) -> Result<(f64, Self)> {
        if projector.kind() != OperatorKind::Projector {
            return Err(Error::InvalidOperator {
                kind: "projector",
                reason: format!("operator is tagged {}", projector.kind()),
            });
        }
        self.check_operator(projector, sites)?;
        let out = apply_raw(&self.amplitudes, self.num_systems, projector, sites);
        let p: f64 = out.iter().map(|z| z.norm_sqr()).sum();
        Ok((p, Self::normalized(self.num_systems, out)?))
    }

    /// `⟨s|op|s⟩` with `op` on `sites`.
    pub fn expectation(&self, op: &Operator, sites: &[usize]) -> Result<C64> {
        self.check_operator(op, sites)?;
        let out = apply_raw(&self.amplitudes, self.num_systems, op, sites);
        Ok(self
            .amplitudes
            .iter()
            .zip(&out)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Reduced density matrix on `keep` (in the given order; the first kept
    /// site is the most significant).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        check_sites(keep, self.num_systems)?;
        let n = self.num_systems;
        let keep_masks: Vec<usize> = keep.iter().map(|&s| site_mask(n, s)).collect();
        let env_masks: Vec<usize> = (0..n)
            .filter(|s| !keep.contains(s))
            .map(|s| site_mask(n, s))
            .collect();
        let kd = 1 << keep.len();
        let ed = 1 << env_masks.len();
        let keep_idx: Vec<usize> = (0..kd).map(|r| scatter(r, &keep_masks)).collect();
        let env_idx: Vec<usize> = (0..ed).map(|e| scatter(e, &env_masks)).collect();
        let mut rho = vec![C64::new(0.0, 0.0); kd * kd];
        for r in 0..kd {
            for c in r..kd {
                let v: C64 = env_idx
                    .iter()
                    .map(|&e| {
                        self.amplitudes[keep_idx[r] | e] * self.amplitudes[keep_idx[c] | e].conj()
                    })
                    .sum();
                rho[r * kd + c] = v;
                rho[c * kd + r] = v.conj();
            }
        }
        Ok(DensityMatrix::from_entries_unchecked(keep.len(), rho))
    }

    /// `|s⟩⟨s|`.
    pub fn density_matrix(&self) -> DensityMatrix {
        let d = self.dim();
        let mut rho = vec![C64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for c in 0..d {
                rho[r * d + c] = self.amplitudes[r] * self.amplitudes[c].conj();
            }
        }
        DensityMatrix::from_entries_unchecked(self.num_systems, rho)
    }
}

/// `(op on sites ⊗ identity)·amps` without normalization or validation.
pub(crate) fn apply_raw(amps: &[C64], num_systems: usize, op: &Operator, sites: &[usize]) -> Vec<C64> {
    let masks: Vec<usize> = sites.iter().map(|&s| site_mask(num_systems, s)).collect();
    let target: usize = masks.iter().fold(0, |acc, m| acc | m);
    let sub = 1 << sites.len();
    let offsets: Vec<usize> = (0..sub).map(|r| scatter(r, &masks)).collect();
    let entries = op.entries();
    let mut out = vec![C64::new(0.0, 0.0); amps.len()];
    for base in (0..amps.len()).filter(|b| b & target == 0) {
        for r in 0..sub {
            let row = &entries[r * sub..(r + 1) * sub];
            out[base | offsets[r]] = row
                .iter()
                .zip(&offsets)
                .map(|(m, &off)| m * amps[base | off])
                .sum();
        }
    }
    out
}

/// `a ⊗ b`.
pub fn tensor_product(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    a.tensor(b)
}

/// `⟨a|b⟩`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<C64> {
    a.inner(b)
}

/// `|⟨a|b⟩|²`; equals 1 exactly when the states agree up to global phase.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    a.fidelity(b)
}
