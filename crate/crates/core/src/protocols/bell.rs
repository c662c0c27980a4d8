use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::measurement::{RandomSource, PROBABILITY_SNAP};
use crate::qmath::{Operator, OperatorKind, StateVector, C64};
use crate::{Error, Result};

/// The four maximally entangled two-system states, in index order 0..3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [Self; 4] = [Self::PhiPlus, Self::PhiMinus, Self::PsiPlus, Self::PsiMinus];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    /// Amplitudes over `|00⟩, |01⟩, |10⟩, |11⟩`.
    fn amplitudes(self) -> [f64; 4] {
        let h = FRAC_1_SQRT_2;
        match self {
            Self::PhiPlus => [h, 0.0, 0.0, h],
            Self::PhiMinus => [h, 0.0, 0.0, -h],
            Self::PsiPlus => [0.0, h, h, 0.0],
            Self::PsiMinus => [0.0, h, -h, 0.0],
        }
    }

    pub fn state(self) -> StateVector {
        StateVector::from_real(&self.amplitudes()).expect("unit vector")
    }
}

/// `[Φ⁺, Φ⁻, Ψ⁺, Ψ⁻]`.
pub fn bell_basis() -> [StateVector; 4] {
    BellState::ALL.map(BellState::state)
}

/// `|B⟩⟨B|` as a two-system projector.
pub fn bell_projector(b: BellState) -> Operator {
    let v = b.amplitudes();
    let entries = (0..16)
        .map(|k| C64::new(v[k / 4] * v[k % 4], 0.0))
        .collect();
    Operator::new_unchecked(entries, OperatorKind::Projector)
}

/// Projects `sites` of `s` onto Bell state `index`, returning the branch
/// probability and the renormalized state. Fails with [`Error::ZeroNorm`]
/// on a probability-zero branch.
pub fn bell_projection(s: &StateVector, sites: (usize, usize), index: usize) -> Result<(f64, StateVector)> {
    let b = BellState::from_index(index)
        .ok_or_else(|| Error::InvalidArgument(format!("Bell index {index} out of range")))?;
    s.project(&bell_projector(b), &[sites.0, sites.1])
}

/// Samples a Bell-state measurement on `sites` with Born probabilities.
pub fn bell_state_measurement(
    s: &StateVector,
    sites: (usize, usize),
    rng: &mut RandomSource,
) -> Result<(usize, StateVector)> {
    let mut probs = [0.0; 4];
    for (k, p) in probs.iter_mut().enumerate() {
        let v = s.expectation(&bell_projector(BellState::ALL[k]), &[sites.0, sites.1])?.re;
        *p = if v <= PROBABILITY_SNAP { 0.0 } else { v };
    }
    let total: f64 = probs.iter().sum();
    if total <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    let certain = probs.iter().position(|&p| p >= total - PROBABILITY_SNAP);
    let index = match certain {
        Some(k) => k,
        None => {
            let u = rng.uniform() * total;
            let mut acc = 0.0;
            let mut pick = probs.iter().rposition(|&p| p > 0.0).expect("nonzero total");
            for (k, &p) in probs.iter().enumerate() {
                acc += p;
                if p > 0.0 && u < acc {
                    pick = k;
                    break;
                }
            }
            pick
        }
    };
    let (_, post) = bell_projection(s, sites, index)?;
    Ok((index, post))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::random_qubit;
    use crate::qmath::fidelity;

    #[test]
    fn basis_is_orthonormal_and_complete() {
        let basis = bell_basis();
        for i in 0..4 {
            for j in 0..4 {
                let f = fidelity(&basis[i], &basis[j]).unwrap();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((f - expect).abs() < 1e-12);
            }
        }
        let mut sum = bell_projector(BellState::PhiPlus);
        for b in &BellState::ALL[1..] {
            let p = bell_projector(*b);
            let entries = sum.entries().iter().zip(p.entries()).map(|(a, b)| a + b).collect();
            sum = Operator::new(entries, OperatorKind::General).unwrap();
        }
        assert!(sum.max_deviation(&Operator::identity(2)) < 1e-12);
        for b in BellState::ALL {
            assert!(Operator::new(bell_projector(b).entries().to_vec(), OperatorKind::Projector).is_ok());
        }
    }

    #[test]
    fn psi_plus_is_the_epr_state() {
        let epr = StateVector::from_real(&[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!((fidelity(&bell_basis()[2], &epr).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn outcomes_are_uniform_on_teleportation_input() {
        let mut rng = RandomSource::new(5, 0);
        for _ in 0..20 {
            let phi = random_qubit(&mut rng);
            let joint = phi.tensor(&BellState::PsiPlus.state()).unwrap();
            for k in 0..4 {
                let (p, _) = bell_projection(&joint, (0, 1), k).unwrap();
                assert!((p - 0.25).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn prepared_bell_state_is_certain() {
        let extra = StateVector::from_real(&[0.6, 0.8]).unwrap();
        let joint = BellState::PhiPlus.state().tensor(&extra).unwrap();
        let mut rng = RandomSource::new(8, 0);
        for _ in 0..50 {
            let (k, post) = bell_state_measurement(&joint, (0, 1), &mut rng).unwrap();
            assert_eq!(k, 0);
            assert!((fidelity(&post, &joint).unwrap() - 1.0).abs() < 1e-12);
        }
        assert_eq!(rng.draws(), 0);
        assert!(matches!(
            bell_projection(&joint, (0, 1), 2),
            Err(Error::ZeroNorm)
        ));
    }
}
