use serde::{Deserialize, Serialize};

use super::bell::{bell_projection, bell_state_measurement, BellState};
use crate::measurement::RandomSource;
use crate::qmath::{DensityMatrix, Operator, StateVector, C64};
use crate::{Error, Result};

/// Resource pair shared between Alice (site 1) and Bob (site 2).
pub const RESOURCE_STATE: BellState = BellState::PsiMinus;

const ALICE_SITES: (usize, usize) = (0, 1);
const BOB_SITE: usize = 2;

/// Bob's conditional operation, defined up to global phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Correction {
    #[serde(rename = "identity")]
    Identity,
    X,
    Z,
    /// The product `X·Z` (Z applied first).
    XZ,
}

impl Correction {
    /// Outcome→correction table for the Ψ⁻ resource. With input
    /// `α|0⟩ + β|1⟩`, Bob holds (up to phase) `α|1⟩ − β|0⟩` after Φ⁺,
    /// `α|1⟩ + β|0⟩` after Φ⁻, `−α|0⟩ + β|1⟩` after Ψ⁺ and the input itself
    /// after Ψ⁻.
    pub fn for_outcome(outcome: BellState) -> Self {
        match outcome {
            BellState::PsiMinus => Self::Identity,
            BellState::PsiPlus => Self::Z,
            BellState::PhiMinus => Self::X,
            BellState::PhiPlus => Self::XZ,
        }
    }

    pub fn operator(self) -> Operator {
        match self {
            Self::Identity => Operator::identity(1),
            Self::X => Operator::pauli_x(),
            Self::Z => Operator::pauli_z(),
            Self::XZ => Operator::pauli_x()
                .matmul(&Operator::pauli_z())
                .with_kind(crate::OperatorKind::Unitary)
                .expect("XZ is unitary"),
        }
    }
}

/// How Bob picks his correction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrectionPolicy {
    /// Use the table entry for Alice's reported outcome.
    FromMessage,
    /// Ignore the classical message.
    Fixed(Correction),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TeleportTranscript {
    pub input_state: StateVector,
    pub bsm_outcome: usize,
    pub correction: Correction,
    pub bob_state: StateVector,
    pub fidelity_achieved: f64,
    /// Bob's reduced state after Alice's measurement but before he learns
    /// its outcome: the outcome-weighted mixture of his conditional states.
    pub bob_premessage_reduced: DensityMatrix,
}

fn joint_state(input: &StateVector) -> Result<StateVector> {
    if input.num_systems() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: input.num_systems(),
        });
    }
    input.tensor(&RESOURCE_STATE.state())
}

/// `Σ_k p_k ρ_B^(k)` over all Bell outcomes with nonzero probability.
fn premessage_marginal(joint: &StateVector) -> Result<DensityMatrix> {
    let mut parts = Vec::with_capacity(4);
    for k in 0..4 {
        match bell_projection(joint, ALICE_SITES, k) {
            Ok((p, post)) => parts.push((p, post.partial_trace(&[BOB_SITE])?)),
            Err(Error::ZeroNorm) => {}
            Err(e) => return Err(e),
        }
    }
    let total: f64 = parts.iter().map(|(p, _)| p).sum();
    let weighted: Vec<(f64, &DensityMatrix)> = parts.iter().map(|(p, r)| (p / total, r)).collect();
    DensityMatrix::mixture(&weighted)
}

/// Bob's single-system state `(⟨B_k|_{01} ⊗ I)|ψ⟩` once sites 0, 1 are
/// known to be in Bell state `k`.
fn bob_factor(collapsed: &StateVector, outcome: BellState) -> Result<StateVector> {
    let bell = outcome.state();
    let mut bob = vec![C64::new(0.0, 0.0); 2];
    for (ab, coeff) in bell.amplitudes().iter().enumerate() {
        for (x, slot) in bob.iter_mut().enumerate() {
            *slot += coeff.conj() * collapsed.amplitude(ab << 1 | x);
        }
    }
    StateVector::new(bob)
}

fn finish(
    input: &StateVector,
    joint: &StateVector,
    outcome: usize,
    collapsed: StateVector,
    policy: CorrectionPolicy,
) -> Result<TeleportTranscript> {
    let bob_premessage_reduced = premessage_marginal(joint)?;
    let bell = BellState::from_index(outcome).expect("valid Bell index");
    let correction = match policy {
        CorrectionPolicy::FromMessage => Correction::for_outcome(bell),
        CorrectionPolicy::Fixed(c) => c,
    };
    let corrected = collapsed.apply(&correction.operator(), &[BOB_SITE])?;
    let bob_state = bob_factor(&corrected, bell)?;
    let fidelity_achieved = input.fidelity(&bob_state)?;
    Ok(TeleportTranscript {
        input_state: input.clone(),
        bsm_outcome: outcome,
        correction,
        bob_state,
        fidelity_achieved,
        bob_premessage_reduced,
    })
}

/// Teleports a single-system state through a Ψ⁻ pair.
pub fn teleport(input: &StateVector, rng: &mut RandomSource) -> Result<TeleportTranscript> {
    teleport_with(input, rng, CorrectionPolicy::FromMessage)
}

pub fn teleport_with(
    input: &StateVector,
    rng: &mut RandomSource,
    policy: CorrectionPolicy,
) -> Result<TeleportTranscript> {
    let joint = joint_state(input)?;
    let (outcome, collapsed) = bell_state_measurement(&joint, ALICE_SITES, rng)?;
    finish(input, &joint, outcome, collapsed, policy)
}

/// Runs the protocol with Alice's outcome forced to `outcome` (projection
/// instead of sampling).
pub fn teleport_branch(input: &StateVector, outcome: usize) -> Result<TeleportTranscript> {
    let joint = joint_state(input)?;
    let (_, collapsed) = bell_projection(&joint, ALICE_SITES, outcome)?;
    finish(input, &joint, outcome, collapsed, CorrectionPolicy::FromMessage)
}

/// Trace distance between Bob's pre-message state and `I/2`.
pub fn nosignaling_audit(t: &TeleportTranscript) -> f64 {
    t.bob_premessage_reduced
        .trace_distance(&DensityMatrix::maximally_mixed(1))
        .expect("single-system states")
}
