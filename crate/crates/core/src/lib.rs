//! Desk-scale quantum information simulation.
//!
//! The crate is organised bottom-up:
//!
//! * [`qmath`] holds exact small-dimension linear algebra (states, operators,
//!   reduced density matrices, fidelity and trace distance).
//! * [`measurement`] prepares spin states along arbitrary directions and
//!   samples projective measurements with collapse.
//! * [`infoprinciple`] turns sets of one-bit Pauli propositions into the
//!   unique state they specify.
//! * [`localrealism`] contrasts deterministic local strategies with the
//!   quantum CHSH experiment.
//! * [`protocols`] implements teleportation, entanglement-based key
//!   distribution and measurement-based random bits.
//! * [`stats`] provides the statistical tests used to audit sampled output.

pub mod error;
pub mod infoprinciple;
pub mod localrealism;
pub mod measurement;
pub mod protocols;
pub mod qmath;
pub mod stats;

pub use error::{Error, Result};
pub use infoprinciple::{Pauli, Proposition, PropositionSet};
pub use localrealism::{ChshSettings, ChshStats, LocalStrategy};
pub use measurement::{Direction, MeasurementOutcome, Outcome, RandomSource};
pub use protocols::{Channel, QkdSession, TeleportTranscript};
pub use qmath::{DensityMatrix, Operator, OperatorKind, StateVector, C64};
