//! Protocol layer: Bell-state measurement, teleportation with its
//! no-signaling audit, entanglement-based key distribution with a CHSH
//! eavesdropping check, and measurement-based random bits.

mod bell;
mod qkd;
mod qrng;
mod record;
mod teleport;

pub use bell::{bell_basis, bell_projection, bell_projector, bell_state_measurement, BellState};
pub use qkd::{e91_run, Channel, QkdSession, ALICE_MENU, BOB_MENU, KEY_PAIRS, MIN_PAIRS, TEST_PAIRS};
pub use qrng::qrng_bits;
pub use record::{transcript_line, TranscriptRecord};
pub use teleport::{
    nosignaling_audit, teleport, teleport_branch, teleport_with, Correction, CorrectionPolicy,
    TeleportTranscript, RESOURCE_STATE,
};
