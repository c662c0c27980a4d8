use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::bell::BellState;
use crate::localrealism::ChshStats;
use crate::measurement::{measure, Direction, Outcome, RandomSource};
use crate::stats::binomial_std_error;
use crate::{Error, Result};

/// Smallest accepted session size.
pub const MIN_PAIRS: u64 = 100;

/// Alice's x–z plane measurement angles.
pub const ALICE_MENU: [f64; 3] = [-PI / 8.0, PI / 8.0, 3.0 * PI / 8.0];
/// Bob's x–z plane measurement angles.
pub const BOB_MENU: [f64; 3] = [PI / 8.0, 3.0 * PI / 8.0, 5.0 * PI / 8.0];

/// `(alice index, bob index)` pairs with a shared direction; these rounds
/// are sifted into the key.
pub const KEY_PAIRS: [(usize, usize); 2] = [(1, 0), (2, 1)];

/// `(alice, bob)` index pairs for the CHSH estimate, in the order
/// `(a,b), (a,b′), (a′,b), (a′,b′)` with `a = 3π/8, a′ = −π/8, b = π/8,
/// b′ = 5π/8`.
pub const TEST_PAIRS: [(usize, usize); 4] = [(2, 0), (2, 2), (0, 0), (0, 2)];

/// What happens to the pair between the source and the parties.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Channel {
    Ideal,
    /// An eavesdropper measures Alice's particle along `direction` and the
    /// collapsed state travels on.
    InterceptResend { direction: Direction },
}

/// Full record of an E91 session.
///
/// Bob's outcomes are stored as measured. The singlet source makes matched
/// settings anti-correlated, so Bob's sign is flipped both when sifting and
/// when estimating correlators.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QkdSession {
    pub n_pairs: u64,
    pub channel: Channel,
    pub alice_settings: Vec<u8>,
    pub bob_settings: Vec<u8>,
    pub outcomes: Vec<(Outcome, Outcome)>,
    /// Indices of rounds sifted into the key.
    pub key_rounds: Vec<usize>,
    pub sifted_key_alice: Vec<bool>,
    pub sifted_key_bob: Vec<bool>,
    /// Joint outcome counts (Bob flipped) per test pair.
    pub test_counts: [[u64; 4]; 4],
    pub correlators: [f64; 4],
    pub s_estimate: f64,
    pub s_std_error: f64,
    pub qber: f64,
    pub qber_std_error: f64,
}

impl QkdSession {
    pub fn key_length(&self) -> usize {
        self.sifted_key_alice.len()
    }

    pub fn test_rounds(&self) -> u64 {
        self.test_counts.iter().flatten().sum()
    }
}

fn cell(alice: Outcome, bob_flipped: Outcome) -> usize {
    match (alice, bob_flipped) {
        (Outcome::Plus, Outcome::Plus) => 0,
        (Outcome::Plus, Outcome::Minus) => 1,
        (Outcome::Minus, Outcome::Plus) => 2,
        (Outcome::Minus, Outcome::Minus) => 3,
    }
}

/// Runs an E91 session over `n_pairs` singlet pairs.
///
/// Round `r` uses child streams `3r` (setting choices), `3r + 1`
/// (eavesdropper) and `3r + 2` (the parties' outcomes) of `rng`.
pub fn e91_run(n_pairs: u64, channel: Channel, rng: &RandomSource) -> Result<QkdSession> {
    if n_pairs < MIN_PAIRS {
        return Err(Error::InsufficientRounds(format!(
            "{n_pairs} pairs requested, at least {MIN_PAIRS} required"
        )));
    }
    let alice_dirs = ALICE_MENU.map(Direction::planar);
    let bob_dirs = BOB_MENU.map(Direction::planar);
    let source = BellState::PsiMinus.state();

    let n = n_pairs as usize;
    let mut alice_settings = Vec::with_capacity(n);
    let mut bob_settings = Vec::with_capacity(n);
    let mut outcomes = Vec::with_capacity(n);
    let mut key_rounds = Vec::new();
    let mut sifted_key_alice = Vec::new();
    let mut sifted_key_bob = Vec::new();
    let mut test_counts = [[0u64; 4]; 4];

    for r in 0..n_pairs {
        let mut choice = rng.split(3 * r);
        let mut eve = rng.split(3 * r + 1);
        let mut parties = rng.split(3 * r + 2);
        let i = choice.index(3);
        let j = choice.index(3);

        let state = match channel {
            Channel::Ideal => source.clone(),
            Channel::InterceptResend { direction } => {
                measure(&source, 0, direction, &mut eve)?.post_state
            }
        };
        let ma = measure(&state, 0, alice_dirs[i], &mut parties)?;
        let mb = measure(&ma.post_state, 1, bob_dirs[j], &mut parties)?;
        let (va, vb) = (ma.value, mb.value);

        alice_settings.push(i as u8);
        bob_settings.push(j as u8);
        outcomes.push((va, vb));

        if KEY_PAIRS.contains(&(i, j)) {
            key_rounds.push(r as usize);
            sifted_key_alice.push(va.bit());
            sifted_key_bob.push(vb.flipped().bit());
        } else if let Some(pair) = TEST_PAIRS.iter().position(|&p| p == (i, j)) {
            test_counts[pair][cell(va, vb.flipped())] += 1;
        }
    }

    if sifted_key_alice.is_empty() {
        return Err(Error::InsufficientRounds("no key rounds".into()));
    }
    let chsh = ChshStats::from_counts(test_counts).map_err(|e| match e {
        Error::EmptySettingPair(p) => {
            Error::InsufficientRounds(format!("test setting pair {p} received no rounds"))
        }
        other => other,
    })?;
    let mismatches = sifted_key_alice
        .iter()
        .zip(&sifted_key_bob)
        .filter(|(a, b)| a != b)
        .count();
    let key_len = sifted_key_alice.len() as u64;
    let qber = mismatches as f64 / key_len as f64;

    Ok(QkdSession {
        n_pairs,
        channel,
        alice_settings,
        bob_settings,
        outcomes,
        key_rounds,
        sifted_key_alice,
        sifted_key_bob,
        test_counts,
        correlators: chsh.correlators,
        s_estimate: chsh.s_value,
        s_std_error: chsh.std_error,
        qber,
        qber_std_error: binomial_std_error(qber, key_len),
    })
}
