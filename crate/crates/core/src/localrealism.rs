//! Deterministic local strategies versus the quantum CHSH experiment.
//!
//! Correlators and counts are indexed by setting pair in the fixed order
//! `(a,b), (a,b′), (a′,b), (a′,b′)`, and joint outcome cells in the order
//! `(+,+), (+,−), (−,+), (−,−)`. The CHSH value is
//! `S = E(a,b) + E(a,b′) + E(a′,b) − E(a′,b′)`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::measurement::{correlator, measure, Direction, Outcome, RandomSource};
use crate::qmath::StateVector;
use crate::{Error, Result};

/// Points per full turn in the planar optimal-angle search.
pub const PLANAR_GRID: usize = 16;

const ALICE_SITE: usize = 0;
const BOB_SITE: usize = 1;

/// Predetermined `±1` answers for each party's two settings
/// (index 0 is `a`/`b`, index 1 is `a′`/`b′`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalStrategy {
    alice: [i8; 2],
    bob: [i8; 2],
}

impl LocalStrategy {
    pub fn new(alice: [i8; 2], bob: [i8; 2]) -> Result<Self> {
        if alice.iter().chain(&bob).any(|&v| v != 1 && v != -1) {
            return Err(Error::InvalidArgument(format!(
                "strategy outputs must be ±1, got {alice:?} {bob:?}"
            )));
        }
        Ok(Self { alice, bob })
    }

    /// All 16 deterministic strategies.
    pub fn all() -> impl Iterator<Item = Self> {
        (0u8..16).map(|bits| {
            let v = |k: u8| if bits >> k & 1 == 0 { 1 } else { -1 };
            Self {
                alice: [v(0), v(1)],
                bob: [v(2), v(3)],
            }
        })
    }

    pub fn alice(&self) -> [i8; 2] {
        self.alice
    }

    pub fn bob(&self) -> [i8; 2] {
        self.bob
    }

    pub fn with_bob_flipped(&self) -> Self {
        Self {
            alice: self.alice,
            bob: [-self.bob[0], -self.bob[1]],
        }
    }
}

/// CHSH value of a deterministic strategy, in exact integer arithmetic.
pub fn strategy_chsh(st: &LocalStrategy) -> i32 {
    let e = |i: usize, j: usize| i32::from(st.alice[i]) * i32::from(st.bob[j]);
    e(0, 0) + e(0, 1) + e(1, 0) - e(1, 1)
}

/// `max |S|` over every deterministic local strategy.
pub fn lhv_bound() -> i32 {
    LocalStrategy::all()
        .map(|s| strategy_chsh(&s).abs())
        .max()
        .expect("16 strategies")
}

/// Measurement directions `a, a′` for Alice (site 0) and `b, b′` for Bob
/// (site 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshSettings {
    pub a: Direction,
    pub a_prime: Direction,
    pub b: Direction,
    pub b_prime: Direction,
}

impl ChshSettings {
    pub fn new(a: Direction, a_prime: Direction, b: Direction, b_prime: Direction) -> Self {
        Self { a, a_prime, b, b_prime }
    }

    /// Settings from x–z plane angles (radians from +z towards +x).
    pub fn planar(a: f64, a_prime: f64, b: f64, b_prime: f64) -> Self {
        Self::new(
            Direction::planar(a),
            Direction::planar(a_prime),
            Direction::planar(b),
            Direction::planar(b_prime),
        )
    }

    pub fn alice(&self, i: usize) -> Direction {
        [self.a, self.a_prime][i]
    }

    pub fn bob(&self, j: usize) -> Direction {
        [self.b, self.b_prime][j]
    }

    /// Grid search over planar settings for the largest CHSH value on a
    /// two-system state. Angles run over `k·2π/PLANAR_GRID`; the first
    /// maximum in `(a, a′, b, b′)` lexicographic order wins.
    pub fn optimal_planar(s: &StateVector) -> Result<(Self, f64)> {
        check_two_systems(s)?;
        let angle = |k: usize| 2.0 * PI * k as f64 / PLANAR_GRID as f64;
        let mut table = [[0.0; PLANAR_GRID]; PLANAR_GRID];
        for (i, row) in table.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = correlator(
                    s,
                    ALICE_SITE,
                    Direction::planar(angle(i)),
                    BOB_SITE,
                    Direction::planar(angle(j)),
                )?;
            }
        }
        let mut best = (f64::NEG_INFINITY, [0usize; 4]);
        for a in 0..PLANAR_GRID {
            for ap in 0..PLANAR_GRID {
                for b in 0..PLANAR_GRID {
                    for bp in 0..PLANAR_GRID {
                        let v = table[a][b] + table[a][bp] + table[ap][b] - table[ap][bp];
                        if v > best.0 + 1e-12 {
                            best = (v, [a, ap, b, bp]);
                        }
                    }
                }
            }
        }
        let [a, ap, b, bp] = best.1;
        Ok((Self::planar(angle(a), angle(ap), angle(b), angle(bp)), best.0))
    }
}

fn check_two_systems(s: &StateVector) -> Result<()> {
    if s.num_systems() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: s.num_systems(),
        });
    }
    Ok(())
}

/// Exact CHSH value of a two-system state.
pub fn quantum_chsh_ideal(s: &StateVector, settings: &ChshSettings) -> Result<f64> {
    check_two_systems(s)?;
    let mut e = [0.0; 4];
    for (pair, slot) in e.iter_mut().enumerate() {
        *slot = correlator(
            s,
            ALICE_SITE,
            settings.alice(pair / 2),
            BOB_SITE,
            settings.bob(pair % 2),
        )?;
    }
    Ok(e[0] + e[1] + e[2] - e[3])
}

/// Which party measures first on the shared state in each trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasurementOrder {
    #[default]
    AliceFirst,
    BobFirst,
}

/// Sampled CHSH statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChshStats {
    /// `counts[pair][cell]`.
    pub counts: [[u64; 4]; 4],
    pub correlators: [f64; 4],
    pub s_value: f64,
    /// Binomial error of each correlator combined in quadrature.
    pub std_error: f64,
    pub n_trials: u64,
}

impl ChshStats {
    /// Derives correlators and errors from joint outcome counts.
    ///
    /// A setting pair with `N` trials has `E = (N₊₊ + N₋₋ − N₊₋ − N₋₊)/N`
    /// and variance `(1 − E²)/N`.
    pub fn from_counts(counts: [[u64; 4]; 4]) -> Result<Self> {
        let mut correlators = [0.0; 4];
        let mut variance = 0.0;
        for (pair, c) in counts.iter().enumerate() {
            let n: u64 = c.iter().sum();
            if n == 0 {
                return Err(Error::EmptySettingPair(pair));
            }
            let same = (c[0] + c[3]) as f64;
            let diff = (c[1] + c[2]) as f64;
            let e = (same - diff) / n as f64;
            correlators[pair] = e;
            variance += (1.0 - e * e) / n as f64;
        }
        Ok(Self {
            counts,
            correlators,
            s_value: correlators[0] + correlators[1] + correlators[2] - correlators[3],
            std_error: variance.sqrt(),
            n_trials: counts.iter().flatten().sum(),
        })
    }

    /// Frequency of Alice reading `+1` among trials where Bob used setting
    /// `bob_setting`, with its binomial standard error.
    pub fn alice_plus_given_bob(&self, bob_setting: usize) -> (f64, f64) {
        let pairs = [bob_setting, 2 + bob_setting];
        let plus: u64 = pairs.iter().map(|&p| self.counts[p][0] + self.counts[p][1]).sum();
        let total: u64 = pairs.iter().map(|&p| self.counts[p].iter().sum::<u64>()).sum();
        marginal(plus, total)
    }

    /// Frequency of Bob reading `+1` among trials where Alice used setting
    /// `alice_setting`.
    pub fn bob_plus_given_alice(&self, alice_setting: usize) -> (f64, f64) {
        let pairs = [2 * alice_setting, 2 * alice_setting + 1];
        let plus: u64 = pairs.iter().map(|&p| self.counts[p][0] + self.counts[p][2]).sum();
        let total: u64 = pairs.iter().map(|&p| self.counts[p].iter().sum::<u64>()).sum();
        marginal(plus, total)
    }
}

fn marginal(plus: u64, total: u64) -> (f64, f64) {
    if total == 0 {
        return (f64::NAN, f64::NAN);
    }
    let f = plus as f64 / total as f64;
    (f, crate::stats::binomial_std_error(f, total))
}

fn cell(alice: Outcome, bob: Outcome) -> usize {
    match (alice, bob) {
        (Outcome::Plus, Outcome::Plus) => 0,
        (Outcome::Plus, Outcome::Minus) => 1,
        (Outcome::Minus, Outcome::Plus) => 2,
        (Outcome::Minus, Outcome::Minus) => 3,
    }
}

/// One trial: both settings drawn from the choice stream, outcomes from a
/// separate stream. Returns `(pair, cell)`.
fn chsh_trial(
    s: &StateVector,
    settings: &ChshSettings,
    rng: &RandomSource,
    trial: u64,
    order: MeasurementOrder,
) -> Result<(usize, usize)> {
    let mut choice = rng.split(2 * trial);
    let mut outcomes = rng.split(2 * trial + 1);
    let i = choice.index(2);
    let j = choice.index(2);
    let (da, db) = (settings.alice(i), settings.bob(j));
    let (va, vb) = match order {
        MeasurementOrder::AliceFirst => {
            let ma = measure(s, ALICE_SITE, da, &mut outcomes)?;
            let mb = measure(&ma.post_state, BOB_SITE, db, &mut outcomes)?;
            (ma.value, mb.value)
        }
        MeasurementOrder::BobFirst => {
            let mb = measure(s, BOB_SITE, db, &mut outcomes)?;
            let ma = measure(&mb.post_state, ALICE_SITE, da, &mut outcomes)?;
            (ma.value, mb.value)
        }
    };
    Ok((2 * i + j, cell(va, vb)))
}

/// Sampled CHSH experiment with Alice measuring first.
pub fn run_chsh_trials(
    s: &StateVector,
    settings: &ChshSettings,
    n: u64,
    rng: &RandomSource,
) -> Result<ChshStats> {
    run_chsh_trials_ordered(s, settings, n, rng, MeasurementOrder::AliceFirst)
}

/// Sampled CHSH experiment.
///
/// Trial `t` draws from the child streams `2t` (settings) and `2t + 1`
/// (outcomes) of `rng`, so results do not depend on execution order.
pub fn run_chsh_trials_ordered(
    s: &StateVector,
    settings: &ChshSettings,
    n: u64,
    rng: &RandomSource,
    order: MeasurementOrder,
) -> Result<ChshStats> {
    check_trials(s, n)?;
    let mut counts = [[0u64; 4]; 4];
    for t in 0..n {
        let (pair, c) = chsh_trial(s, settings, rng, t, order)?;
        counts[pair][c] += 1;
    }
    ChshStats::from_counts(counts)
}

/// Same statistics as [`run_chsh_trials_ordered`], computed on `jobs`
/// worker threads. Results are bit-identical to the sequential runner.
pub fn run_chsh_trials_parallel(
    s: &StateVector,
    settings: &ChshSettings,
    n: u64,
    rng: &RandomSource,
    order: MeasurementOrder,
    jobs: usize,
) -> Result<ChshStats> {
    check_trials(s, n)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let counts = pool.install(|| {
        (0..n)
            .into_par_iter()
            .try_fold(
                || [[0u64; 4]; 4],
                |mut acc, t| {
                    let (pair, c) = chsh_trial(s, settings, rng, t, order)?;
                    acc[pair][c] += 1;
                    Ok::<_, Error>(acc)
                },
            )
            .try_reduce(
                || [[0u64; 4]; 4],
                |mut a, b| {
                    for (ra, rb) in a.iter_mut().zip(&b) {
                        for (x, y) in ra.iter_mut().zip(rb) {
                            *x += y;
                        }
                    }
                    Ok(a)
                },
            )
    })?;
    ChshStats::from_counts(counts)
}

fn check_trials(s: &StateVector, n: u64) -> Result<()> {
    check_two_systems(s)?;
    if n == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn epr() -> StateVector {
        StateVector::from_real(&[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn strategy_examples() {
        let all_plus = LocalStrategy::new([1, 1], [1, 1]).unwrap();
        assert_eq!(strategy_chsh(&all_plus), 2);
        let st = LocalStrategy::new([1, 1], [1, -1]).unwrap();
        assert_eq!(strategy_chsh(&st), 2);
        for st in LocalStrategy::all() {
            assert_eq!(strategy_chsh(&st.with_bob_flipped()), -strategy_chsh(&st));
        }
        assert!(LocalStrategy::new([0, 1], [1, 1]).is_err());
    }

    #[test]
    fn bound_is_two() {
        assert_eq!(LocalStrategy::all().count(), 16);
        assert_eq!(lhv_bound(), 2);
        assert!(LocalStrategy::all().all(|s| strategy_chsh(&s).abs() == 2));
    }

    #[test]
    fn degenerate_settings_cannot_violate() {
        let d = Direction::planar(0.7);
        let s = quantum_chsh_ideal(&epr(), &ChshSettings::new(d, d, d, d)).unwrap();
        let e = correlator(&epr(), 0, d, 1, d).unwrap();
        assert!((s - 2.0 * e).abs() < 1e-12);
        assert!(s.abs() <= 2.0 + 1e-12);
    }

    #[test]
    fn optimal_planar_reaches_two_root_two() {
        let (settings, s) = ChshSettings::optimal_planar(&epr()).unwrap();
        assert!((s - 2.0 * 2f64.sqrt()).abs() < 1e-9);
        let exact = quantum_chsh_ideal(&epr(), &settings).unwrap();
        assert!((exact - s).abs() < 1e-12);
    }

    #[test]
    fn from_counts_arithmetic() {
        let counts = [[10, 0, 0, 10], [5, 5, 5, 5], [0, 10, 10, 0], [0, 20, 0, 0]];
        let st = ChshStats::from_counts(counts).unwrap();
        assert_eq!(st.correlators, [1.0, 0.0, -1.0, -1.0]);
        assert_eq!(st.s_value, 1.0);
        assert!((st.std_error - (1.0f64 / 20.0).sqrt()).abs() < 1e-15);
        assert_eq!(st.n_trials, 80);
        let empty = [[1, 0, 0, 0], [0; 4], [1, 0, 0, 0], [1, 0, 0, 0]];
        assert_eq!(ChshStats::from_counts(empty), Err(Error::EmptySettingPair(1)));
    }

    #[test]
    fn parallel_matches_sequential() {
        let (settings, _) = ChshSettings::optimal_planar(&epr()).unwrap();
        let rng = RandomSource::new(99, 0);
        let seq = run_chsh_trials(&epr(), &settings, 2_000, &rng).unwrap();
        let par = run_chsh_trials_parallel(&epr(), &settings, 2_000, &rng, MeasurementOrder::AliceFirst, 4)
            .unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn rejects_wrong_inputs() {
        let rng = RandomSource::new(1, 0);
        let settings = ChshSettings::planar(0.0, 0.0, 0.0, 0.0);
        let one = StateVector::basis(1, 0).unwrap();
        assert!(matches!(
            run_chsh_trials(&one, &settings, 10, &rng),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(run_chsh_trials(&epr(), &settings, 0, &rng).is_err());
    }
}
