//! Spin-direction preparation, Born-rule probabilities and projective
//! measurement with collapse.
//!
//! Quantum randomness is stood in for by a seeded ChaCha stream
//! ([`RandomSource`]); every sampled outcome is reproducible from
//! `(seed, stream_id, draw index)`.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::qmath::{Operator, OperatorKind, StateVector, C64};
use crate::{Error, Result};

/// Born probabilities within this distance of 0 or 1 are treated as exact
/// and bypass the random draw.
pub const PROBABILITY_SNAP: f64 = 1e-14;

/// Measurement axis on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    polar: f64,
    azimuth: f64,
}

impl Direction {
    /// `polar ∈ [0, π]`, `azimuth ∈ [0, 2π)`.
    pub fn new(polar: f64, azimuth: f64) -> Result<Self> {
        if !(polar.is_finite() && azimuth.is_finite())
            || !(0.0..=PI).contains(&polar)
            || !(0.0..TAU).contains(&azimuth)
        {
            return Err(Error::BadDirection { polar, azimuth });
        }
        Ok(Self { polar, azimuth })
    }

    pub fn from_degrees(polar: f64, azimuth: f64) -> Result<Self> {
        Self::new(polar.to_radians(), azimuth.to_radians())
    }

    pub fn z() -> Self {
        Self { polar: 0.0, azimuth: 0.0 }
    }

    pub fn x() -> Self {
        Self { polar: PI / 2.0, azimuth: 0.0 }
    }

    pub fn y() -> Self {
        Self { polar: PI / 2.0, azimuth: PI / 2.0 }
    }

    /// Direction at `angle` from +z towards +x in the x–z plane. Any real
    /// angle is accepted and wrapped.
    pub fn planar(angle: f64) -> Self {
        let a = angle.rem_euclid(TAU);
        if a <= PI {
            Self { polar: a, azimuth: 0.0 }
        } else {
            Self { polar: TAU - a, azimuth: PI }
        }
    }

    /// Direction of a nonzero Bloch vector.
    pub fn from_bloch(v: [f64; 3]) -> Result<Self> {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !norm.is_finite() || norm < 1e-12 {
            return Err(Error::InvalidArgument(format!("degenerate Bloch vector {v:?}")));
        }
        let polar = (v[2] / norm).clamp(-1.0, 1.0).acos();
        let azimuth = if v[0] == 0.0 && v[1] == 0.0 {
            0.0
        } else {
            v[1].atan2(v[0]).rem_euclid(TAU)
        };
        // rem_euclid can return TAU for tiny negative inputs
        let azimuth = if azimuth >= TAU { 0.0 } else { azimuth };
        Self::new(polar, azimuth)
    }

    pub fn polar(&self) -> f64 {
        self.polar
    }

    pub fn azimuth(&self) -> f64 {
        self.azimuth
    }

    /// Unit Bloch vector `(sin θ cos φ, sin θ sin φ, cos θ)`.
    pub fn bloch(&self) -> [f64; 3] {
        let (st, ct) = self.polar.sin_cos();
        let (sp, cp) = self.azimuth.sin_cos();
        [st * cp, st * sp, ct]
    }

    pub fn opposite(&self) -> Self {
        let [x, y, z] = self.bloch();
        Self::from_bloch([-x, -y, -z]).expect("unit vector")
    }

    pub fn dot(&self, other: &Self) -> f64 {
        let (a, b) = (self.bloch(), other.bloch());
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }
}

/// A dichotomic measurement result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Outcome {
    pub fn value(self) -> i8 {
        match self {
            Self::Plus => 1,
            Self::Minus => -1,
        }
    }

    pub fn sign(self) -> f64 {
        f64::from(self.value())
    }

    pub fn flipped(self) -> Self {
        match self {
            Self::Plus => Self::Minus,
            Self::Minus => Self::Plus,
        }
    }

    /// `+1 ↦ 1`, `−1 ↦ 0`.
    pub fn bit(self) -> bool {
        self == Self::Plus
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    pub value: Outcome,
    pub post_state: StateVector,
    pub probability_of_value: f64,
}

/// Seeded pseudo-random stream.
///
/// Identical `(seed, stream_id)` pairs yield identical draw sequences.
/// A source is single-consumer; concurrent work must [`split`](Self::split)
/// off its own stream.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    stream_id: u64,
    draws: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            draws: 0,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Number of draws consumed so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.draws += 1;
        self.rng.random::<f64>()
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        assert!(n > 0, "empty index range");
        self.draws += 1;
        self.rng.random_range(0..n)
    }

    /// Child stream determined by `(seed, stream_id, index)` alone, so work
    /// items can be processed in any order or in parallel.
    pub fn split(&self, index: u64) -> Self {
        Self::new(self.seed, splitmix64(splitmix64(self.stream_id) ^ index))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Single-system `+1` eigenstate of [`spin_operator`]`(d)`:
/// `(cos(θ/2), e^{iφ} sin(θ/2))`.
pub fn prepare_along(d: Direction) -> StateVector {
    let (s, c) = (0.5 * d.polar).sin_cos();
    StateVector::new(vec![C64::new(c, 0.0), C64::from_polar(s, d.azimuth)])
        .expect("unit amplitudes")
}

/// `n·σ` for the Bloch vector `n` of `d`.
pub fn spin_operator(d: Direction) -> Operator {
    let [x, y, z] = d.bloch();
    Operator::new_unchecked(
        vec![
            C64::new(z, 0.0),
            C64::new(x, -y),
            C64::new(x, y),
            C64::new(-z, 0.0),
        ],
        OperatorKind::Hermitian,
    )
}

/// Projector `(I ± n·σ)/2` onto the `value` eigenspace of `spin_operator(d)`.
pub fn spin_projector(d: Direction, value: Outcome) -> Operator {
    let [x, y, z] = d.bloch();
    let s = 0.5 * value.sign();
    Operator::new_unchecked(
        vec![
            C64::new(0.5 + s * z, 0.0),
            C64::new(s * x, -s * y),
            C64::new(s * x, s * y),
            C64::new(0.5 - s * z, 0.0),
        ],
        OperatorKind::Projector,
    )
}

/// Born probability `⟨s|P|s⟩` of reading `value` along `d` at `site`.
pub fn outcome_probability(s: &StateVector, site: usize, d: Direction, value: Outcome) -> Result<f64> {
    let p = s.expectation(&spin_projector(d, value), &[site])?;
    Ok(p.re.clamp(0.0, 1.0))
}

/// Samples a projective spin measurement and collapses the state.
///
/// A uniform draw `u` selects `+1` iff `u < p(+1)`; probabilities within
/// [`PROBABILITY_SNAP`] of 0 or 1 consume no draw.
pub fn measure(
    s: &StateVector,
    site: usize,
    d: Direction,
    rng: &mut RandomSource,
) -> Result<MeasurementOutcome> {
    let p_plus = outcome_probability(s, site, d, Outcome::Plus)?;
    let value = if p_plus >= 1.0 - PROBABILITY_SNAP {
        Outcome::Plus
    } else if p_plus <= PROBABILITY_SNAP {
        Outcome::Minus
    } else if rng.uniform() < p_plus {
        Outcome::Plus
    } else {
        Outcome::Minus
    };
    let (_, post_state) = s.project(&spin_projector(d, value), &[site])?;
    let probability_of_value = match value {
        Outcome::Plus => p_plus,
        Outcome::Minus => 1.0 - p_plus,
    };
    Ok(MeasurementOutcome {
        value,
        post_state,
        probability_of_value,
    })
}

/// `⟨s|(n_A·σ) ⊗ (n_B·σ)|s⟩` with identity on the remaining sites.
pub fn correlator(
    s: &StateVector,
    site_a: usize,
    dir_a: Direction,
    site_b: usize,
    dir_b: Direction,
) -> Result<f64> {
    let op = spin_operator(dir_a).kron(&spin_operator(dir_b));
    let e = s.expectation(&op, &[site_a, site_b])?;
    Ok(e.re.clamp(-1.0, 1.0))
}

/// Direction drawn uniformly from the sphere.
pub fn random_direction(rng: &mut RandomSource) -> Direction {
    let polar = (1.0 - 2.0 * rng.uniform()).clamp(-1.0, 1.0).acos();
    let azimuth = TAU * rng.uniform();
    Direction { polar, azimuth }
}

/// Haar-random single-system state.
pub fn random_qubit(rng: &mut RandomSource) -> StateVector {
    prepare_along(random_direction(rng))
}
