//! One runner per subcommand. Each returns a serializable result record and
//! a short human summary.

use serde::Serialize;
use sha2::{Digest, Sha256};

use onebit_core::infoprinciple::{classify_set, state_from_propositions, truth_probability, PropositionSet};
use onebit_core::localrealism::{
    lhv_bound, quantum_chsh_ideal, run_chsh_trials_parallel, ChshSettings, ChshStats,
};
use onebit_core::measurement::{measure, outcome_probability, prepare_along, random_qubit, Outcome};
use onebit_core::protocols::{
    e91_run, nosignaling_audit, qrng_bits, teleport_with, BellState, Correction, CorrectionPolicy,
    TeleportTranscript,
};
use onebit_core::stats::{binomial_std_error, chi_square_uniform, frequency_test, lag1_correlation, runs_test, TestResult};
use onebit_core::{RandomSource, StateVector, C64};

use crate::config::{
    direction_deg, ChshConfig, ExperimentConfig, MeasureConfig, PropsConfig, QkdConfig, QrngConfig,
    TeleportConfig,
};
use crate::error::CliError;

/// Stream id of the root source for every subcommand.
const ROOT_STREAM: u64 = 0;

pub struct RunOutput {
    pub results: serde_json::Value,
    pub summary: String,
}

pub fn run_experiment(config: &ExperimentConfig, jobs: usize) -> Result<RunOutput, CliError> {
    config.validate()?;
    let rng = RandomSource::new(config.seed(), ROOT_STREAM);
    let (results, summary) = match config {
        ExperimentConfig::Chsh(c) => pack(chsh(c, &rng, jobs)?)?,
        ExperimentConfig::Teleport(c) => pack(teleport(c, &rng)?)?,
        ExperimentConfig::Qkd(c) => pack(qkd(c, &rng)?)?,
        ExperimentConfig::Qrng(c) => pack(qrng(c, &rng)?)?,
        ExperimentConfig::StateFromProps(c) => pack(state_from_props(c)?)?,
        ExperimentConfig::Measure(c) => pack(measure_run(c, &rng)?)?,
    };
    Ok(RunOutput { results, summary })
}

fn pack<R: Serialize>((r, summary): (R, String)) -> Result<(serde_json::Value, String), CliError> {
    let v = serde_json::to_value(r).map_err(|e| CliError::Schema(e.to_string()))?;
    Ok((v, summary))
}

#[derive(Serialize)]
struct Planar {
    a: f64,
    a_prime: f64,
    b: f64,
    b_prime: f64,
}

#[derive(Serialize)]
struct ChshResults {
    settings_deg: Planar,
    exact_s: f64,
    lhv_bound: i32,
    stats: ChshStats,
    /// `(S − 2) / std_error`.
    violation_sigma: f64,
    alice_plus_given_bob: [[f64; 2]; 2],
    bob_plus_given_alice: [[f64; 2]; 2],
}

fn chsh(c: &ChshConfig, rng: &RandomSource, jobs: usize) -> Result<(ChshResults, String), CliError> {
    let state = c.state.state();
    let (settings, deg) = match &c.angles {
        Some(a) => {
            let r: Vec<f64> = a.iter().map(|x| x.to_radians()).collect();
            (
                ChshSettings::planar(r[0], r[1], r[2], r[3]),
                Planar { a: a[0], a_prime: a[1], b: a[2], b_prime: a[3] },
            )
        }
        None => {
            let (s, _) = ChshSettings::optimal_planar(&state)?;
            let angle = |d: onebit_core::Direction| {
                let signed = if d.azimuth() > 0.0 { -d.polar() } else { d.polar() };
                signed.to_degrees().rem_euclid(360.0)
            };
            let deg = Planar {
                a: angle(s.a),
                a_prime: angle(s.a_prime),
                b: angle(s.b),
                b_prime: angle(s.b_prime),
            };
            (s, deg)
        }
    };
    let exact_s = quantum_chsh_ideal(&state, &settings)?;
    let stats = run_chsh_trials_parallel(&state, &settings, c.trials, rng, c.order.into(), jobs)?;
    let pair = |(f, e): (f64, f64)| [f, e];
    let results = ChshResults {
        settings_deg: deg,
        exact_s,
        lhv_bound: lhv_bound(),
        violation_sigma: (stats.s_value - 2.0) / stats.std_error,
        alice_plus_given_bob: [pair(stats.alice_plus_given_bob(0)), pair(stats.alice_plus_given_bob(1))],
        bob_plus_given_alice: [pair(stats.bob_plus_given_alice(0)), pair(stats.bob_plus_given_alice(1))],
        stats,
    };
    let summary = format!(
        "chsh: S = {:.4} ± {:.4} over {} trials (exact {:.6}, local bound {})",
        results.stats.s_value, results.stats.std_error, c.trials, exact_s, results.lhv_bound
    );
    Ok((results, summary))
}

#[derive(Serialize)]
struct TeleportResults {
    trials: u64,
    correction_policy: String,
    outcome_histogram: [u64; 4],
    outcome_uniformity: Option<TestResult>,
    min_fidelity: f64,
    mean_fidelity: f64,
    fidelity_std_error: f64,
    max_nosignaling_distance: f64,
    correction_table: [(&'static str, Correction); 4],
    first_transcript: TeleportTranscript,
}

fn teleport(c: &TeleportConfig, rng: &RandomSource) -> Result<(TeleportResults, String), CliError> {
    let fixed_input = match c.input_polar {
        Some(p) => Some(prepare_along(direction_deg("input", p, c.input_azimuth.unwrap_or(0.0))?)),
        None => None,
    };
    let policy = match c.fixed_correction {
        Some(f) => CorrectionPolicy::Fixed(f.into()),
        None => CorrectionPolicy::FromMessage,
    };
    let mut histogram = [0u64; 4];
    let mut fidelities = Vec::with_capacity(c.trials as usize);
    let mut max_distance: f64 = 0.0;
    let mut first = None;
    for t in 0..c.trials {
        let mut trial_rng = rng.split(t);
        let input = match &fixed_input {
            Some(s) => s.clone(),
            None => random_qubit(&mut trial_rng),
        };
        let tr = teleport_with(&input, &mut trial_rng, policy)?;
        histogram[tr.bsm_outcome] += 1;
        fidelities.push(tr.fidelity_achieved);
        max_distance = max_distance.max(nosignaling_audit(&tr));
        if first.is_none() {
            first = Some(tr);
        }
    }
    let n = fidelities.len() as f64;
    let mean = fidelities.iter().sum::<f64>() / n;
    let var = if fidelities.len() > 1 {
        fidelities.iter().map(|f| (f - mean) * (f - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let results = TeleportResults {
        trials: c.trials,
        correction_policy: match policy {
            CorrectionPolicy::FromMessage => "from-message".into(),
            CorrectionPolicy::Fixed(f) => format!("fixed-{}", serde_json::to_value(f).unwrap().as_str().unwrap()),
        },
        outcome_uniformity: chi_square_uniform(&histogram).ok(),
        outcome_histogram: histogram,
        min_fidelity: fidelities.iter().copied().fold(f64::INFINITY, f64::min),
        mean_fidelity: mean,
        fidelity_std_error: (var / n).sqrt(),
        max_nosignaling_distance: max_distance,
        correction_table: BellState::ALL.map(|b| (bell_label(b), Correction::for_outcome(b))),
        first_transcript: first.expect("at least one trial"),
    };
    let summary = format!(
        "teleport: {} runs, min fidelity {:.12}, mean {:.4}, outcomes {:?}, max pre-message distance {:.2e}",
        c.trials, results.min_fidelity, mean, histogram, max_distance
    );
    Ok((results, summary))
}

fn bell_label(b: BellState) -> &'static str {
    match b {
        BellState::PhiPlus => "phi+",
        BellState::PhiMinus => "phi-",
        BellState::PsiPlus => "psi+",
        BellState::PsiMinus => "psi-",
    }
}

#[derive(Serialize)]
struct QkdResults {
    n_pairs: u64,
    channel: onebit_core::protocols::Channel,
    key_length: usize,
    test_rounds: u64,
    qber: f64,
    qber_std_error: f64,
    s_estimate: f64,
    s_std_error: f64,
    correlators: [f64; 4],
    test_counts: [[u64; 4]; 4],
    keys_agree: bool,
    key_sha256: String,
}

fn qkd(c: &QkdConfig, rng: &RandomSource) -> Result<(QkdResults, String), CliError> {
    let session = e91_run(c.trials, c.channel()?, rng)?;
    let results = QkdResults {
        n_pairs: session.n_pairs,
        channel: session.channel,
        key_length: session.key_length(),
        test_rounds: session.test_rounds(),
        qber: session.qber,
        qber_std_error: session.qber_std_error,
        s_estimate: session.s_estimate,
        s_std_error: session.s_std_error,
        correlators: session.correlators,
        test_counts: session.test_counts,
        keys_agree: session.sifted_key_alice == session.sifted_key_bob,
        key_sha256: hex::encode(Sha256::digest(pack_bits(&session.sifted_key_alice))),
    };
    let summary = format!(
        "qkd: {} pairs, key {} bits, qber {:.4} ± {:.4}, S = {:.4} ± {:.4}",
        c.trials, results.key_length, results.qber, results.qber_std_error, results.s_estimate, results.s_std_error
    );
    Ok((results, summary))
}

/// Bits packed most significant first; a partial last byte is zero-padded.
pub fn pack_bits(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|chunk| {
            chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, &b)| acc | ((b as u8) << (7 - i)))
        })
        .collect()
}

#[derive(Serialize)]
struct QrngResults {
    n_bits: u64,
    ones: u64,
    ones_fraction: f64,
    ones_fraction_std_error: f64,
    frequency_test: TestResult,
    runs_test: Option<TestResult>,
    lag1_correlation: Option<f64>,
    lag1_std_error: Option<f64>,
    sha256: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    bits_hex: Option<String>,
}

fn qrng(c: &QrngConfig, rng: &RandomSource) -> Result<(QrngResults, String), CliError> {
    let mut stream = rng.clone();
    let bits = qrng_bits(c.trials as usize, &mut stream)?;
    let packed = pack_bits(&bits);
    let ones = bits.iter().filter(|&&b| b).count() as u64;
    let fraction = ones as f64 / c.trials as f64;
    let results = QrngResults {
        n_bits: c.trials,
        ones,
        ones_fraction: fraction,
        ones_fraction_std_error: binomial_std_error(0.5, c.trials),
        frequency_test: frequency_test(&bits)?,
        runs_test: runs_test(&bits).ok(),
        lag1_correlation: lag1_correlation(&bits).ok(),
        lag1_std_error: (bits.len() >= 3).then(|| 1.0 / ((bits.len() - 1) as f64).sqrt()),
        sha256: hex::encode(Sha256::digest(&packed)),
        bits_hex: c.emit_bits.then(|| hex::encode(&packed)),
    };
    let summary = format!(
        "qrng: {} bits, ones fraction {:.5}, frequency p = {:.4}, sha256 {}",
        c.trials, fraction, results.frequency_test.p_value, results.sha256
    );
    Ok((results, summary))
}

#[derive(Serialize)]
struct Amplitude {
    basis: String,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct PropsResults {
    propositions: Vec<String>,
    num_systems: usize,
    amplitudes: Vec<Amplitude>,
    classification: onebit_core::infoprinciple::Classification,
    classification_label: String,
    truth_probabilities: Vec<f64>,
}

/// Rotates the global phase so the first non-negligible amplitude is real
/// and positive.
fn canonical_phase(s: &StateVector) -> Vec<C64> {
    let lead = s
        .amplitudes()
        .iter()
        .find(|z| z.norm_sqr() > 1e-20)
        .copied()
        .unwrap_or(C64::new(1.0, 0.0));
    let rot = lead.conj() / lead.norm();
    s.amplitudes().iter().map(|z| z * rot).collect()
}

fn state_from_props(c: &PropsConfig) -> Result<(PropsResults, String), CliError> {
    let ps = PropositionSet::parse(&c.props)?;
    let state = state_from_propositions(&ps)?;
    let classification = classify_set(&ps)?;
    let n = state.num_systems();
    let amplitudes = canonical_phase(&state)
        .into_iter()
        .enumerate()
        .filter(|(_, z)| z.norm_sqr() > 1e-20)
        .map(|(k, z)| Amplitude {
            basis: format!("{k:0n$b}"),
            re: z.re,
            im: z.im,
        })
        .collect::<Vec<_>>();
    let truth_probabilities = ps
        .propositions()
        .iter()
        .map(|p| {
            let plus = truth_probability(&state, p)?;
            Ok(if p.truth() { plus } else { 1.0 - plus })
        })
        .collect::<Result<Vec<_>, onebit_core::Error>>()?;
    let label = format!(
        "{}, {}",
        classification.kind,
        if classification.entangled { "entangled" } else { "product" }
    );
    let listing: Vec<String> = amplitudes
        .iter()
        .map(|a| format!("({:+.6}{:+.6}i)|{}⟩", a.re, a.im, a.basis))
        .collect();
    let summary = format!("state-from-props: {} [{label}]", listing.join(" "));
    Ok((
        PropsResults {
            propositions: ps.propositions().iter().map(|p| p.to_string()).collect(),
            num_systems: n,
            amplitudes,
            classification,
            classification_label: label,
            truth_probabilities,
        },
        summary,
    ))
}

#[derive(Serialize)]
struct MeasureResults {
    shots: u64,
    probability_plus: f64,
    plus_count: u64,
    plus_frequency: f64,
    std_error: f64,
    /// `(frequency − probability) / std_error`, zero when the outcome is
    /// certain.
    deviation_sigma: f64,
}

fn measure_run(c: &MeasureConfig, rng: &RandomSource) -> Result<(MeasureResults, String), CliError> {
    let d = direction_deg("measurement", c.polar, c.azimuth)?;
    let prep = prepare_along(direction_deg("preparation", c.prep_polar, c.prep_azimuth)?);
    let p = outcome_probability(&prep, 0, d, Outcome::Plus)?;
    let mut stream = rng.clone();
    let mut plus = 0u64;
    for _ in 0..c.trials {
        if measure(&prep, 0, d, &mut stream)?.value == Outcome::Plus {
            plus += 1;
        }
    }
    let f = plus as f64 / c.trials as f64;
    let se = binomial_std_error(p, c.trials);
    let results = MeasureResults {
        shots: c.trials,
        probability_plus: p,
        plus_count: plus,
        plus_frequency: f,
        std_error: se,
        deviation_sigma: if se > 0.0 { (f - p) / se } else { 0.0 },
    };
    let summary = format!(
        "measure: +1 frequency {:.5} vs probability {:.5} ({} shots, {:.2}σ)",
        f, p, c.trials, results.deviation_sigma
    );
    Ok((results, summary))
}
