//! Experiment configuration. Every struct doubles as a clap argument group
//! and a serde record, so flag names and config-file keys are the same
//! (`--angles-optimal` on the command line, `angles-optimal` in a file).
//!
//! Angles are degrees here and nowhere else.

use std::path::Path;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use onebit_core::localrealism::MeasurementOrder;
use onebit_core::protocols::{BellState, Channel, Correction};
use onebit_core::{Direction, StateVector};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum ExperimentConfig {
    Chsh(ChshConfig),
    Teleport(TeleportConfig),
    Qkd(QkdConfig),
    Qrng(QrngConfig),
    StateFromProps(PropsConfig),
    Measure(MeasureConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PairState {
    /// (|01⟩ + |10⟩)/√2
    #[default]
    Epr,
    /// (|01⟩ − |10⟩)/√2
    Singlet,
    /// |00⟩
    Product,
}

impl PairState {
    pub fn state(self) -> StateVector {
        match self {
            Self::Epr => BellState::PsiPlus.state(),
            Self::Singlet => BellState::PsiMinus.state(),
            Self::Product => StateVector::basis(2, 0).expect("two systems"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Order {
    #[default]
    AliceFirst,
    BobFirst,
}

impl From<Order> for MeasurementOrder {
    fn from(o: Order) -> Self {
        match o {
            Order::AliceFirst => MeasurementOrder::AliceFirst,
            Order::BobFirst => MeasurementOrder::BobFirst,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ChshConfig {
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub trials: u64,
    /// Planar angles a,a′,b,b′ in degrees from +z towards +x.
    #[arg(long, value_delimiter = ',', num_args = 1, allow_negative_numbers = true, conflicts_with = "angles_optimal")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angles: Option<Vec<f64>>,
    /// Use the grid-search optimum for the chosen state (the default when
    /// no angles are given).
    #[arg(long)]
    #[serde(default)]
    pub angles_optimal: bool,
    #[arg(long, value_enum, default_value_t)]
    #[serde(default)]
    pub state: PairState,
    #[arg(long, value_enum, default_value_t)]
    #[serde(default)]
    pub order: Order,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
pub enum FixedCorrection {
    #[value(name = "identity")]
    #[serde(rename = "identity")]
    Identity,
    X,
    Z,
    XZ,
}

impl From<FixedCorrection> for Correction {
    fn from(c: FixedCorrection) -> Self {
        match c {
            FixedCorrection::Identity => Correction::Identity,
            FixedCorrection::X => Correction::X,
            FixedCorrection::Z => Correction::Z,
            FixedCorrection::XZ => Correction::XZ,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct TeleportConfig {
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub trials: u64,
    /// Fixed input direction (degrees); random inputs when omitted.
    #[arg(long, allow_negative_numbers = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_polar: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "input_polar")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_azimuth: Option<f64>,
    /// Ignore Alice's message and always apply this correction.
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_correction: Option<FixedCorrection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelKind {
    #[default]
    Ideal,
    InterceptResend,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct QkdConfig {
    #[arg(long)]
    pub seed: u64,
    /// Number of distributed pairs.
    #[arg(long)]
    pub trials: u64,
    #[arg(long, value_enum, default_value_t)]
    #[serde(default)]
    pub channel: ChannelKind,
    /// Eavesdropper direction in degrees (intercept-resend only).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    #[serde(default)]
    pub eve_polar: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    #[serde(default)]
    pub eve_azimuth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct QrngConfig {
    #[arg(long)]
    pub seed: u64,
    /// Number of bits.
    #[arg(long)]
    pub trials: u64,
    /// Include the packed bits as hex in the results.
    #[arg(long)]
    #[serde(default)]
    pub emit_bits: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct PropsConfig {
    /// Propositions such as "ZZ=-1,YY=+1" (commas or newlines).
    #[arg(long)]
    pub props: String,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    #[serde(default = "one")]
    pub trials: u64,
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct MeasureConfig {
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub trials: u64,
    /// Measurement direction in degrees.
    #[arg(long, allow_negative_numbers = true)]
    pub polar: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    #[serde(default)]
    pub azimuth: f64,
    /// Preparation direction in degrees; defaults to +z.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    #[serde(default)]
    pub prep_polar: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    #[serde(default)]
    pub prep_azimuth: f64,
}

pub(crate) fn direction_deg(what: &str, polar: f64, azimuth: f64) -> Result<Direction, CliError> {
    Direction::from_degrees(polar, azimuth).map_err(|e| CliError::Config(format!("{what}: {e}")))
}

impl ExperimentConfig {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Chsh(_) => "chsh",
            Self::Teleport(_) => "teleport",
            Self::Qkd(_) => "qkd",
            Self::Qrng(_) => "qrng",
            Self::StateFromProps(_) => "state-from-props",
            Self::Measure(_) => "measure",
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            Self::Chsh(c) => c.seed,
            Self::Teleport(c) => c.seed,
            Self::Qkd(c) => c.seed,
            Self::Qrng(c) => c.seed,
            Self::StateFromProps(c) => c.seed,
            Self::Measure(c) => c.seed,
        }
    }

    pub fn trials(&self) -> u64 {
        match self {
            Self::Chsh(c) => c.trials,
            Self::Teleport(c) => c.trials,
            Self::Qkd(c) => c.trials,
            Self::Qrng(c) => c.trials,
            Self::StateFromProps(c) => c.trials,
            Self::Measure(c) => c.trials,
        }
    }

    /// Checks everything that can be checked without running.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.trials() == 0 {
            return Err(CliError::Config("trials must be at least 1".into()));
        }
        match self {
            Self::Chsh(c) => {
                if let Some(a) = &c.angles {
                    if c.angles_optimal {
                        return Err(CliError::Config("angles and angles-optimal are exclusive".into()));
                    }
                    if a.len() != 4 || a.iter().any(|x| !x.is_finite()) {
                        return Err(CliError::Config("angles needs four finite values a,a′,b,b′".into()));
                    }
                }
            }
            Self::Teleport(c) => {
                if c.input_azimuth.is_some() && c.input_polar.is_none() {
                    return Err(CliError::Config("input-azimuth requires input-polar".into()));
                }
                if let Some(p) = c.input_polar {
                    direction_deg("input", p, c.input_azimuth.unwrap_or(0.0))?;
                }
            }
            Self::Qkd(c) => {
                direction_deg("eavesdropper", c.eve_polar, c.eve_azimuth)?;
            }
            Self::Qrng(c) => {
                if usize::try_from(c.trials).is_err() {
                    return Err(CliError::Config("too many bits".into()));
                }
            }
            Self::StateFromProps(_) => {}
            Self::Measure(c) => {
                direction_deg("measurement", c.polar, c.azimuth)?;
                direction_deg("preparation", c.prep_polar, c.prep_azimuth)?;
            }
        }
        Ok(())
    }

    /// Reads a TOML or JSON config file; the extension picks the format and
    /// anything other than `.json` is read as TOML.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        let parsed = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| e.to_string())
        } else {
            toml::from_str(&text).map_err(|e| e.to_string())
        };
        let config: Self = parsed.map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }
}

impl QkdConfig {
    pub fn channel(&self) -> Result<Channel, CliError> {
        Ok(match self.channel {
            ChannelKind::Ideal => Channel::Ideal,
            ChannelKind::InterceptResend => Channel::InterceptResend {
                direction: direction_deg("eavesdropper", self.eve_polar, self.eve_azimuth)?,
            },
        })
    }
}
