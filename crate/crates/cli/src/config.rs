//! Experiment configuration: a TOML file with a strict schema (unknown
//! keys are rejected). Command-line flags may override individual keys;
//! the override order is documented in the README.

use anyhow::{Context, Result, bail};
use rb422_core::code422::PrepMode;
use rb422_core::noise::{ChannelSpec, MeasureFlips, NoiseModel, ZzPair};
use rb422_core::rb::{LengthSchedule, RbRunConfig, RunType};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub noise: NoiseSection,
    #[serde(default)]
    pub analysis: AnalysisSection,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    /// One of logical_standard, logical_phased, physical_standard,
    /// physical_phased.
    pub run_type: String,
    /// "plain" or "fault_tolerant_ancilla".
    #[serde(default = "default_prep")]
    pub prep_mode: String,
    pub seed: u64,
    #[serde(default = "default_shots")]
    pub shots: u32,
    #[serde(default = "default_sequences")]
    pub sequences_per_length: usize,
    #[serde(default)]
    pub lengths: LengthsSection,
}

fn default_prep() -> String {
    "plain".to_string()
}

fn default_shots() -> u32 {
    1024
}

fn default_sequences() -> usize {
    36
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LengthsSection {
    pub start: usize,
    pub step: usize,
    pub end: usize,
}

impl Default for LengthsSection {
    fn default() -> Self {
        Self { start: 2, step: 3, end: 92 }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    #[serde(default)]
    pub state_prep: ChannelSection,
    #[serde(default)]
    pub single_qubit: ChannelSection,
    #[serde(default)]
    pub two_qubit: ChannelSection,
    #[serde(default)]
    pub cnot_penalty: ChannelSection,
    #[serde(default)]
    pub idle: ChannelSection,
    #[serde(default)]
    pub element: ChannelSection,
    /// Coherent ZZ rotations fired after every gate layer.
    #[serde(default)]
    pub crosstalk: Vec<CrosstalkSection>,
    /// P(read 1 | true 0) applied to every measured wire.
    #[serde(default)]
    pub measure_flip_p01: f64,
    /// P(read 0 | true 1) applied to every measured wire.
    #[serde(default)]
    pub measure_flip_p10: f64,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "type", rename_all = "snake_case")]
pub enum ChannelSection {
    #[default]
    None,
    Depolarizing {
        p: f64,
    },
    BitFlip {
        p: f64,
    },
    PhaseFlip {
        p: f64,
    },
}

impl ChannelSection {
    pub fn to_spec(&self) -> ChannelSpec {
        match *self {
            ChannelSection::None => ChannelSpec::None,
            ChannelSection::Depolarizing { p } => ChannelSpec::Depolarizing { p },
            ChannelSection::BitFlip { p } => ChannelSpec::BitFlip { p },
            ChannelSection::PhaseFlip { p } => ChannelSpec::PhaseFlip { p },
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrosstalkSection {
    pub pair: [usize; 2],
    pub theta: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSection {
    #[serde(default = "default_resamples")]
    pub bootstrap_resamples: usize,
    /// Count-file bit order: "c0_first" (default) or "c0_last".
    #[serde(default = "default_bit_order")]
    pub bit_order: String,
}

fn default_resamples() -> usize {
    9_999
}

fn default_bit_order() -> String {
    "c0_first".to_string()
}

impl Default for AnalysisSection {
    fn default() -> Self {
        Self { bootstrap_resamples: default_resamples(), bit_order: default_bit_order() }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BitOrder {
    C0First,
    C0Last,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: ExperimentConfig = toml::from_str(text).context("config parse failure")?;
        config.validated()?;
        Ok(config)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    fn validated(&self) -> Result<()> {
        self.run_type()?;
        self.prep_mode()?;
        self.bit_order()?;
        self.rb_config()?.validate()?;
        self.noise_model()?.validate()?;
        if self.analysis.bootstrap_resamples == 0 {
            bail!("bootstrap_resamples must be positive");
        }
        Ok(())
    }

    pub fn run_type(&self) -> Result<RunType> {
        RunType::parse(&self.experiment.run_type)
            .with_context(|| format!("unknown run_type {:?}", self.experiment.run_type))
    }

    pub fn prep_mode(&self) -> Result<PrepMode> {
        match self.experiment.prep_mode.as_str() {
            "plain" => Ok(PrepMode::Plain),
            "fault_tolerant_ancilla" => Ok(PrepMode::FaultTolerantAncilla),
            other => bail!("unknown prep_mode {other:?}"),
        }
    }

    pub fn bit_order(&self) -> Result<BitOrder> {
        match self.analysis.bit_order.as_str() {
            "c0_first" => Ok(BitOrder::C0First),
            "c0_last" => Ok(BitOrder::C0Last),
            other => bail!("unknown bit_order {other:?}"),
        }
    }

    pub fn rb_config(&self) -> Result<RbRunConfig> {
        Ok(RbRunConfig {
            schedule: LengthSchedule {
                start: self.experiment.lengths.start,
                step: self.experiment.lengths.step,
                end: self.experiment.lengths.end,
            },
            sequences_per_length: self.experiment.sequences_per_length,
            shots: self.experiment.shots,
            run_type: self.run_type()?,
            prep_mode: self.prep_mode()?,
            seed: self.experiment.seed,
        })
    }

    pub fn noise_model(&self) -> Result<NoiseModel> {
        let n_wires = match (self.run_type()?.platform(), self.prep_mode()?) {
            (rb422_core::code422::Platform::Bare2q, _) => 2,
            (_, PrepMode::Plain) => 4,
            (_, PrepMode::FaultTolerantAncilla) => 5,
        };
        let model = NoiseModel {
            state_prep: self.noise.state_prep.to_spec(),
            single_qubit: self.noise.single_qubit.to_spec(),
            two_qubit: self.noise.two_qubit.to_spec(),
            cnot_penalty: self.noise.cnot_penalty.to_spec(),
            idle: self.noise.idle.to_spec(),
            element: self.noise.element.to_spec(),
            crosstalk: self
                .noise
                .crosstalk
                .iter()
                .map(|c| ZzPair { a: c.pair[0], b: c.pair[1], theta: c.theta })
                .collect(),
            measure_flips: vec![
                MeasureFlips {
                    p01: self.noise.measure_flip_p01,
                    p10: self.noise.measure_flip_p10,
                };
                n_wires
            ],
        };
        Ok(model)
    }
}
