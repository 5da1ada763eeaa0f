//! Run configuration: the clap subcommand tree doubles as the serializable
//! config embedded in every run manifest, so a manifest reproduces its run.

use std::path::Path;

use anyhow::Context;
use clap::{Args, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use blockcirc::{EnsembleKind, EnsembleSpec, EntryDistribution, Pattern};

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

#[derive(Subcommand, Serialize, Deserialize, Debug, Clone)]
#[serde(tag = "cmd", rename_all = "kebab-case")]
pub enum Command {
    /// Monte Carlo eigenvalue histogram pooled over trials, with f_m and
    /// Wigner overlay columns.
    Simulate(SimulateArgs),
    /// Closed-form limiting densities f_m on a grid, with the Wigner curve.
    Density(DensityArgs),
    /// Harer-Zagier genus counts and closed-form limiting moments.
    Moments(MomentsArgs),
    /// Exhaustive pairing enumeration and its genus histogram.
    Pairings(PairingsArgs),
    /// Moments of a generalized pattern: analytic, pairing-count, simulated.
    PatternMoments(PatternMomentsArgs),
    /// Spacing statistics of the central eigenvalues.
    Spacings(SpacingsArgs),
    /// Write one sample matrix as CSV plus a JSON description.
    Generate(GenerateArgs),
    /// Eigenvalues of one sample matrix.
    Eigs(EigsArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::Density(_) => "density",
            Command::Moments(_) => "moments",
            Command::Pairings(_) => "pairings",
            Command::PatternMoments(_) => "pattern-moments",
            Command::Spacings(_) => "spacings",
            Command::Generate(_) => "generate",
            Command::Eigs(_) => "eigs",
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
}

impl RunConfig {
    pub fn from_command(command: Command) -> Self {
        RunConfig { command }
    }

    pub fn from_manifest(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading manifest {}", path.display()))?;
        let manifest: serde_json::Value =
            serde_json::from_str(&text).context("manifest is not valid JSON")?;
        let config = manifest
            .get("config")
            .ok_or_else(|| usage("manifest has no `config` field"))?;
        let command: Command =
            serde_json::from_value(config.clone()).context("manifest config does not parse")?;
        Ok(RunConfig { command })
    }
}

#[derive(ValueEnum, Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum KindArg {
    Circulant,
    Toeplitz,
    Pattern,
}

#[derive(ValueEnum, Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum DistArg {
    Gaussian,
    Rademacher,
    Uniform,
}

impl From<DistArg> for EntryDistribution {
    fn from(d: DistArg) -> Self {
        match d {
            DistArg::Gaussian => EntryDistribution::StandardGaussian,
            DistArg::Rademacher => EntryDistribution::Rademacher,
            DistArg::Uniform => EntryDistribution::UniformScaled,
        }
    }
}

#[derive(ValueEnum, Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum OutFormat {
    Csv,
    Json,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone)]
pub struct EnsembleArgs {
    /// Ensemble kind.
    #[arg(long, value_enum, default_value = "circulant")]
    pub kind: KindArg,

    /// Matrix dimension N (the period must divide it).
    #[arg(short = 'N', long = "dim", default_value_t = 400)]
    pub dim: usize,

    /// Period m.
    #[arg(short = 'm', long = "period", default_value_t = 2)]
    pub period: usize,

    /// Symbol pattern such as "aabb" (kind = pattern; its length becomes m).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pattern: Option<String>,

    /// Entry distribution.
    #[arg(long, value_enum, default_value = "gaussian")]
    pub dist: DistArg,

    /// RNG seed; together with the trial index it fixes every draw.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

impl EnsembleArgs {
    pub fn to_spec(&self) -> anyhow::Result<EnsembleSpec> {
        let kind = match self.kind {
            KindArg::Circulant => EnsembleKind::BlockCirculant,
            KindArg::Toeplitz => EnsembleKind::BlockToeplitz,
            KindArg::Pattern => {
                let text = self
                    .pattern
                    .as_deref()
                    .ok_or_else(|| usage("kind = pattern requires --pattern"))?;
                EnsembleKind::GeneralizedCirculant(Pattern::parse(text)?)
            }
        };
        let period = match &kind {
            EnsembleKind::GeneralizedCirculant(p) => p.len(),
            _ => self.period,
        };
        let spec = EnsembleSpec::new(kind, self.dim, period)?
            .with_dist(self.dist.into())
            .with_seed(self.seed);
        Ok(spec)
    }
}

#[derive(Args, Serialize, Deserialize, Debug, Clone)]
pub struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,

    /// Number of sample matrices.
    #[arg(long, default_value_t = 200)]
    pub trials: u64,

    /// Histogram bins.
    #[arg(long, default_value_t = 61)]
    pub bins: usize,

    /// Histogram half-range: bins cover [-range, range].
    #[arg(long, default_value_t = 3.0)]
    pub range: f64,

    /// Record average empirical moments up to this order in the manifest.
    #[arg(long, default_value_t = 10)]
    pub k_max: usize,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutFormat,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone)]
pub struct DensityArgs {
    /// Periods to evaluate, e.g. -m 1,2,4,8,16.
    #[arg(short = 'm', long = "periods", value_delimiter = ',', default_values_t = vec![1usize, 2, 4, 8, 16])]
    pub periods: Vec<usize>,

    /// Grid step.
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,

    /// Grid half-range: x runs over [-range, range].
    #[arg(long, default_value_t = 3.0)]
    pub range: f64,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutFormat,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone)]
pub struct MomentsArgs {
    /// Largest k: moments M_{2k;m} for k = 1..=k_max.
    #[arg(long, default_value_t = 5)]
    pub k_max: usize,

    /// Period m.
    #[arg(short = 'm', long = "period", default_value_t = 2)]
    pub period: usize,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutFormat,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone)]
pub struct PairingsArgs {
    /// Half the edge count: pairings of a 2k-gon.
    #[arg(short = 'k', long, default_value_t = 4)]
    pub k: usize,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutFormat,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone)]
pub struct PatternMomentsArgs {
    /// Pattern string such as "aabb".
    #[arg(long)]
    pub pattern: String,

    /// Dimension for the Diophantine pairing count (pattern length must
    /// divide it).
    #[arg(short = 'N', long = "dim", default_value_t = 240)]
    pub dim: usize,

    /// Dimension for the Monte Carlo column.
    #[arg(long, default_value_t = 400)]
    pub sim_dim: usize,

    /// Monte Carlo trials.
    #[arg(long, default_value_t = 200)]
    pub trials: u64,

    /// Largest moment order (even).
    #[arg(long, default_value_t = 6)]
    pub k_max: usize,

    #[arg(long, value_enum, default_value = "gaussian")]
    pub dist: DistArg,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutFormat,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone)]
pub struct SpacingsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,

    /// Number of sample matrices.
    #[arg(long, default_value_t = 100)]
    pub trials: u64,

    /// How many central eigenvalues to take per matrix.
    #[arg(long, default_value_t = 10)]
    pub central: usize,

    /// Spacings below this are counted as multiplicity pairs
    /// (default: 1e-8 √N, scale-aware).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dedup_tol: Option<f64>,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutFormat,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone)]
pub struct GenerateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,
}

#[derive(ValueEnum, Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum SolverArg {
    /// Fast path for circulant kinds, dense otherwise.
    Auto,
    Dense,
    Fast,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone)]
pub struct EigsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,

    #[arg(long, value_enum, default_value = "auto")]
    pub solver: SolverArg,
}
