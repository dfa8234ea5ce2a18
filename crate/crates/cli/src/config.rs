//! Command-line arguments and the TOML run configuration built from them.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(
    name = "graphlabel",
    version,
    about = "Labelling schemes, sketches and audits for graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    /// Seed for every randomized step.
    #[arg(long, global = true, env = "GRAPHLABEL_SEED")]
    pub seed: Option<u64>,

    /// Worker threads for evaluation and measurement.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Print the report as JSON instead of aligned text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Also write the JSON report to this path.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,

    /// Run the configuration stored in this TOML file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Write the resolved configuration to this TOML file before running.
    #[arg(long, global = true)]
    pub save_config: Option<PathBuf>,
}

/// Everything that determines a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    #[serde(default)]
    pub json: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(skip)]
    pub save_config: Option<PathBuf>,
    pub command: Command,
}

impl RunConfig {
    /// Command-line values take precedence over a loaded config file.
    pub fn resolve(cli: Cli) -> anyhow::Result<Self> {
        let base = match &cli.config {
            Some(path) => Some(Self::load(path)?),
            None => None,
        };
        let command = match (cli.command, &base) {
            (Some(c), _) => c,
            (None, Some(b)) => b.command.clone(),
            (None, None) => bail!("no subcommand given; see --help"),
        };
        Ok(Self {
            seed: cli.seed.or(base.as_ref().map(|b| b.seed)).unwrap_or(0),
            jobs: cli.jobs.or(base.as_ref().and_then(|b| b.jobs)),
            json: cli.json || base.as_ref().is_some_and(|b| b.json),
            report: cli.report.or(base.and_then(|b| b.report)),
            save_config: cli.save_config,
            command,
        })
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn save(&self, path: &Path) -> anyhow::Result<()> {
        std::fs::write(path, toml::to_string(self)?)
            .with_context(|| format!("writing {}", path.display()))
    }
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Generate a graph and write it as an edge list.
    Gen(GenArgs),
    /// Build a labelling scheme and dump it as JSON.
    Label(LabelArgs),
    /// Hash-compile a label dump into a sketch dump.
    Sketch(SketchArgs),
    /// Check a label or sketch dump against a pair predicate.
    Eval(EvalArgs),
    /// Build and verify a sparse cover.
    Cover(CoverArgs),
    /// Draw a padded partition or measure its padding.
    Partition(PartitionArgs),
    /// Monte Carlo report for an approximate distance threshold scheme.
    Adt(AdtArgs),
    /// Lower-bound construction audits.
    Audit(AuditArgs),
    /// Closed-form bounds and exhaustive counting.
    Bounds(BoundsArgs),
    /// Time builds and decodes over a fixed instance suite.
    Bench(BenchArgs),
}

/// One of `--in` or `--spec`.
#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GraphSource {
    /// Edge-list file.
    #[arg(long = "in", value_name = "FILE")]
    #[serde(default, rename = "in", skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    /// Generator spec such as `grid:20,20`.
    #[arg(long, value_name = "SPEC", conflicts_with = "input")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<String>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenArgs {
    /// Generator spec, e.g. `hypercube:4`, `gnp:200,0.05,7`, `petersen`.
    #[arg(long)]
    pub spec: String,
    /// Subdivide every edge with this many internal vertices.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subdivide: Option<usize>,
    /// Edge-list output; the report goes to stdout when omitted.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// JSON side-car with vertex roles.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roles: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelKind {
    Adjacency,
    Forest,
    Distance,
    Layered,
    Shrubdepth,
    TreeCover,
    BallCover,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderKind {
    Degeneracy,
    Bfs,
    Exact,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphSource,
    #[arg(long, value_enum)]
    pub kind: LabelKind,
    /// Distance threshold.
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    #[arg(long, value_enum, default_value_t = OrderKind::Degeneracy)]
    pub order: OrderKind,
    /// Root for BFS orders, layers and tree covers.
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    /// Cover diameter for the cover-based kinds.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<u32>,
    /// Connection model JSON for `shrubdepth`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<PathBuf>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SketchArgs {
    /// Label dump to compile.
    #[arg(long)]
    pub labels: PathBuf,
    /// Hash range; defaults to `3k²`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<u64>,
    /// Independent copies combined by majority.
    #[arg(long, default_value_t = 1)]
    pub copies: u32,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalArgs {
    /// Label or sketch dump.
    #[arg(long)]
    pub dump: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphSource,
    /// `adjacency`, `dist:R` or `band:LOW,HIGH`; inferred from the decoder
    /// when omitted.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicate: Option<String>,
    /// Monte Carlo trials of the hash-compiled labels; 0 checks the labels
    /// themselves.
    #[arg(long, default_value_t = 0)]
    pub trials: u64,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub copies: u32,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverKind {
    Tree,
    Greedy,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphSource,
    #[arg(long, value_enum, default_value_t = CoverKind::Greedy)]
    pub kind: CoverKind,
    #[arg(long)]
    pub delta: u32,
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    /// Cover JSON output.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphSource,
    /// Partition diameter.
    #[arg(long)]
    pub delta: f64,
    /// Shift rate: shifts are `Exp(rate/Δ)` truncated to `[0, Δ/2)`.
    #[arg(long, default_value_t = 4.0)]
    pub rate: f64,
    /// Measure padding over this many partitions instead of drawing one.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<u64>,
    /// Ratios `γ` to measure; defaults to `k/Δ` for `k = 1..=4`.
    #[arg(long, value_delimiter = ',')]
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gammas: Vec<f64>,
    /// Partition JSON output.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdtKind {
    Pds,
    TreeCover,
    BallCover,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdtArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphSource,
    #[arg(long, value_enum, default_value_t = AdtKind::Pds)]
    pub kind: AdtKind,
    #[arg(long)]
    pub r: u32,
    /// Padding rate `β`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Padding range `δ`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Shift rate of the partition; defaults to `β`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift_rate: Option<f64>,
    /// Cited parameters: `kt:T` or `genus:G`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    /// Measure `(β, δ)` on the input graph first, using this shift rate.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibrate: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditKind {
    Girth,
    Gadget,
    Subdivision,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphSource,
    #[arg(long, value_enum)]
    pub kind: AuditKind,
    /// Stretch `α` for the girth audit.
    #[arg(long, default_value_t = 3)]
    pub alpha: u32,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    /// Gadget path length `ℓ`; defaults to the smallest accepted.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    /// Subdivision parameter `k`.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundsKind {
    Counting,
    Wcol,
    AdtSize,
    Arboricity,
    Preset,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphSource,
    #[arg(long, value_enum)]
    pub kind: BoundsKind,
    /// Label bits per vertex for `counting`.
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    /// Tolerated error fraction for `counting`.
    #[arg(long, default_value_t = 1.0 / 6.0)]
    pub error: f64,
    /// Random decoder tables for `counting`.
    #[arg(long, default_value_t = 100)]
    pub tables: u64,
    /// `planar` or `kt:T` for `wcol`; `kt:T` or `genus:G` for `preset`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<f64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchArgs {
    /// Suite file.
    #[arg(long, default_value = "bench/suite.toml")]
    pub suite: PathBuf,
    /// Repetitions per instance; the median is reported.
    #[arg(long, default_value_t = 3)]
    pub reps: u32,
    /// Decoded pairs sampled per instance.
    #[arg(long, default_value_t = 20_000)]
    pub pairs: usize,
}
