use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Exact experiments on gcd's of polynomial iterates.
///
/// Rationals are written `p` or `p/q`, points additionally `inf`. Maps and
/// polynomials are read from JSON files: `{"coeffs": ["c0", "c1", ...]}` or
/// `{"num": {...}, "den": {...}}`. Budgets come from ITERGCD_ORBIT_DIGITS,
/// ITERGCD_SYMBOLIC_DEGREE and ITERGCD_FACTOR_STEPS.
#[derive(Parser, Debug)]
#[command(name = "itergcd", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// gcd(f^n(a) - alpha, g^n(b) - beta) for n = 0..max-n.
    GcdSeries(GcdSeriesArgs),
    /// Weil height of a point.
    Height(HeightArgs),
    /// Canonical height of a point under a map.
    CanonicalHeight(CanonicalHeightArgs),
    /// Gcd height of two rationals.
    Hgcd(HgcdArgs),
    /// Forward orbit of a point.
    Iterate(IterateArgs),
    /// Hypothesis checks.
    #[command(subcommand)]
    Classify(ClassifyCommand),
    /// Search for a low-degree curve containing the orbit pairs.
    ProbeGenericity(ProbeArgs),
    /// Intersection numbers on the blown-up quadric.
    #[command(subcommand)]
    Surface(SurfaceCommand),
    /// Least depth D meeting the multiplicity inequality, with certificate.
    ChooseDepth(ChooseDepthArgs),
    /// Large-gcd index set of a saved report and its progression structure.
    ApStructure(ApStructureArgs),
    /// Deviation of the finite gcd height under Mobius changes of coordinates.
    MobiusProbe(MobiusArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::GcdSeries(_) => "gcd-series",
            Command::Height(_) => "height",
            Command::CanonicalHeight(_) => "canonical-height",
            Command::Hgcd(_) => "hgcd",
            Command::Iterate(_) => "iterate",
            Command::Classify(c) => match c {
                ClassifyCommand::Exceptional(_) => "classify exceptional",
                ClassifyCommand::Preperiodic(_) => "classify preperiodic",
                ClassifyCommand::MultIndep(_) => "classify mult-indep",
                ClassifyCommand::Special(_) => "classify special",
                ClassifyCommand::Commutes(_) => "classify commutes",
            },
            Command::ProbeGenericity(_) => "probe-genericity",
            Command::Surface(SurfaceCommand::Intersect(_)) => "surface intersect",
            Command::Surface(SurfaceCommand::Ample(_)) => "surface ample",
            Command::ChooseDepth(_) => "choose-depth",
            Command::ApStructure(_) => "ap-structure",
            Command::MobiusProbe(_) => "mobius-probe",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct GcdSeriesArgs {
    #[arg(long = "f")]
    pub f: PathBuf,
    #[arg(long = "g")]
    pub g: PathBuf,
    #[arg(short = 'a')]
    pub a: String,
    #[arg(short = 'b')]
    pub b: String,
    #[arg(long)]
    pub alpha: String,
    #[arg(long)]
    pub beta: String,
    #[arg(long)]
    pub max_n: usize,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Comma-separated primes left out of hgcd_S.
    #[arg(long, value_delimiter = ',')]
    pub exclude: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// CSV drops gcd's with at least this many digits.
    #[arg(long, default_value_t = itergcd::experiments::CSV_ELIDE_DIGITS)]
    pub csv_elide_digits: u64,
    /// Also write `n ratio` lines to this file.
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct HeightArgs {
    #[arg(long)]
    pub point: String,
    #[arg(long, default_value_t = 20)]
    pub digits: usize,
}

#[derive(Args, Debug, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct CanonicalHeightArgs {
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long)]
    pub point: String,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Args, Debug, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct HgcdArgs {
    #[arg(short = 'x')]
    pub x: String,
    #[arg(short = 'y')]
    pub y: String,
    /// Finite places only.
    #[arg(long)]
    pub fin: bool,
    /// Comma-separated primes to leave out.
    #[arg(long, value_delimiter = ',')]
    pub exclude: Vec<String>,
}

#[derive(Args, Debug, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct IterateArgs {
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long)]
    pub start: String,
    #[arg(long)]
    pub steps: usize,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassifyCommand {
    /// Is the point exceptional (finite backward orbit)?
    Exceptional(MapPointArgs),
    /// Is the point preperiodic?
    Preperiodic(PreperiodicArgs),
    /// Are two rationals multiplicatively independent?
    MultIndep(MultIndepArgs),
    /// Is the polynomial conjugate to a power map or a Chebyshev polynomial?
    Special(SpecialArgs),
    /// Least k <= k-max with h o f^k = f^k o h.
    Commutes(CommutesArgs),
}

#[derive(Args, Debug, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct MapPointArgs {
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long)]
    pub point: String,
}

#[derive(Args, Debug, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct PreperiodicArgs {
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long)]
    pub point: String,
    #[arg(long, default_value_t = itergcd::heights::DEFAULT_ORBIT_STEPS)]
    pub max_steps: usize,
}

#[derive(Args, Debug, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct MultIndepArgs {
    #[arg(short = 'a')]
    pub a: String,
    #[arg(short = 'b')]
    pub b: String,
}

#[derive(Args, Debug, Serialize)]
pub struct SpecialArgs {
    #[arg(long)]
    pub poly: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct CommutesArgs {
    #[arg(long)]
    pub h: PathBuf,
    #[arg(long = "f")]
    pub f: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub k_max: u32,
}

#[derive(Args, Debug, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct ProbeArgs {
    #[arg(long = "f")]
    pub f: PathBuf,
    #[arg(long = "g")]
    pub g: PathBuf,
    #[arg(short = 'a')]
    pub a: String,
    #[arg(short = 'b')]
    pub b: String,
    #[arg(long)]
    pub deg_max: usize,
    #[arg(long)]
    pub points: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceCommand {
    /// Pairing of two classes written `a,b;c1,...,cs` (exceptional part additive).
    Intersect(IntersectArgs),
    /// Ampleness of (1,1) - (1/N) sum E_i.
    Ample(AmpleArgs),
}

#[derive(Args, Debug, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct IntersectArgs {
    #[arg(long)]
    pub s: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub d1: String,
    #[arg(long, allow_hyphen_values = true)]
    pub d2: String,
}

#[derive(Args, Debug, Serialize)]
pub struct AmpleArgs {
    #[arg(long)]
    pub s: usize,
    #[arg(long = "N")]
    pub n: u32,
}

#[derive(Args, Debug, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct ChooseDepthArgs {
    #[arg(long = "f")]
    pub f: PathBuf,
    #[arg(long = "g")]
    pub g: PathBuf,
    #[arg(short = 'a')]
    pub a: String,
    #[arg(short = 'b')]
    pub b: String,
    #[arg(long)]
    pub alpha: String,
    #[arg(long)]
    pub beta: String,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct ApStructureArgs {
    #[arg(long)]
    pub report: PathBuf,
    #[arg(long)]
    pub eta: f64,
}

#[derive(Args, Debug, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct MobiusArgs {
    #[arg(long = "f")]
    pub f: PathBuf,
    #[arg(long = "g")]
    pub g: PathBuf,
    /// Entries `a,b,c,d` of `(a x + b)/(c x + d)`.
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: String,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: String,
    #[arg(long)]
    pub alpha: String,
    #[arg(long)]
    pub beta: String,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    /// Sample numerators and denominators are drawn from 1..=max-abs.
    #[arg(long, default_value_t = 1_000_000)]
    pub max_abs: u64,
    #[arg(long, default_value_t = 0)]
    pub n_max: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
