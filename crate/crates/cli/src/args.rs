//! Command-line grammar. Every argument struct serializes to the `inputs`
//! echo of a report, keyed by long flag name, so a report can be replayed.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use reccost_core::Domain;

#[derive(Debug, Parser)]
#[command(
    name = "reccost",
    version,
    about = "Reciprocal-cost defects, calibration, stability certificates and geometry"
)]
pub struct Cli {
    /// Write the run report as JSON.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonical cost and its log forms at a point, or a function value.
    Eval(EvalArgs),
    /// Composition-law defect at one pair of points.
    Defect(DefectArgs),
    /// Supremum of the defect over a square grid.
    SupDefect(WindowArgs),
    /// Product, difference-square, double-angle and evenness violations.
    Identities(WindowArgs),
    /// Log-curvature at the origin by Richardson extrapolation.
    Calibrate(CalibrateArgs),
    /// Nearest solution branch; exit 1 when none is close enough.
    Classify(ClassifyArgs),
    /// Stability certificate on the log line; exit 1 when not verified.
    Certify(CertifyArgs),
    /// Stability certificate for a ratio-domain function; exit 1 when not verified.
    CertifyRatio(CertifyArgs),
    /// Geodesic distance between two ratios.
    Distance(DistanceArgs),
    /// Chebyshev recursion for the lifted cost.
    Chebyshev(ChebyshevArgs),
    /// Golden-ratio fixed point of x -> 1 + 1/x.
    Golden(GoldenArgs),
    /// Defect, identities, calibration, classification and certificate for one input.
    Report(ReportArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval(_) => "eval",
            Command::Defect(_) => "defect",
            Command::SupDefect(_) => "sup-defect",
            Command::Identities(_) => "identities",
            Command::Calibrate(_) => "calibrate",
            Command::Classify(_) => "classify",
            Command::Certify(_) => "certify",
            Command::CertifyRatio(_) => "certify-ratio",
            Command::Distance(_) => "distance",
            Command::Chebyshev(_) => "chebyshev",
            Command::Golden(_) => "golden",
            Command::Report(_) => "report",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainArg {
    LogLine,
    PositiveRatios,
}

impl From<DomainArg> for Domain {
    fn from(d: DomainArg) -> Self {
        match d {
            DomainArg::LogLine => Domain::LogLine,
            DomainArg::PositiveRatios => Domain::PositiveRatios,
        }
    }
}

/// Where the function under study comes from.
#[derive(Debug, Clone, Args, Serialize)]
pub struct SourceArgs {
    /// Built-in family, e.g. `cosh`, `cosh-lambda,lambda=2`, `quad-log`.
    #[arg(long, value_name = "SPEC", conflicts_with = "input", required_unless_present = "input")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,

    /// CSV sample file with header `t,H` or `x,F`.
    #[arg(long, value_name = "PATH")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,

    /// Domain of the samples; defaults to the one named by the header.
    #[arg(long, value_enum, requires = "input")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainArg>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OptionalSourceArgs {
    #[arg(long, value_name = "SPEC", conflicts_with = "input")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,

    #[arg(long, value_name = "PATH")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,

    #[arg(long, value_enum, requires = "input")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainArg>,
}

impl OptionalSourceArgs {
    pub fn into_source(self) -> Option<SourceArgs> {
        (self.family.is_some() || self.input.is_some()).then_some(SourceArgs {
            family: self.family,
            input: self.input,
            domain: self.domain,
        })
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvalArgs {
    /// Ratio at which to evaluate the canonical cost.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["t", "at"])]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,

    /// Log coordinate at which to evaluate the log forms.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "at")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,

    /// Argument at which to evaluate `--family` or `--input`.
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at: Option<f64>,

    #[command(flatten)]
    #[serde(flatten)]
    pub source: OptionalSourceArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DefectArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: SourceArgs,

    #[arg(long, allow_negative_numbers = true, requires = "u", conflicts_with_all = ["x", "y"])]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,

    #[arg(long, allow_negative_numbers = true, requires = "t")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,

    /// Ratio arguments, for ratio-domain functions.
    #[arg(long, requires = "y", required_unless_present = "t")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,

    #[arg(long, requires = "x")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WindowArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: SourceArgs,

    /// Half-width of the window.
    #[arg(long = "T", default_value_t = 1.0)]
    #[serde(rename = "T")]
    pub half_width: f64,

    /// Grid spacing.
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CalibrateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: SourceArgs,

    /// Initial spacing of the curvature quotient.
    #[arg(long, default_value_t = reccost_core::calibration::DEFAULT_H0)]
    pub h0: f64,

    /// Richardson levels.
    #[arg(long, default_value_t = reccost_core::calibration::DEFAULT_LEVELS)]
    pub levels: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ClassifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: SourceArgs,

    /// Half-width of the classification window.
    #[arg(long = "T", default_value_t = 2.0)]
    #[serde(rename = "T")]
    pub half_width: f64,

    /// Acceptance threshold on the sup residual; default 1e-6 cosh(T).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,

    /// Tolerance for the constant branches.
    #[arg(long = "const-tol", default_value_t = reccost_core::calibration::DEFAULT_CONST_TOL)]
    #[serde(rename = "const-tol")]
    pub const_tol: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CertifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: SourceArgs,

    #[arg(long = "T", default_value_t = 2.0)]
    #[serde(rename = "T")]
    pub half_width: f64,

    /// Defect grid spacing.
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,

    /// Fixed finite-difference scale; default minimizes the bound.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,

    /// Curvature override; default estimates it.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,

    /// Write the sweep as CSV with columns t,H,branch,envelope,error.
    #[arg(long = "plot-csv", value_name = "PATH")]
    #[serde(skip)]
    pub plot_csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DistanceArgs {
    #[arg(long)]
    pub x: f64,

    #[arg(long)]
    pub y: f64,

    /// Absolute quadrature tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ChebyshevArgs {
    /// Ratio for the identity-versus-direct check.
    #[arg(long, conflicts_with = "h1", required_unless_present = "h1")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,

    /// Seed value H(1) for the sequence H(0..=n).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h1: Option<f64>,

    #[arg(long)]
    pub n: u32,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GoldenArgs {
    #[arg(long, default_value_t = 1.0)]
    pub x0: f64,

    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,

    #[arg(long = "max-iter", default_value_t = 200)]
    #[serde(rename = "max-iter")]
    pub max_iter: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReportArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: SourceArgs,

    #[arg(long = "T", default_value_t = 2.0)]
    #[serde(rename = "T")]
    pub half_width: f64,

    #[arg(long, default_value_t = 0.05)]
    pub step: f64,

    #[arg(long = "plot-csv", value_name = "PATH")]
    #[serde(skip)]
    pub plot_csv: Option<PathBuf>,
}
