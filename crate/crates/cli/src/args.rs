use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "riemann-svp", version, about = "Riemann curvature, invariants and the singular value problem of the Riemann tensor")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ricci scalar, Kretschmann scalar, Weyl data and NP scalars at a point.
    Invariants(CommonArgs),
    /// Solve for singular values and report the clusters found.
    Svp(SolveArgs),
    /// Run the property checks on the configured metric and point.
    Verify(SolveArgs),
    /// Solve, then list the symmetry orbit of one solution.
    Orbit(OrbitArgs),
    /// Catalog operations.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    /// List catalog ids with their parameters and defaults.
    List(OutputArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Reduced ansatz for schwarzschild and kerr, multistart otherwise.
    Auto,
    Multistart,
    /// Schwarzschild or Kerr ansatz; the W = Y, X = Z reduction elsewhere.
    Reduced,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Multistart => "multistart",
            Method::Reduced => "reduced",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Omit the timestamp so identical runs give identical output.
    #[arg(long)]
    pub deterministic: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Catalog id or path to a metric definition file.
    #[arg(long)]
    pub metric: String,
    /// Parameters as k=v[,k=v...], e.g. M=1,a=0.5.
    #[arg(long, allow_hyphen_values = true)]
    pub params: Option<String>,
    /// Point coordinates v[,v...]; defaults to the metric's default point.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Sign pattern of (W, X, Y, Z), e.g. ++++ or +++-, or "all".
    #[arg(long, default_value = "++++", allow_hyphen_values = true)]
    pub signs: String,
    #[arg(long, default_value_t = 1e-11)]
    pub tol: f64,
    #[arg(long, default_value_t = 200)]
    pub starts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
}

#[derive(Debug, Clone, Args)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub solve: SolveArgs,
    /// Cluster index in σ order; defaults to the first nonzero cluster.
    #[arg(long)]
    pub cluster: Option<usize>,
}
