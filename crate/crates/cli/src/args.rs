use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "summability",
    version = summability::VERSION.trim_start_matches("summability "),
    about = "Index-of-summability calculator and growth-exponent experiments"
)]
pub struct Cli {
    /// Output format for results printed to stdout.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// Seed for every random choice: the construction draw, the ascent
    /// restarts and the first of the --seeds run by estimate. Defaults to 0.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// TOML file with per-preset experiment settings.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// TOML cotype table replacing the bundled one.
    #[arg(long, global = true)]
    pub cotype_table: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form bounds on the index for one parameter set.
    Bounds(BoundsArgs),
    /// Build an extremal operator and save it in the binary form format.
    Construct(ConstructArgs),
    /// Operator norm of a saved form.
    Norm(NormArgs),
    /// Run a dimension sweep and fit the growth exponent.
    Estimate(EstimateArgs),
    /// Compare a slope with the closed-form bounds.
    Verify(VerifyArgs),
    /// List the built-in experiment presets.
    Presets,
    /// Merge JSON-lines artifacts into one table.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Mult,
    Pol,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Real,
    Complex,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[arg(long, value_enum, default_value_t = VariantArg::Mult)]
    pub variant: VariantArg,
    /// Degree.
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub q: f64,
    #[arg(long, value_enum, default_value_t = FieldArg::Real)]
    pub field: FieldArg,
    /// Domain space: lq-star, l:S, c0, scalar or abstract.
    #[arg(long, default_value = "lq-star")]
    pub domain: String,
    /// Cotype of an abstract domain, or an override for a sequence space.
    #[arg(long)]
    pub domain_cotype: Option<String>,
    /// Codomain space: scalar, c0, l:S or abstract. Defaults to abstract
    /// when --cotype is given and to scalar otherwise.
    #[arg(long)]
    pub codomain: Option<String>,
    /// Cotype of the codomain.
    #[arg(long)]
    pub cotype: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Formula {
    MultUpperFromCoincidence,
    PolUpperFromCoincidence,
    CotypeCoincidenceT,
    ScalarCoincidenceS,
    CornbdUpper,
    ExactIndexScalar,
    ExactIndexC0,
    PolExactQ1,
    MpsLower,
    CotiponLower,
    EvenRealLower,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub query: QueryArgs,
    /// Evaluate a single formula instead of aggregating; its hypotheses are
    /// checked and a violation exits with status 2.
    #[arg(long, value_enum)]
    pub formula: Option<Formula>,
    /// Coincidence exponent t.
    #[arg(long)]
    pub t: Option<f64>,
    /// Coincidence exponent s.
    #[arg(long)]
    pub s: Option<f64>,
    /// Cotype r, for formulas that take it directly.
    #[arg(long)]
    pub r: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Ksz,
    Diagonal,
    Coordinate,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    /// Exponent of every domain slot.
    #[arg(long, default_value = "2")]
    pub exponent: String,
    /// Where to write the form.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Analytic,
    Ascent,
    Bruteforce,
}

#[derive(Debug, Args)]
pub struct AscentArgs {
    /// Random restarts of the ascent.
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Relative improvement below which a restart stops.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Run on one thread.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    /// A form written by `construct`.
    #[arg(long)]
    pub form: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Ascent)]
    pub method: MethodArg,
    /// Replace the exponents stored in the form.
    #[arg(long)]
    pub exponent: Option<String>,
    /// Angular grid resolution for brute force.
    #[arg(long, default_value_t = 64)]
    pub resolution: usize,
    #[command(flatten)]
    pub ascent: AscentArgs,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// A built-in preset; see `summability presets`.
    #[arg(long, conflicts_with = "scenario")]
    pub preset: Option<String>,
    /// A scenario: ksz_scalar, diagonal_scalar, coordinate_c0 or custom.
    #[arg(long)]
    pub scenario: Option<String>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    /// Comma-separated, strictly increasing dimensions.
    #[arg(long, value_delimiter = ',')]
    pub n_grid: Option<Vec<usize>>,
    /// Number of seeds, counted up from --seed.
    #[arg(long)]
    pub seeds: Option<u64>,
    #[arg(long, value_enum)]
    pub norm_method: Option<MethodArg>,
    /// Construction of a custom scenario.
    #[arg(long, value_enum)]
    pub construction: Option<Kind>,
    /// Domain exponent of a custom scenario.
    #[arg(long)]
    pub domain_exponent: Option<String>,
    #[arg(long)]
    pub resolution: Option<usize>,
    #[command(flatten)]
    pub ascent: AscentArgs,
    /// Directory for the CSV, JSON-lines and run-record artifacts.
    #[arg(long, default_value = "summability-out")]
    pub out_dir: PathBuf,
    /// Compare the median slope with the closed-form bounds.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub query: QueryArgs,
    #[arg(long)]
    pub slope: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Also require the slope to reach the exact value.
    #[arg(long)]
    pub extremal: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// JSON-lines artifacts written by `estimate`.
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
}
