use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "expsum",
    version,
    about = "Exponential-sum mean values over real and p-adic sparse domains",
    args_override_self = true
)]
pub struct Cli {
    /// Worker threads (default: all cores). Does not change results.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Optional `key=value` file; its entries act as flags placed before
    /// the command-line flags, which therefore win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// CSV destination; `-` for stdout. Defaults to `<command>.csv` in
    /// `$EXPSUM_OUT_DIR` or the current directory.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Traces Tr(α^κ) for κ = 0..=kappa-max.
    Traces(TracesArgs),
    /// Trace-expanded phase system of a minimal polynomial.
    PhaseSystem(PhaseSystemArgs),
    /// Cells of a sparse domain.
    DomainCells(DomainCellsArgs),
    /// p-adic short mean value.
    MvPadic(MeanValueArgs),
    /// Real sparse mean value by cell quadrature.
    MvReal(MeanValueArgs),
    /// Real value against the supremum of modulated p-adic values.
    TransferCheck(TransferArgs),
    /// Sampled lower bounds for restriction constants.
    RestrictionEstimate(RestrictionArgs),
    /// Parabola ratios against the envelope N^(r/2) + N^(r-4+σ).
    CorollaryRatio(CorollaryArgs),
    /// Exact Vinogradov solution counts.
    Vinogradov(VinogradovArgs),
    /// Growth exponent of Vinogradov counts in N.
    VinogradovFit(VinogradovFitArgs),
    /// Norms and decoupling ratios of the paraboloid family.
    Counterexample(CounterexampleArgs),
    /// Square root of −1 modulo p^K.
    Hensel(HenselArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Traces(_) => "traces",
            Command::PhaseSystem(_) => "phase-system",
            Command::DomainCells(_) => "domain-cells",
            Command::MvPadic(_) => "mv-padic",
            Command::MvReal(_) => "mv-real",
            Command::TransferCheck(_) => "transfer-check",
            Command::RestrictionEstimate(_) => "restriction-estimate",
            Command::CorollaryRatio(_) => "corollary-ratio",
            Command::Vinogradov(_) => "vinogradov",
            Command::VinogradovFit(_) => "vinogradov-fit",
            Command::Counterexample(_) => "counterexample",
            Command::Hensel(_) => "hensel",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseKind {
    Parabola,
    Moment,
    Paraboloid,
    Trace,
}

#[derive(Args, Debug, Clone)]
pub struct PhaseArgs {
    #[arg(long, value_enum, default_value = "parabola")]
    pub phase: PhaseKind,
    /// Degree of the moment curve or number of trace powers.
    #[arg(long)]
    pub k: Option<u32>,
    /// Ascending coefficients `c_0,…,c_{d−1}` (for `--phase trace`).
    #[arg(long, allow_hyphen_values = true)]
    pub minpoly: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct ScaleArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long = "K")]
    pub big_k: u32,
    /// Comma list of rationals, one per phase component (default all zero).
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<String>,
    /// Cell budget.
    #[arg(long, default_value_t = crate::domains::DEFAULT_CELL_BUDGET)]
    pub budget: u64,
}

#[derive(Args, Debug, Clone)]
pub struct QuadArgs {
    /// Gauss–Legendre nodes per subcell and axis (default: chosen per axis).
    #[arg(long)]
    pub order: Option<usize>,
    /// Dyadic subdivision depth (default: chosen per axis).
    #[arg(long)]
    pub depth: Option<u32>,
    #[arg(long, default_value_t = crate::meanvalue::DEFAULT_MAX_NODES)]
    pub max_nodes: u64,
}

#[derive(Args, Debug)]
pub struct TracesArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub minpoly: String,
    #[arg(long = "kappa-max")]
    pub kappa_max: usize,
}

#[derive(Args, Debug)]
pub struct PhaseSystemArgs {
    #[command(flatten)]
    pub phase: PhaseArgs,
}

#[derive(Args, Debug)]
pub struct DomainCellsArgs {
    #[command(flatten)]
    pub phase: PhaseArgs,
    #[command(flatten)]
    pub scale: ScaleArgs,
}

#[derive(Args, Debug)]
pub struct CoefficientArgs {
    /// `index,re,im` CSV; overrides `--sampler`.
    #[arg(long, value_name = "FILE")]
    pub coeffs: Option<PathBuf>,
    /// all-ones, single-point, random-phases or random-sparse.
    #[arg(long, default_value = "all-ones")]
    pub sampler: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct MeanValueArgs {
    #[command(flatten)]
    pub phase: PhaseArgs,
    #[command(flatten)]
    pub scale: ScaleArgs,
    #[arg(long)]
    pub r: f64,
    #[command(flatten)]
    pub coeffs: CoefficientArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Args, Debug)]
pub struct TransferArgs {
    #[command(flatten)]
    pub phase: PhaseArgs,
    #[command(flatten)]
    pub scale: ScaleArgs,
    #[arg(long)]
    pub r: f64,
    /// Number of random-phase coefficient vectors, seeds `seed..seed+samples`.
    #[arg(long, default_value_t = 1)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative slack on the comparison; a negative value demands a margin.
    #[arg(long, default_value_t = crate::meanvalue::DEFAULT_TRANSFER_TOL, allow_hyphen_values = true)]
    pub tol: f64,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Args, Debug)]
pub struct RestrictionArgs {
    #[command(flatten)]
    pub phase: PhaseArgs,
    #[command(flatten)]
    pub scale: ScaleArgs,
    #[arg(long)]
    pub r: f64,
    /// padic, real, or both (adds the reverse-bound factor as comments).
    #[arg(long, default_value = "padic")]
    pub side: String,
    #[arg(long, default_value = "all-ones,single-point,random-phases,random-sparse")]
    pub samplers: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Args, Debug)]
pub struct CorollaryArgs {
    #[arg(long)]
    pub p: u64,
    /// Comma list of exponents K.
    #[arg(long = "K")]
    pub ks: String,
    #[arg(long)]
    pub sigma: String,
    #[arg(long)]
    pub r: f64,
    #[arg(long, default_value = "all-ones,single-point,random-phases,random-sparse")]
    pub samplers: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMethodArg {
    Hash,
    Brute,
    Formal,
}

#[derive(Args, Debug)]
pub struct VinogradovArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub minpoly: String,
    /// Degree check; must match the minimal polynomial.
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub s: u32,
    #[arg(long)]
    pub k: u32,
    /// Comma list of N values.
    #[arg(long = "N")]
    pub ns: String,
    #[arg(long, value_enum, default_value = "hash")]
    pub method: CountMethodArg,
    /// Fill the seconds column (otherwise 0, keeping output reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Debug)]
pub struct VinogradovFitArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub minpoly: String,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub s: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long = "N")]
    pub ns: String,
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Debug)]
pub struct CounterexampleArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub kmax: u32,
    /// Comma list of exponents r.
    #[arg(long, default_value = "6")]
    pub r: String,
}

#[derive(Args, Debug)]
pub struct HenselArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long = "K")]
    pub big_k: u32,
}
