//! `delta-kernels` command-line front end.
//!
//! Exit codes: 0 success, 1 test failure, 2 usage or config error,
//! 3 numerical failure.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "delta-kernels", version, about = "Delta-sequence kernels: evaluation, convergence experiments and self-tests")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a kernel at one or more points.
    KernelEval(KernelEvalArgs),
    /// Run a convergence experiment described by a config file.
    Converge(ConvergeArgs),
    /// Fit the decay exponent of an asymptotic-form residual.
    ValidateAsymptotics(AsymptoticsArgs),
    /// Integrate a test function against sin or cos of a phase for several R.
    RlCheck(RlArgs),
    /// Run the built-in pass/fail suites.
    Selftest(SelftestArgs),
}

#[derive(Args)]
pub struct KernelEvalArgs {
    /// bessel, coulomb, airy, weber, legendre, hermite, laguerre, spherical,
    /// gaussian, cauchy or sinc
    #[arg(long)]
    pub family: String,
    #[arg(long, allow_negative_numbers = true)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub l: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Anchor of an integral or classical kernel (b-anchor a for weber).
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Integration variable for integral and classical kernels; anchor for
    /// the series kernels. Repeat for several rows.
    #[arg(long, allow_negative_numbers = true)]
    pub x: Vec<f64>,
    /// Series variable.
    #[arg(long, allow_negative_numbers = true)]
    pub t: Vec<f64>,
    /// Cutoff of an integral kernel.
    #[arg(long = "R")]
    pub r: Option<f64>,
    /// Order of a series kernel, or index of a classical sequence.
    #[arg(long)]
    pub n: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub phi1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub phi2: Option<f64>,
}

#[derive(Args)]
pub struct ConvergeArgs {
    /// Experiment file in the flat key = value format.
    pub config: std::path::PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum AsymptoticFamily {
    Bessel,
    Coulomb,
    Airy,
    Weber,
}

#[derive(Args)]
pub struct AsymptoticsArgs {
    #[arg(long, value_enum)]
    pub family: AsymptoticFamily,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub nu: f64,
    #[arg(long, default_value_t = 0)]
    pub l: u32,
    /// x for bessel, coulomb and airy; a for weber.
    #[arg(long, allow_negative_numbers = true)]
    pub param: f64,
    #[arg(long)]
    pub t_lo: f64,
    #[arg(long)]
    pub t_hi: f64,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Wave {
    Sin,
    Cos,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum PhaseName {
    Linear,
    Bessel,
    Coulomb,
    Airy,
    Weber,
}

#[derive(Args)]
pub struct RlArgs {
    /// Catalog id of psi.
    #[arg(long)]
    pub psi: String,
    #[arg(long, value_enum)]
    pub wave: Wave,
    #[arg(long, value_enum)]
    pub phase: PhaseName,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub nu: f64,
    #[arg(long, default_value_t = 0)]
    pub l: u32,
    #[arg(long, allow_negative_numbers = true, default_value_t = f64::NEG_INFINITY)]
    pub lo: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = f64::INFINITY)]
    pub hi: f64,
    /// Comma-separated cutoffs.
    #[arg(long = "R", value_delimiter = ',', required = true)]
    pub r: Vec<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Fast,
    Full,
}

#[derive(Args)]
pub struct SelftestArgs {
    #[arg(value_enum)]
    pub level: Level,
    #[arg(long, default_value_t = 20_240_601)]
    pub seed: u64,
    /// Scale the closed-form Airy kernel by 1 + 1e-3 in the oracle suite.
    #[arg(long, hide = true)]
    pub perturb_airy: bool,
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numerical(String),
    Tests,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Tests => 1,
            Failure::Usage(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("DELTA_KERNELS_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n >= 1)
        .ok_or_else(|| Failure::Usage(format!("DELTA_KERNELS_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::KernelEval(a) => commands::kernel_eval(&a),
        Command::Converge(a) => commands::converge(&a),
        Command::ValidateAsymptotics(a) => commands::validate_asymptotics(&a),
        Command::RlCheck(a) => commands::rl_check(&a),
        Command::Selftest(a) => commands::selftest(&a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}\n\nRun with --help for usage."),
                Failure::Numerical(m) => eprintln!("numerical failure: {m}"),
                Failure::Tests => {}
            }
            ExitCode::from(f.code())
        }
    }
}
