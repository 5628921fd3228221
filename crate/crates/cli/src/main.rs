use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fallfact::error::Error;

mod commands;
mod io;

/// Binomial-series solutions of linear difference equations.
#[derive(Parser, Debug)]
#[command(name = "fallfact", version)]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Working precision in bits.
    #[arg(long, global = true, env = "FALLFACT_PRECISION_BITS", default_value_t = 128)]
    pub precision: u32,
    /// Relative size below which a term counts as small.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub eps: f64,
    /// Largest number of terms summed.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub n_max: usize,
    /// Fraction of the coefficient list used for the χ window.
    #[arg(long, global = true, default_value_t = 0.5)]
    pub window: f64,
    /// Consecutive small terms required before a sum stops.
    #[arg(long, global = true, default_value_t = 5)]
    pub consecutive_small_terms: usize,
    /// Average the last LEVELS+1 partial sums with binomial weights.
    #[arg(long, global = true, value_name = "LEVELS")]
    pub averaging: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve an equation for its binomial-series coefficients.
    Solve {
        #[arg(long)]
        eq: PathBuf,
        /// Initial value, e.g. `a0=1`. Repeatable.
        #[arg(long, value_name = "aK=VALUE")]
        free: Vec<String>,
        /// Linear relation among initial values, e.g. `a0+2a1=0`. Repeatable.
        #[arg(long, allow_hyphen_values = true)]
        constraint: Vec<String>,
        /// Highest coefficient index.
        #[arg(long, default_value_t = 200)]
        n: usize,
        /// Write the series here instead of embedding it in the output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the growth analysis here instead of embedding it in the output.
        #[arg(long)]
        analysis: Option<PathBuf>,
    },
    /// Evaluate a series on a grid of points; CSV output.
    Eval {
        #[arg(long)]
        series: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        /// Subtract this from every point before evaluating (overrides the file).
        #[arg(long, allow_hyphen_values = true)]
        offset: Option<String>,
        /// Exit with status 4 if any point fails to converge.
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        output: CsvOutput,
    },
    /// Continue a series solution to the left through its equation; CSV output.
    ContinueEval {
        #[arg(long)]
        eq: PathBuf,
        #[arg(long)]
        series: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        /// Points with real part above this are summed directly.
        #[arg(long, allow_hyphen_values = true)]
        threshold: Option<f64>,
        #[arg(long, default_value_t = 10_000)]
        max_depth: usize,
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        output: CsvOutput,
    },
    /// Coefficient growth, classification and optional maximum-modulus fit.
    Analyze {
        #[arg(long)]
        series: PathBuf,
        /// Radii for the maximum-modulus profile, comma separated.
        #[arg(long, value_delimiter = ',')]
        radii: Vec<f64>,
        /// Points per circle for the profile.
        #[arg(long, default_value_t = 64)]
        samples: usize,
        /// Write the profile as CSV (r, M, ln_M).
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Newton polygon of an equation.
    Polygon {
        #[arg(long)]
        eq: PathBuf,
    },
    /// Riccati coefficient A(z) for `(az+b)Δ²y + cΔy + y = 0`.
    #[command(subcommand_negates_reqs = true)]
    Riccati {
        #[command(flatten)]
        params: RiccatiParams,
        #[command(subcommand)]
        action: Option<RiccatiAction>,
    },
    /// Newton series through samples f(0), f(1), …
    Interp {
        /// JSON array of sample values.
        #[arg(long)]
        samples: PathBuf,
        /// Read samples as exact rationals.
        #[arg(long)]
        exact: bool,
        /// Samples are f(A), f(A+1), …; evaluation subtracts A.
        #[arg(long, allow_hyphen_values = true)]
        offset: Option<String>,
        /// Record that the sampled function is assumed to meet the growth
        /// condition under which it equals its Newton series.
        #[arg(long)]
        assume_carlson: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert equations between Δ and shift form, or polynomials between bases.
    Convert {
        #[arg(long, conflicts_with = "poly", required_unless_present = "poly")]
        eq: Option<PathBuf>,
        /// JSON array of coefficients.
        #[arg(long)]
        poly: Option<PathBuf>,
        #[arg(long, value_enum)]
        to: Target,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the bundled example equations as JSON files.
    SeedExamples {
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct RiccatiParams {
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub c: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum RiccatiAction {
    /// Check the Riccati equation on the transform of a series solution; CSV output.
    Verify {
        #[command(flatten)]
        params: RiccatiParams,
        /// Highest coefficient index of the linear solution.
        #[arg(long, default_value_t = 150)]
        n: usize,
        /// JSON array of points; without it, random points are drawn.
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        random: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Initial value for the linear solution. Without any initial data the
        /// solution with fastest-decaying coefficients is used.
        #[arg(long, value_name = "aK=VALUE")]
        free: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        constraint: Vec<String>,
        /// Exit with status 4 if any residual exceeds this.
        #[arg(long)]
        max_residual: Option<f64>,
        #[command(flatten)]
        output: CsvOutput,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Delta,
    Shift,
    Binomial,
    Monomial,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GridArgs {
    /// A single point such as `2.5` or `-1.5+0.5i`. Repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Vec<String>,
    /// Rectangle `X0,X1,NX,Y0,Y1,NY`.
    #[arg(long, allow_hyphen_values = true)]
    pub rect: Option<String>,
    /// Circle `R,SAMPLES`. Repeatable.
    #[arg(long)]
    pub circle: Vec<String>,
    /// JSON array of points.
    #[arg(long)]
    pub points: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct CsvOutput {
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print values with this many significant digits instead of as f64.
    #[arg(long)]
    pub digits: Option<usize>,
}

/// Exit status for a library error: 2 for mathematical obstructions, 3 for bad
/// input, 4 for numerical failure.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SingularIndex { .. } | Error::Underdetermined { .. } | Error::Inconsistent | Error::Pole { .. } => 2,
        Error::Parse(_)
        | Error::InvalidInput(_)
        | Error::RegimeMismatch
        | Error::TooShort { .. }
        | Error::FreeIndexOutOfRange { .. }
        | Error::Json(_)
        | Error::Io(_) => 3,
        Error::EvaluationOverflow { .. }
        | Error::NotConverged { .. }
        | Error::DepthExceeded { .. }
        | Error::InsufficientProfile { .. } => 4,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
