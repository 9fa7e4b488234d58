//! `mvcheb`: exact tables and verification runs from the command line.
//!
//! Exit codes: 0 on success, 1 when a verification suite fails, 2 on a
//! usage error.

mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mvcheb::Rational;

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "mvcheb", version, about = "Matrix-valued Chebyshev polynomials, exactly")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Print binary floats instead of exact fractions.
    #[arg(long, global = true)]
    float: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// The weight, its LDU factors and determinant.
    Weight {
        #[command(flatten)]
        spin: Spin,
        #[arg(long, value_enum, default_value_t = Domain::X)]
        domain: Domain,
    },
    /// Monic polynomials with recurrence coefficients and squared norms.
    Polys {
        #[command(flatten)]
        spin: Spin,
        /// A single degree.
        #[arg(long, conflicts_with = "degree_max")]
        degree: Option<usize>,
        /// All degrees from 0 up to this one.
        #[arg(long)]
        degree_max: Option<usize>,
        #[arg(long, value_enum, default_value_t = Domain::X)]
        domain: Domain,
    },
    /// Structure matrices and the hypergeometric rows of `R_n`.
    Hyp {
        #[command(flatten)]
        spin: Spin,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        /// Parameter of the operator family; picked automatically if absent.
        #[arg(long, value_parser = parse_alpha, allow_hyphen_values = true)]
        alpha: Option<Rational>,
    },
    /// Run verification suites.
    Verify {
        /// Suite name, or `all`.
        #[arg(long, default_value = "all", value_parser = suite_names())]
        suite: String,
        #[arg(long, default_value_t = 3)]
        two_ell_max: usize,
        #[arg(long, default_value_t = 4)]
        degree_max: usize,
        /// Fixed parameter for the `2h1` suite.
        #[arg(long, value_parser = parse_alpha, allow_hyphen_values = true)]
        alpha: Option<Rational>,
    },
    /// Float values of the monic polynomial and the weight at a point.
    Eval {
        #[command(flatten)]
        spin: Spin,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        /// Evaluation point.
        #[arg(long, allow_hyphen_values = true)]
        x0: f64,
        /// Digits after the decimal point; shortest round-trip form if absent.
        #[arg(long)]
        precision: Option<usize>,
        #[arg(long, value_enum, default_value_t = Domain::X)]
        domain: Domain,
    },
}

#[derive(Args, Debug)]
struct Spin {
    /// Twice the spin, `2ℓ`.
    #[arg(long, default_value_t = 1)]
    two_ell: usize,
}

/// `x ∈ [-1, 1]` or `u = (1 - x)/2 ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Domain {
    X,
    U,
}

impl Domain {
    pub fn var(self) -> &'static str {
        match self {
            Domain::X => "x",
            Domain::U => "u",
        }
    }
}

fn parse_alpha(s: &str) -> Result<Rational, String> {
    mvcheb::exact::parse_rational(s).map_err(|e| e.to_string())
}

fn suite_names() -> clap::builder::PossibleValuesParser {
    let mut names: Vec<&'static str> = mvcheb::verify::SUITES.to_vec();
    names.push("all");
    clap::builder::PossibleValuesParser::new(names)
}

/// Failures that are the caller's fault.
#[derive(Debug)]
pub struct UsageError(pub String);

impl From<mvcheb::Error> for UsageError {
    fn from(e: mvcheb::Error) -> Self {
        UsageError(e.to_string())
    }
}

fn init_threads() -> Result<(), UsageError> {
    let Ok(v) = std::env::var("MVCHEB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| UsageError(format!("MVCHEB_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| UsageError(e.to_string()))
}

fn run(cli: Cli) -> Result<(String, bool), UsageError> {
    init_threads()?;
    let (report, ok) = match cli.cmd {
        Cmd::Weight { spin, domain } => (commands::weight(spin.two_ell, domain, cli.float), true),
        Cmd::Polys { spin, degree, degree_max, domain } => {
            let degrees = match (degree, degree_max) {
                (_, Some(m)) => (0..=m).collect(),
                (Some(n), None) => vec![n],
                (None, None) => vec![1],
            };
            (commands::polys(spin.two_ell, &degrees, domain, cli.float)?, true)
        }
        Cmd::Hyp { spin, degree, alpha } => (commands::hyp(spin.two_ell, degree, alpha, cli.float)?, true),
        Cmd::Verify { suite, two_ell_max, degree_max, alpha } => {
            let params = mvcheb::verify::VerifyParams { two_l_max: two_ell_max, degree_max, alpha };
            commands::verify(&suite, &params)?
        }
        Cmd::Eval { spin, degree, x0, precision, domain } => {
            (commands::eval(spin.two_ell, degree, x0, precision, domain)?, true)
        }
    };
    Ok((report.render(cli.format), ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, ok)) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(2);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
