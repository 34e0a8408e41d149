//! `pendulum`: closed-form pendulum curves, trajectories and validation runs.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage or malformed input,
//! 3 separatrix or degenerate curve, 4 non-commuting matrix input.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod failure;
mod matrix_input;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use failure::Failure;

#[derive(Debug, Parser)]
#[command(name = "pendulum", version, about = "Pendulum θ'' = 4c·sin θ via the Weierstrass ℘ function")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Elliptic curve, lattice and initial point for one initial condition.
    Curve(CurveArgs),
    /// Sampled trajectory `t, θ, θ', E`.
    Trajectory(TrajectoryArgs),
    /// Closed form against the numerical oracle.
    Validate(ValidateArgs),
    /// Commuting Hermitian matrix pendulum from a JSON input file.
    Matrix(MatrixArgs),
    /// Lattice points, fundamental parallelogram and torus path.
    Lattice(LatticeArgs),
}

/// Initial condition shared by the scalar subcommands.
#[derive(Debug, Clone, Copy, Args)]
struct ConfigArgs {
    /// Coupling constant in θ'' = 4c·sin θ.
    #[arg(long, allow_negative_numbers = true)]
    c: f64,
    #[arg(long, allow_negative_numbers = true)]
    theta0: f64,
    #[arg(long, allow_negative_numbers = true)]
    omega0: f64,
}

#[derive(Debug, Args)]
struct CurveArgs {
    #[arg(long, allow_negative_numbers = true, required_unless_present = "replay")]
    c: Option<f64>,
    #[arg(long, allow_negative_numbers = true, required_unless_present = "replay")]
    theta0: Option<f64>,
    #[arg(long, allow_negative_numbers = true, required_unless_present = "replay")]
    omega0: Option<f64>,
    /// Rebuild the curve stored in a previous `curve` output and check it matches.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["c", "theta0", "omega0"])]
    replay: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Weierstrass,
    Jacobi,
    Ode,
}

#[derive(Debug, Args)]
struct TrajectoryArgs {
    #[command(flatten)]
    cfg: ConfigArgs,
    #[arg(long, default_value_t = 10.0)]
    t_max: f64,
    #[arg(long, default_value_t = 1001)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, value_enum, default_value_t = Method::Weierstrass)]
    method: Method,
    /// Relative tolerance of the oracle for `--method ode`.
    #[arg(long, default_value_t = 1e-10)]
    oracle_rtol: f64,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[command(flatten)]
    cfg: ConfigArgs,
    #[arg(long, default_value_t = 100.0)]
    t_max: f64,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Largest accepted |θ_closed − θ_oracle|.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Relative tolerance of the oracle; the absolute tolerance is 1% of it.
    #[arg(long, default_value_t = 1e-10)]
    oracle_rtol: f64,
}

#[derive(Debug, Args)]
struct MatrixArgs {
    #[arg(long, value_name = "FILE")]
    input_file: PathBuf,
    #[arg(long, allow_negative_numbers = true, default_value_t = -1.0)]
    c: f64,
    #[arg(long, default_value_t = 10.0)]
    t_max: f64,
    #[arg(long, default_value_t = 11)]
    samples: usize,
    /// Commutation tolerance, relative to ‖θ₀‖ + ‖θ'₀‖.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Debug, Args)]
struct LatticeArgs {
    #[command(flatten)]
    cfg: ConfigArgs,
    /// Emit lattice points nω₁ + mω₂ with |n|, |m| ≤ extent.
    #[arg(long, default_value_t = 2)]
    extent: u32,
    /// Points on the torus path over one real period.
    #[arg(long, default_value_t = 101)]
    samples: usize,
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Curve(a) => match a.replay {
            Some(path) => commands::replay(&path),
            None => commands::curve(pendulum_core::PendulumConfig::new(
                a.c.expect("required by clap"),
                a.theta0.expect("required by clap"),
                a.omega0.expect("required by clap"),
            )),
        },
        Command::Trajectory(a) => commands::trajectory(&a),
        Command::Validate(a) => commands::validate(&a),
        Command::Matrix(a) => commands::matrix(&a),
        Command::Lattice(a) => commands::lattice(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(text) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::FAILURE;
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            if let Some(text) = &f.stdout {
                print!("{text}");
            }
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
