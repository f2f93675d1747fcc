//! Command-line front end for the `tolreg-core` library.

pub mod commands;
pub mod config;
pub mod format;

use clap::{Parser, Subcommand, ValueEnum};

pub use commands::{run, CliError, Output};

#[derive(Debug, Parser)]
#[command(name = "tolreg", version, about = "Interval regularization of linear systems via the tolerable solution set")]
#[command(after_long_help = config::KEYS_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// System file (JSON with keys "A", "b", optional "name").
    #[arg(long, global = true, value_name = "PATH")]
    pub system: Option<std::path::PathBuf>,

    /// Point x as comma-separated values.
    #[arg(long, global = true, value_name = "X1,X2,...", allow_hyphen_values = true)]
    pub x: Option<String>,

    /// Inflation parameter: every entry of A is widened by theta.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta: Option<f64>,

    /// Comma-separated theta values for `sweep`.
    #[arg(long, global = true, value_name = "T1,T2,...", allow_hyphen_values = true)]
    pub thetas: Option<String>,

    /// Pseudo-solution method for `regularize` and `sweep`.
    #[arg(long, global = true, value_enum, default_value_t = MethodArg::Tolmax)]
    pub method: MethodArg,

    /// Uniform right-hand side widening C [default: 0].
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub widen: Option<f64>,

    /// Grid for `tol-grid`.
    #[arg(long, global = true, value_name = "XMIN,XMAX,YMIN,YMAX,STEP", allow_hyphen_values = true)]
    pub grid: Option<String>,

    /// Flat TOML config file; keys are listed in --help.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<std::path::PathBuf>,

    /// Seed for random restarts [default: 0].
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Membership tolerance [default: 1e-9*(1 + max |b|)].
    #[arg(long, global = true)]
    pub eps: Option<f64>,

    /// Output format for `rohn-export` and `sweep`.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Evaluate Tol at --x, with the active row and a supergradient.
    TolEval,
    /// Maximize Tol, certify solvability, and cross-check with the LP.
    TolMax,
    /// Classify --x as interior, boundary or outside the tolerable set.
    Member,
    /// Decide nonemptiness of the tolerable set by linear programming.
    RohnCheck,
    /// Print the equivalent linear inequality system.
    RohnExport,
    /// List the hyperstrips whose intersection is the tolerable set.
    Strips,
    /// Vertices of the tolerable set of a two-unknown system.
    Polygon,
    /// Formal solution in Kaucher arithmetic and its pseudo-solution.
    FormalSolve,
    /// Inflate A by --theta and compute a pseudo-solution.
    Regularize,
    /// Run `regularize` for every value in --thetas.
    Sweep,
    /// Spectral condition number of a point matrix.
    Cond,
    /// Condition numbers of all endpoint matrices.
    Corners,
    /// CSV of Tol over a rectangular grid (two unknowns).
    TolGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Tolmax,
    Formal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}
