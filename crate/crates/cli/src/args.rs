use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ratlin::{Side, Tolerances, DEFAULT_SEED};

#[derive(Debug, Parser)]
#[command(name = "ratlin", version, about = "Linearize and solve rational eigenvalue problems")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Output mode.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table, env = "RATLIN_FORMAT")]
    pub format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    pub json: bool,
    /// Relative singular value cutoff for rank decisions.
    #[arg(long, global = true, env = "RATLIN_TOL_RANK")]
    pub tol_rank: Option<f64>,
    /// Eigenvalue coincidence tolerance, relative to max(1, |λ|).
    #[arg(long, global = true, env = "RATLIN_TOL_MATCH")]
    pub tol_match: Option<f64>,
    /// Relative residual bound for recovered eigenvectors.
    #[arg(long, global = true, env = "RATLIN_TOL_RESIDUAL")]
    pub tol_residual: Option<f64>,
    /// Seed for presets and randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED, env = "RATLIN_SEED")]
    pub seed: u64,
}

impl Global {
    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }

    pub fn tolerances(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            rank: self.tol_rank.or(d.rank),
            matching: self.tol_match.unwrap_or(d.matching),
            residual: self.tol_residual.unwrap_or(d.residual),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Realization JSON file: {"A":…,"B":…,"C":…,"D":…}.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Built-in realization: paper-sec5, degree-pattern or hidden-mode.
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Debug, Args)]
pub struct Input {
    #[command(flatten)]
    pub source: Source,
    /// Grade of the state block; must not be below the default.
    #[arg(long)]
    pub grade_a: Option<usize>,
    /// Grade of the feedthrough block; must not be below the default.
    #[arg(long)]
    pub grade_d: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the block pencil L1·λ + L0 and export it.
    Linearize {
        #[command(flatten)]
        input: Input,
        /// Write the JSON export here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Poles, zeros and eigenvectors with their minimality certificates.
    Eigs {
        #[command(flatten)]
        input: Input,
    },
    /// Invariant orders at infinity.
    Infinity {
        #[command(flatten)]
        input: Input,
    },
    /// Minimal basis of the left or right null space.
    Nullspace {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = SideArg::Right)]
        side: SideArg,
    },
    /// Roots of a(λ)⁻¹c(λ) = b(λ)⁻¹d(λ).
    ///
    /// Coefficients are comma-separated in ascending degree, each `re` or
    /// `re+imi`; `a, c` are monomial and `b, d` Chebyshev.
    Scalar {
        /// Denominator on the left, monomial.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Numerator on the left, monomial.
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Denominator on the right, Chebyshev.
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// Numerator on the right, Chebyshev.
        #[arg(long, allow_hyphen_values = true)]
        d: String,
    },
    /// Re-check every identity the construction relies on.
    Check {
        #[command(flatten)]
        source: Source,
    },
}
