mod args;
mod coeffs;
mod output;
mod render;

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use ratlin::linbuild::{self, Realization, StructuredLinearization};
use ratlin::scalareq::ScalarEquation;
use ratlin::{eigsolve, recover, scalareq, verify, Error};
use serde::Serialize;

use args::{Cli, Command, Format, Global, Input, Source};
use output::{EigsOutput, InfinityOutput};

/// Exit 1 for mathematical or precondition failures, 2 for I/O and parsing.
#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error(transparent)]
    Math(Error),
    #[error("{0}")]
    Input(String),
    /// The report was printed; some of its checks failed.
    #[error("verification failed")]
    Checks,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Math(_) | Failure::Checks => 1,
            Failure::Input(_) => 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Json(_) | Error::Malformed(_) | Error::UnknownPreset(_) => Failure::Input(e.to_string()),
            other => Failure::Math(other),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn load(source: &Source, seed: u64) -> Result<Realization, Failure> {
    match (&source.input, &source.preset) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            Ok(Realization::from_json(&text)?)
        }
        (None, Some(name)) => Ok(verify::preset(name, seed)?),
        (None, None) => Err(Failure::Input("one of --input or --preset is required".into())),
    }
}

fn linearization(input: &Input, seed: u64) -> Result<StructuredLinearization, Failure> {
    let r = load(&input.source, seed)?;
    let (da, dd) = r.default_grades();
    Ok(linbuild::build_with_grades(
        &r,
        input.grade_a.unwrap_or(da),
        input.grade_d.unwrap_or(dd),
    )?)
}

fn emit<T: Serialize>(global: &Global, value: &T, table: impl FnOnce(&T) -> String) -> Outcome {
    let text = match global.format() {
        Format::Json => ratlin::json::to_string(value)? + "\n",
        Format::Table => table(value),
    };
    match io::stdout().lock().write_all(text.as_bytes()) {
        // A closed pipe means the reader has what it wanted.
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::Input(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Outcome {
    let g = &cli.global;
    let tol = g.tolerances();
    match cli.command {
        Command::Linearize { input, output } => {
            let export = linearization(&input, g.seed)?.export();
            match output {
                Some(path) => {
                    let text = ratlin::json::to_string(&export)?;
                    fs::write(&path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
                }
                None => emit(g, &export, render::linearize),
            }
        }
        Command::Eigs { input } => {
            let sl = linearization(&input, g.seed)?;
            let out = EigsOutput {
                spectral: eigsolve::classify(&sl, &tol)?,
                eigenpairs: recover::eigenpairs(&sl, &tol)?,
                minimality: recover::minimality_proxy(&sl, &tol)?,
            };
            emit(g, &out, render::eigs)
        }
        Command::Infinity { input } => {
            let sl = linearization(&input, g.seed)?;
            let out = InfinityOutput {
                orders: eigsolve::invariant_orders_at_infinity(&sl, &tol)?,
                grade: sl.rho_d + 1,
                minimality: recover::minimality_proxy(&sl, &tol)?,
            };
            emit(g, &out, render::infinity)
        }
        Command::Nullspace { input, side } => {
            let sl = linearization(&input, g.seed)?;
            let out = match side {
                args::SideArg::Right => recover::recover_right_minimal_basis(&sl, &tol)?,
                args::SideArg::Left => recover::recover_left_minimal_basis(&sl, &tol)?,
            };
            emit(g, &out, render::nullspace)
        }
        Command::Scalar { a, c, b, d } => {
            let parse =
                |flag: &str, s: &str| coeffs::parse_list(s).map_err(|e| Failure::Input(format!("--{flag}: {e}")));
            let eq =
                ScalarEquation::from_coeffs(&parse("a", &a)?, &parse("c", &c)?, &parse("b", &b)?, &parse("d", &d)?)?;
            emit(g, &scalareq::solve_scalar(&eq, &tol)?, render::scalar)
        }
        Command::Check { source } => {
            let r = load(&source, g.seed)?;
            let report = verify::run_all_with(&r, &tol, g.seed)?;
            emit(g, &report, render::check)?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
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
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, Failure::Checks) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.code())
        }
    }
}
