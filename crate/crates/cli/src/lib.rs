//! Command-line front end: analysis and verification runs that emit JSON
//! reports.
//!
//! Exit codes: `0` when every check passes, `1` when a check fails, `2` for
//! usage and input errors (message on stderr).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use liedeform_core::sampling::DEFAULT_SEED;
use liedeform_core::LieError;

pub mod act;
pub mod algebra;
pub mod catalog_cmd;
pub mod deform;
pub mod report;
pub mod scenarios;
pub mod vf;

pub use report::{emit_report, Check, Report};

/// Environment variable overriding the default seed.
pub const SEED_ENV: &str = "LIETOOL_SEED";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] LieError),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "liedeform",
    version,
    about = "Lie algebra invariants, deformations and actions"
)]
struct Cli {
    /// Seed for all sampled checks (default: $LIETOOL_SEED, then 20260101).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Structure-constant analysis.
    Algebra {
        #[command(subcommand)]
        cmd: AlgebraCmd,
    },
    /// Deformation families.
    Deform {
        #[command(subcommand)]
        cmd: DeformCmd,
    },
    /// Group actions.
    Act {
        #[command(subcommand)]
        cmd: ActCmd,
    },
    /// Polynomial vector fields.
    Vf {
        #[command(subcommand)]
        cmd: VfCmd,
    },
    /// Named algebras and built-in scenarios.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
}

#[derive(Debug, Subcommand)]
enum AlgebraCmd {
    /// Series, lengths, center, derivations and the contractibility test.
    Analyze {
        /// A JSON file or `catalog:NAME`.
        source: String,
    },
    /// Dimension bounds and borderline verdicts.
    Obstruct {
        source: String,
        /// Manifold dimension to rule on.
        #[arg(long)]
        dim: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum DeformCmd {
    /// Check a deformation family on sampled elements and times.
    Verify {
        /// st, st-prime, concat, group-st, group-u, bump-st or bump-u.
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum ActCmd {
    /// Check an action scenario on sampled points and elements.
    Verify {
        /// A JSON file or `builtin:NAME`.
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum VfCmd {
    /// Exact certificates plus flow checks.
    Verify {
        #[arg(long)]
        scenario: String,
    },
    /// Integrate a flow scenario.
    Flow {
        #[arg(long)]
        scenario: String,
        /// Write the trajectory as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogCmd {
    /// Print every named algebra and built-in scenario.
    List,
}

/// Seed precedence: flag, then environment, then [`DEFAULT_SEED`].
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> CliResult<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match env {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::input(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        None => Ok(DEFAULT_SEED),
    }
}

/// Parses `argv` (including the program name), runs the command and writes
/// the report. Returns the exit code.
pub fn run<I, T>(argv: I, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match dispatch(&cli, env_seed) {
        Ok(report) => {
            let text = emit_report(&report);
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &text)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(msg) = written {
                let _ = writeln!(err, "error: {msg}");
                return 2;
            }
            if !report.passed() {
                let _ = writeln!(err, "violations: {}", report.violations().join(", "));
            }
            report.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(cli: &Cli, env_seed: Option<&str>) -> CliResult<Report> {
    let seed = resolve_seed(cli.seed, env_seed)?;
    match &cli.command {
        Command::Algebra { cmd } => match cmd {
            AlgebraCmd::Analyze { source } => algebra::analyze(source, seed),
            AlgebraCmd::Obstruct { source, dim } => algebra::obstruct(source, *dim, seed),
        },
        Command::Deform {
            cmd: DeformCmd::Verify { family, n, samples },
        } => deform::verify(family, *n, *samples, seed),
        Command::Act {
            cmd: ActCmd::Verify { scenario, samples },
        } => {
            let s = scenarios::load_act(scenario)?;
            act::run(&s, *samples, seed)
        }
        Command::Vf { cmd } => match cmd {
            VfCmd::Verify { scenario } => {
                let s = scenarios::load_vf(scenario)?;
                vf::verify(&s, seed)
            }
            VfCmd::Flow { scenario, csv } => {
                let s = scenarios::load_vf(scenario)?;
                let (report, trajectory) = vf::flow_run(&s, seed)?;
                if let (Some(path), Some(tr)) = (csv, trajectory) {
                    std::fs::write(path, tr.to_csv()).map_err(|e| {
                        CliError::input(format!("cannot write {}: {e}", path.display()))
                    })?;
                }
                Ok(report)
            }
        },
        Command::Catalog {
            cmd: CatalogCmd::List,
        } => Ok(catalog_cmd::list(seed)),
    }
}

pub(crate) fn read_file(path: &str) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {path}: {e}")))
}
