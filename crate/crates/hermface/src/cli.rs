//! Command line: parsing, dispatch and output.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hermface_core::rp5::canonical_body;
use hermface_core::Field;

use crate::formats::ConfigDoc;
use crate::report::RunReport;
use crate::seed::{DEFAULT_SEED, SEED_ENV};
use crate::suites::{self, SuiteConfig, UsageError};

#[derive(Debug, Parser)]
#[command(name = "hermface", version, about = "Checks on face lattices of Hermitian PSD cones and related bodies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// R, C, H or O.
    #[arg(long, global = true, value_parser = parse_field)]
    pub field: Option<Field>,
    /// Matrix size; by default each suite cycles through small sizes.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true, env = SEED_ENV)]
    pub seed: Option<u64>,
    /// Overrides the main tolerance of each check.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the output to a file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Record wall time per check (the report is then not reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Face lattice of C_n(F): subspace identities, modular law, radial extension, dimensions.
    VerifyCone,
    /// Face lattices of the polytope corpus.
    VerifyLattice {
        #[arg(long)]
        shape: Option<String>,
    },
    /// Points and lines of the octonionic plane in H3(O).
    VerifyAlbert,
    /// The five-dimensional body with the real projective plane as face lattice.
    R5 {
        #[command(subcommand)]
        action: Option<R5Action>,
    },
    /// Sections of PSD cones by singular functionals.
    Sections {
        #[command(subcommand)]
        action: Option<SectionsAction>,
    },
    /// Every suite at default settings.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum R5Action {
    /// Run the checks (the default).
    Report,
    /// Print the exact seven-point configuration.
    Config,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum SectionsAction {
    /// Run the checks on the section by E11 (the default).
    Demo,
}

fn parse_field(s: &str) -> Result<Field, String> {
    Field::parse(s).ok_or_else(|| format!("unknown field {s:?}; expected R, C, H or O"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub suite: SuiteConfig,
    pub json: bool,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, UsageError> {
        let o = cli.options;
        if let Some(t) = o.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(UsageError::Combination(format!("--tol must be positive, got {t}")));
            }
        }
        if cli.command == Command::All && (o.field.is_some() || o.n.is_some()) {
            return Err(UsageError::Combination("all runs each suite on its own fields and sizes; drop --field and --n".into()));
        }
        let suite = SuiteConfig {
            field: o.field,
            n: o.n,
            trials: o.trials,
            seed: o.seed.unwrap_or(DEFAULT_SEED),
            tol: o.tol,
            timed: o.timings,
        };
        Ok(RunConfig { command: cli.command, suite, json: o.json, out: o.out })
    }

    fn name(&self) -> &'static str {
        match self.command {
            Command::VerifyCone => "verify-cone",
            Command::VerifyLattice { .. } => "verify-lattice",
            Command::VerifyAlbert => "verify-albert",
            Command::R5 { .. } => "r5",
            Command::Sections { .. } => "sections",
            Command::All => "all",
        }
    }
}

/// Runs the suites named by the configuration.
pub fn run(cfg: &RunConfig) -> Result<RunReport, UsageError> {
    let s = &cfg.suite;
    let reports = match &cfg.command {
        Command::VerifyCone => suites::cone::run(s)?,
        Command::VerifyLattice { shape } => suites::lattice::run(s, shape.as_deref())?,
        Command::VerifyAlbert => suites::albert::run(s)?,
        Command::R5 { .. } => suites::r5::run(s)?,
        Command::Sections { .. } => suites::sections::run(s)?,
        Command::All => {
            let mut all = suites::cone::run(s)?;
            all.extend(suites::lattice::run(s, None)?);
            all.extend(suites::albert::run(s)?);
            all.extend(suites::r5::run(s)?);
            all.extend(suites::sections::run(s)?);
            all
        }
    };
    Ok(RunReport::new(cfg.name(), s.seed, reports))
}

/// The text to emit and whether every check passed.
pub fn execute(cfg: &RunConfig) -> Result<(String, bool), UsageError> {
    if cfg.command == (Command::R5 { action: Some(R5Action::Config) }) {
        let cb = canonical_body().map_err(|e| UsageError::Combination(e.to_string()))?;
        let doc = serde_json::to_string_pretty(&ConfigDoc::from_canonical(&cb)).expect("strings only");
        return Ok((doc + "\n", true));
    }
    let report = run(cfg)?;
    let text = if cfg.json { report.to_json() + "\n" } else { report.to_human() };
    Ok((text, report.passed))
}
