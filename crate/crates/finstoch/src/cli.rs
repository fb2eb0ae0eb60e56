//! Command-line surface: thin dispatch over the library modules.
//!
//! Exit codes: 0 — success and all embedded theorem checks passed;
//! 1 — validation error (bad spec, bad arguments); 2 — a theorem check
//! failed (a counterexample is emitted).

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::chainspec::ChainSpec;
use crate::error::{Error, Result};
use crate::laws::{self, CaseGen};
use crate::rational::parse_rat;
use crate::report;
use crate::space::{Dist, FinSpace};

#[derive(Parser)]
#[command(
    name = "finstoch",
    version,
    about = "Exact-rational analysis of finite stochastic dynamical systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum Format {
    #[default]
    Report,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Invariant blocks, equilibrium idempotent, ergodic decomposition, and
    /// equilibrium checks of a chain spec
    Analyze {
        spec: PathBuf,
        /// Include the strictly invariant partition and its comparison
        #[arg(long)]
        strict: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Strictify and split the generator flagged "idempotent": true
    Split {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Orbit structure and orbit decomposition of an exchangeable measure
    /// on a product space
    Exchangeable {
        /// Comma-separated base state labels, e.g. 0,1
        #[arg(long)]
        base: String,
        /// Product exponent
        #[arg(long)]
        n: usize,
        /// "uniform", "iid:w1,...,wk", "@file.json", or an inline
        /// comma-separated list of k^n rationals
        #[arg(long, default_value = "uniform")]
        dist: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run the categorical law suites on seeded random instances
    Axioms {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        /// Run a single law by name (default: all)
        #[arg(long)]
        law: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Decide whether two specs describe isomorphic probability spaces
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Emit the transition graph in DOT format, colored by invariant block
    Dot { spec: PathBuf },
}

impl Command {
    fn format(&self) -> Format {
        match self {
            Command::Analyze { format, .. }
            | Command::Split { format, .. }
            | Command::Exchangeable { format, .. }
            | Command::Axioms { format, .. }
            | Command::Iso { format, .. } => *format,
            Command::Dot { .. } => Format::Report,
        }
    }
}

enum Outcome {
    Pass,
    TheoremFailure,
}

/// Parses arguments from the environment and runs; returns the exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    run_command(cli.command)
}

/// Entry point with explicit arguments (used by tests).
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run_command(cli.command),
        Err(err) => {
            let _ = err.print();
            1
        }
    }
}

fn run_command(command: Command) -> i32 {
    let format = command.format();
    match execute(command) {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::TheoremFailure) => 2,
        Err(err) => {
            emit_error(format, &err);
            match err {
                Error::Internal(_) => 2,
                _ => 1,
            }
        }
    }
}

fn emit_error(format: Format, err: &Error) {
    match format {
        Format::Machine => {
            println!("{}", serde_json::json!({ "error": err.to_string() }));
        }
        Format::Report => eprintln!("error: {err}"),
    }
}

fn load_spec(path: &Path) -> Result<ChainSpec> {
    ChainSpec::parse(&std::fs::read_to_string(path)?)
}

fn print_machine<T: serde::Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("reports serialize")
    );
}

fn execute(command: Command) -> Result<Outcome> {
    match command {
        Command::Analyze {
            spec,
            strict,
            format,
            seed,
        } => {
            let built = load_spec(&spec)?.build()?;
            let analysis = report::analyze(&built, strict, seed);
            match format {
                Format::Machine => print_machine(&analysis),
                Format::Report => print!("{}", report::render_analysis(&analysis)),
            }
            Ok(if analysis.checks_passed() {
                Outcome::Pass
            } else {
                Outcome::TheoremFailure
            })
        }
        Command::Split { spec, format } => {
            let built = load_spec(&spec)?.build()?;
            let index = match built.idempotent_generator {
                Some(index) => index,
                None if built.system.generators().len() == 1 => 0,
                None => {
                    return Err(Error::InvalidInput(
                        "flag one generator with \"idempotent\": true".to_owned(),
                    ))
                }
            };
            let split = report::split(&built, index)?;
            match format {
                Format::Machine => print_machine(&split),
                Format::Report => print!("{}", report::render_split(&split)),
            }
            Ok(if split.checks_passed() {
                Outcome::Pass
            } else {
                Outcome::TheoremFailure
            })
        }
        Command::Exchangeable {
            base,
            n,
            dist,
            format,
        } => {
            let base_space = FinSpace::new(base.split(',').map(str::trim).map(String::from))?;
            let measure = parse_exchangeable_dist(&base_space, n, &dist)?;
            let exchange = report::exchange(&base_space, n, &measure)?;
            match format {
                Format::Machine => print_machine(&exchange),
                Format::Report => print!("{}", report::render_exchange(&exchange)),
            }
            Ok(Outcome::Pass)
        }
        Command::Axioms {
            seed,
            cases,
            law,
            format,
        } => {
            let gen = CaseGen::with_seed(seed);
            let reports = match law {
                Some(name) => vec![laws::run_law(&name, &gen, cases)?],
                None => laws::run_all(&gen, cases),
            };
            match format {
                Format::Machine => print_machine(&reports),
                Format::Report => print!("{}", report::render_laws(&reports)),
            }
            let all_passed = reports.iter().all(|r| r.passed());
            Ok(if all_passed {
                Outcome::Pass
            } else {
                Outcome::TheoremFailure
            })
        }
        Command::Iso { a, b, format } => {
            let space_a = load_spec(&a)?.build_space()?;
            let space_b = load_spec(&b)?.build_space()?;
            let iso = report::iso(&space_a, &space_b);
            match format {
                Format::Machine => print_machine(&iso),
                Format::Report => print!("{}", report::render_iso(&iso)),
            }
            Ok(Outcome::Pass)
        }
        Command::Dot { spec } => {
            let built = load_spec(&spec)?.build()?;
            print!("{}", report::dot(&built));
            Ok(Outcome::Pass)
        }
    }
}

/// Accepts "uniform", "iid:w1,...,wk", "@file.json" (JSON array of rational
/// strings), or an inline comma-separated list of k^n rationals.
fn parse_exchangeable_dist(base: &FinSpace, n: usize, text: &str) -> Result<Dist> {
    let product = crate::exchangeable::ProductSpace::new(base.clone(), n)?;
    if text == "uniform" {
        return Ok(Dist::uniform(product.space().clone()));
    }
    if let Some(weights) = text.strip_prefix("iid:") {
        let weights: Vec<_> = weights
            .split(',')
            .map(parse_rat)
            .collect::<Result<Vec<_>>>()?;
        if weights.len() != base.len() {
            return Err(Error::DimensionMismatch {
                expected: base.len(),
                found: weights.len(),
            });
        }
        let mass = (0..product.len())
            .map(|index| {
                product
                    .tuple(index)
                    .iter()
                    .map(|&c| weights[c].clone())
                    .fold(crate::rational::one(), |acc, w| acc * w)
            })
            .collect();
        return Dist::new(product.space().clone(), mass);
    }
    let cells: Vec<String> = if let Some(path) = text.strip_prefix('@') {
        serde_json::from_str(&std::fs::read_to_string(path)?)?
    } else {
        text.split(',').map(|s| s.trim().to_owned()).collect()
    };
    if cells.len() != product.len() {
        return Err(Error::DimensionMismatch {
            expected: product.len(),
            found: cells.len(),
        });
    }
    let mass = cells
        .iter()
        .map(|c| parse_rat(c))
        .collect::<Result<Vec<_>>>()?;
    Dist::new(product.space().clone(), mass)
}
