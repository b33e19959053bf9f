//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when the request is refused on domain grounds
//! (invalid rule, index not one, inequivalent automata, ...), 2 on input
//! errors (unreadable or malformed files, bad arguments).

mod circuitfile;
mod commands;
mod expr;
mod report;
mod rulefile;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use circuitfile::{CircuitFile, GateFile, LayerFile};
pub use expr::parse_operator;
pub use report::{digest, ExactIndex, Report, SCHEMA_VERSION};
pub use rulefile::{RuleFile, Term};

use crate::fca::{Automaton, Direction};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUSED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Names accepted by `--builtin`.
pub const BUILTINS: [&str; 10] = [
    "identity",
    "shift-plus",
    "shift-minus",
    "majorana-shift-plus",
    "majorana-shift-minus",
    "majorana-shift-plus-inv",
    "majorana-shift-minus-inv",
    "conjugation",
    "controlled-phase",
    "forking",
];

#[derive(Parser, Debug)]
#[command(name = "fca", version, about = "Fermionic cellular automata: validity, index, classification and circuits")]
pub struct Cli {
    /// Print the machine-readable report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Numerical tolerance for validity and verification checks.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tolerance: f64,
    #[command(subcommand)]
    pub command: Command,
}

/// Where an automaton comes from: a rule file or a built-in family.
#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Rule file (JSON).
    pub rule: Option<PathBuf>,
    /// Built-in automaton instead of a rule file.
    #[arg(long, conflicts_with = "rule")]
    pub builtin: Option<String>,
    #[command(flatten)]
    pub params: Params,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Params {
    /// Angle θ of the single-cell unitary U(θ, n).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
    /// Exponent n ∈ {0, 1} of U(θ, n).
    #[arg(long, default_value_t = 0)]
    pub n: u8,
    /// Phase φ of the controlled-phase family.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that a rule defines an automaton.
    Validate {
        rule: PathBuf,
    },
    /// Exact index of an automaton.
    Index(Source),
    /// Normal form of a nearest-neighbour automaton.
    Classify(Source),
    /// Circuit for a unit-index automaton.
    Synthesize {
        #[command(flatten)]
        source: Source,
        /// Write the circuit file here.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Re-check a circuit file against an automaton.
    CheckCircuit {
        circuit: PathBuf,
        #[command(flatten)]
        source: Source,
    },
    /// Heisenberg evolution of an operator expression.
    Evolve {
        #[command(flatten)]
        source: Source,
        /// Operator, e.g. "X(0) Y(1) + 0.5i Z(2)".
        #[arg(long = "op", allow_hyphen_values = true)]
        op: String,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Window `lo..hi` (inclusive) that must contain every intermediate operator.
        #[arg(long)]
        window: Option<String>,
    },
    /// Circuit F with A = F ∘ B, or the index ratio that forbids one.
    /// Each side is a rule file or `builtin:<name>`.
    Equivalence {
        a: String,
        b: String,
        #[command(flatten)]
        params: Params,
        /// Write the witness circuit here.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

/// A command failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
    pub report: Option<Report>,
}

impl Failure {
    pub fn input(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: msg.into(),
            report: None,
        }
    }

    pub fn refused(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_REFUSED,
            message: msg.into(),
            report: None,
        }
    }

    pub fn with_report(mut self, r: Report) -> Self {
        self.report = Some(r);
        self
    }
}

pub fn builtin(name: &str, p: &Params) -> Result<Automaton, Failure> {
    let param = |e: crate::error::FcaError| Failure::input(e.to_string());
    Ok(match name {
        "identity" => Automaton::identity(),
        "shift-plus" => Automaton::shift(1),
        "shift-minus" => Automaton::shift(-1),
        "majorana-shift-plus" => Automaton::majorana_shift(Direction::Plus),
        "majorana-shift-minus" => Automaton::majorana_shift(Direction::Minus),
        "majorana-shift-plus-inv" => Automaton::MajoranaShift {
            direction: Direction::Plus,
            inverted: true,
        },
        "majorana-shift-minus-inv" => Automaton::MajoranaShift {
            direction: Direction::Minus,
            inverted: true,
        },
        "conjugation" => Automaton::conjugation(p.theta, p.n).map_err(param)?,
        "controlled-phase" => Automaton::controlled_phase(p.phi, p.theta, p.n).map_err(param)?,
        "forking" => Automaton::forking(p.theta, p.n).map_err(param)?,
        other => {
            return Err(Failure::input(format!(
                "unknown builtin '{other}'; expected one of {}",
                BUILTINS.join(", ")
            )))
        }
    })
}

/// Runs the CLI on `args` (including the program name), writing to stdout
/// and stderr, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    // a closed stdout is not worth a panic
    let mut stdout = std::io::stdout().lock();
    match commands::dispatch(&cli) {
        Ok(out) => {
            let body = if cli.json { out.report.to_json() } else { out.text };
            let _ = writeln!(stdout, "{body}");
            EXIT_OK
        }
        Err(f) => {
            if let (Some(r), true) = (&f.report, cli.json) {
                let _ = writeln!(stdout, "{}", r.to_json());
            }
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
