//! Command-line front end: single knots, census batches, timing runs and
//! direct Smith-form diagonalization.

pub mod batch;
pub mod bench;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use alexinv::{invariants_of_pd, parse_pd, AlexanderInvariants, Error, IntPoly, Policy, PolyMatrix};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "alexinv", version, about = "Higher-order Alexander polynomials of knots from PD codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Invariants of a single knot.
    Compute(ComputeArgs),
    /// Invariants of every knot in a CSV or JSON-lines file.
    Batch(BatchArgs),
    /// Average time per knot, grouped by crossing number.
    Bench(BenchArgs),
    /// Smith form of a matrix given as JSON (rows of coefficient arrays).
    Smith(SmithArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Pretty,
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    /// PD code, e.g. "[[1,4,2,5],[3,6,4,1],[5,2,6,3]]" or "PD[X[1,4,2,5],...]".
    #[arg(long)]
    pub pd: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// fast, fast-with-fallback or oracle-only.
    #[arg(long, default_value = "fast-with-fallback")]
    pub policy: Policy,
}

#[derive(Args, Debug)]
pub struct BatchArgs {
    /// CSV with `name,pd` columns, or `.jsonl` with the same keys.
    #[arg(long)]
    pub input: PathBuf,
    /// Output file; `.jsonl` selects JSON lines, anything else CSV. Stdout if omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value = "fast-with-fallback")]
    pub policy: Policy,
    /// Worker threads; defaults to the machine's parallelism.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// One or more batch-format files; knots are grouped by crossing count.
    #[arg(long, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,
    #[arg(long, default_value = "fast")]
    pub policy: Policy,
    /// Also time oracle-only on the same knots and report the speedup.
    #[arg(long)]
    pub compare: bool,
}

#[derive(Args, Debug)]
pub struct SmithArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// A command failure, mapped onto the process exit code.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable or malformed input: exit 1.
    Input(String),
    /// Anything else, including ambiguity left open by `--policy fast`: exit 2.
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Internal(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "input error: {m}"),
            Failure::Internal(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PdSyntax(_) | Error::PdInvalid(_) | Error::MultiComponent(_) => Failure::Input(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::Internal(format!("write failed: {e}"))
}

pub fn run(cli: Cli, out: &mut dyn Write, diag: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Compute(args) => cmd_compute(&args, out),
        Command::Batch(args) => batch::cmd_batch(&args, out, diag),
        Command::Bench(args) => bench::cmd_bench(&args, out),
        Command::Smith(args) => cmd_smith(&args, out),
    }
}

pub fn cmd_compute(args: &ComputeArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let pd = parse_pd(&args.pd)?;
    let inv = invariants_of_pd(&pd, args.policy)?;
    match args.format {
        Format::Json => writeln!(out, "{}", to_json(&inv)).map_err(io_failure)?,
        Format::Pretty => write!(out, "{}", render_pretty(&inv)).map_err(io_failure)?,
    }
    if inv.ambiguous.is_empty() {
        Ok(())
    } else {
        let phis: Vec<String> = inv.ambiguous.iter().map(ToString::to_string).collect();
        Err(Failure::Internal(format!("partition left ambiguous for {}", phis.join(", "))))
    }
}

/// Compact JSON, one object per line.
pub fn to_json(inv: &AlexanderInvariants) -> String {
    serde_json::to_string(inv).expect("invariants serialize")
}

pub fn render_pretty(inv: &AlexanderInvariants) -> String {
    let mut s = String::new();
    for (i, d) in inv.delta.iter().enumerate() {
        s.push_str(&format!("delta_{} = {d}\n", i + 1));
    }
    for (i, d) in inv.higher.iter().enumerate() {
        s.push_str(&format!("Delta_{} = {d}\n", i + 1));
    }
    for phi in &inv.ambiguous {
        s.push_str(&format!("unresolved: {phi}\n"));
    }
    s.push_str(&format!("method: {}\n", inv.method));
    s
}

#[derive(Serialize)]
struct SmithOutput {
    diagonal: Vec<IntPoly>,
}

pub fn parse_matrix(text: &str) -> Result<PolyMatrix, Failure> {
    let rows: Vec<Vec<Vec<i64>>> =
        serde_json::from_str(text).map_err(|e| Failure::Input(format!("matrix JSON: {e}")))?;
    let rows = rows
        .into_iter()
        .map(|r| r.iter().map(|c| IntPoly::from_i64s(c)).collect())
        .collect();
    PolyMatrix::from_rows(rows).map_err(|e| Failure::Input(e.to_string()))
}

pub fn cmd_smith(args: &SmithArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.input.display())))?;
    let m = parse_matrix(&text)?;
    let diagonal = alexinv::smith_form(&m, false).diagonal;
    match args.format {
        Format::Json => {
            let s = serde_json::to_string(&SmithOutput { diagonal }).expect("diagonal serializes");
            writeln!(out, "{s}").map_err(io_failure)
        }
        Format::Pretty => {
            if diagonal.is_empty() {
                return writeln!(out, "trivial (no nonunit invariant factors)").map_err(io_failure);
            }
            for (i, d) in diagonal.iter().enumerate() {
                writeln!(out, "delta_{} = {d}", i + 1).map_err(io_failure)?;
            }
            Ok(())
        }
    }
}
