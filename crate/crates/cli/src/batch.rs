//! Census processing: one record per input row, in input order.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::time::Instant;

use alexinv::{invariants_of_pd, parse_pd, AlexanderInvariants, IntPoly, Policy};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{BatchArgs, Failure};

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct InputRow {
    pub name: String,
    pub pd: String,
}

#[derive(Clone, Debug)]
pub struct BatchRecord {
    pub name: String,
    pub pd: String,
    pub result: Result<AlexanderInvariants, String>,
    pub elapsed: f64,
}

impl BatchRecord {
    pub fn is_ambiguous(&self) -> bool {
        matches!(&self.result, Ok(inv) if !inv.ambiguous.is_empty())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub knots: usize,
    pub failures: usize,
    pub ambiguous: usize,
    pub seconds: f64,
}

impl Summary {
    pub fn knots_per_second(&self) -> f64 {
        if self.seconds > 0.0 {
            self.knots as f64 / self.seconds
        } else {
            0.0
        }
    }
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} knots, {} failed, {} ambiguous, {:.3} s total, {:.1} knots/s",
            self.knots,
            self.failures,
            self.ambiguous,
            self.seconds,
            self.knots_per_second()
        )
    }
}

fn is_jsonl(path: &Path) -> bool {
    matches!(path.extension().and_then(|e| e.to_str()), Some("jsonl" | "ndjson"))
}

/// Reads `name,pd` rows from CSV (extra columns ignored) or JSON lines.
pub fn read_rows(path: &Path) -> Result<Vec<InputRow>, Failure> {
    let open_err = |e: std::io::Error| Failure::Input(format!("{}: {e}", path.display()));
    let file = File::open(path).map_err(open_err)?;
    if is_jsonl(path) {
        let mut rows = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(open_err)?;
            if line.trim().is_empty() {
                continue;
            }
            let row = serde_json::from_str(&line)
                .map_err(|e| Failure::Input(format!("{}:{}: {e}", path.display(), i + 1)))?;
            rows.push(row);
        }
        return Ok(rows);
    }
    let mut rdr = csv::Reader::from_reader(file);
    rdr.deserialize()
        .map(|r| r.map_err(|e| Failure::Input(format!("{}: {e}", path.display()))))
        .collect()
}

pub fn process_row(row: &InputRow, policy: Policy) -> BatchRecord {
    let start = Instant::now();
    let result = parse_pd(&row.pd)
        .and_then(|pd| invariants_of_pd(&pd, policy))
        .map_err(|e| e.to_string());
    BatchRecord { name: row.name.clone(), pd: row.pd.clone(), result, elapsed: start.elapsed().as_secs_f64() }
}

/// Processes rows on a pool of `jobs` workers; output order follows input order.
pub fn process_rows(rows: &[InputRow], policy: Policy, jobs: Option<usize>) -> Result<Vec<BatchRecord>, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder.build().map_err(|e| Failure::Internal(format!("thread pool: {e}")))?;
    Ok(pool.install(|| rows.par_iter().map(|r| process_row(r, policy)).collect()))
}

pub fn summarize(records: &[BatchRecord], seconds: f64) -> Summary {
    Summary {
        knots: records.len(),
        failures: records.iter().filter(|r| r.result.is_err()).count(),
        ambiguous: records.iter().filter(|r| r.is_ambiguous()).count(),
        seconds,
    }
}

#[derive(Serialize)]
struct OutputRow<'a> {
    name: &'a str,
    delta: Option<&'a [IntPoly]>,
    #[serde(rename = "Delta")]
    higher: Option<&'a [IntPoly]>,
    ambiguous: Option<&'a [IntPoly]>,
    method: Option<String>,
    error: Option<&'a str>,
    elapsed: f64,
}

impl<'a> From<&'a BatchRecord> for OutputRow<'a> {
    fn from(r: &'a BatchRecord) -> Self {
        let ok = r.result.as_ref().ok();
        OutputRow {
            name: &r.name,
            delta: ok.map(|i| i.delta.as_slice()),
            higher: ok.map(|i| i.higher.as_slice()),
            ambiguous: ok.map(|i| i.ambiguous.as_slice()),
            method: ok.map(|i| i.method.to_string()),
            error: r.result.as_ref().err().map(String::as_str),
            elapsed: r.elapsed,
        }
    }
}

fn json_list(p: Option<&[IntPoly]>) -> String {
    p.map(|p| serde_json::to_string(p).expect("polynomials serialize")).unwrap_or_default()
}

pub fn write_jsonl(records: &[BatchRecord], out: &mut dyn Write) -> std::io::Result<()> {
    for r in records {
        let line = serde_json::to_string(&OutputRow::from(r)).expect("record serializes");
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// CSV columns: name, delta, Delta, ambiguous, method, error, elapsed.
/// Polynomial lists are embedded as JSON.
pub fn write_csv(records: &[BatchRecord], out: &mut dyn Write) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["name", "delta", "Delta", "ambiguous", "method", "error", "elapsed"])?;
    for r in records {
        let o = OutputRow::from(r);
        w.write_record([
            o.name.to_string(),
            json_list(o.delta),
            json_list(o.higher),
            json_list(o.ambiguous),
            o.method.unwrap_or_default(),
            o.error.unwrap_or_default().to_string(),
            format!("{:.6}", o.elapsed),
        ])?;
    }
    w.flush()
}

pub fn cmd_batch(args: &BatchArgs, out: &mut dyn Write, diag: &mut dyn Write) -> Result<(), Failure> {
    let rows = read_rows(&args.input)?;
    let start = Instant::now();
    let records = process_rows(&rows, args.policy, args.jobs)?;
    let summary = summarize(&records, start.elapsed().as_secs_f64());
    let written = match &args.output {
        Some(path) => {
            let mut file = File::create(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            if is_jsonl(path) {
                write_jsonl(&records, &mut file)
            } else {
                write_csv(&records, &mut file)
            }
        }
        None => write_csv(&records, out),
    };
    written.map_err(|e| Failure::Internal(format!("write failed: {e}")))?;
    writeln!(diag, "batch: {summary}").map_err(|e| Failure::Internal(e.to_string()))?;
    Ok(())
}
