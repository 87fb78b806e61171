//! Timing by crossing number, optionally against the Smith-form oracle.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, Instant};

use alexinv::{invariants_of_pd, parse_pd, PDCode, Policy};

use crate::batch::read_rows;
use crate::{BenchArgs, Failure};

#[derive(Clone, Debug, PartialEq)]
pub struct GroupTiming {
    pub crossings: usize,
    pub knots: usize,
    /// Mean seconds per knot under the selected policy.
    pub mean: f64,
    /// Mean seconds per knot under oracle-only, when compared.
    pub oracle_mean: Option<f64>,
}

impl GroupTiming {
    pub fn speedup(&self) -> Option<f64> {
        self.oracle_mean.map(|o| o / self.mean)
    }
}

#[derive(Clone, Debug)]
pub struct BenchReport {
    pub policy: Policy,
    pub groups: Vec<GroupTiming>,
}

impl BenchReport {
    /// Whether mean time per knot grows with crossing number.
    pub fn monotone(&self) -> bool {
        self.groups.windows(2).all(|w| w[0].mean < w[1].mean)
    }

    pub fn render(&self) -> String {
        let compare = self.groups.iter().any(|g| g.oracle_mean.is_some());
        let mut s = format!("policy: {}\n", self.policy);
        s.push_str("crossings  knots  s/knot      knots/s");
        if compare {
            s.push_str("    oracle s/knot  speedup");
        }
        s.push('\n');
        for g in &self.groups {
            s.push_str(&format!("{:>9}  {:>5}  {:<10.6}  {:>8.1}", g.crossings, g.knots, g.mean, 1.0 / g.mean));
            if let (Some(o), Some(x)) = (g.oracle_mean, g.speedup()) {
                s.push_str(&format!("    {o:<13.6}  {x:>6.1}x"));
            }
            s.push('\n');
        }
        s.push_str(&format!("trend: {}\n", if self.monotone() { "increasing" } else { "not monotone" }));
        s
    }
}

/// Small groups are repeated until they have run at least this long.
const MIN_GROUP_TIME: Duration = Duration::from_millis(50);

/// Mean seconds per knot, sequentially, so that groups are comparable.
pub fn time_knots(knots: &[PDCode], policy: Policy) -> Result<f64, Failure> {
    let Some(first) = knots.first() else {
        return Ok(0.0);
    };
    invariants_of_pd(first, policy)?;
    let start = Instant::now();
    let mut passes = 0;
    while passes == 0 || start.elapsed() < MIN_GROUP_TIME {
        for pd in knots {
            invariants_of_pd(pd, policy)?;
        }
        passes += 1;
    }
    Ok(start.elapsed().as_secs_f64() / (passes * knots.len()) as f64)
}

/// Rounds per group; each group reports its fastest round, since outside
/// interference only ever adds time.
const ROUNDS: usize = 5;

fn best_of_rounds(groups: &[Vec<PDCode>], policy: Policy) -> Result<Vec<f64>, Failure> {
    let mut best = vec![f64::INFINITY; groups.len()];
    for _ in 0..ROUNDS {
        for (b, knots) in best.iter_mut().zip(groups) {
            *b = b.min(time_knots(knots, policy)?);
        }
    }
    Ok(best)
}

pub fn bench_knots(knots: Vec<PDCode>, policy: Policy, compare: bool) -> Result<BenchReport, Failure> {
    let mut by_crossings: BTreeMap<usize, Vec<PDCode>> = BTreeMap::new();
    for pd in knots {
        by_crossings.entry(pd.crossing_count()).or_default().push(pd);
    }
    let (crossings, groups): (Vec<usize>, Vec<Vec<PDCode>>) = by_crossings.into_iter().unzip();
    let means = best_of_rounds(&groups, policy)?;
    let oracle = if compare { Some(best_of_rounds(&groups, Policy::OracleOnly)?) } else { None };
    let groups = crossings
        .into_iter()
        .zip(&groups)
        .enumerate()
        .map(|(i, (c, knots))| GroupTiming {
            crossings: c,
            knots: knots.len(),
            mean: means[i],
            oracle_mean: oracle.as_ref().map(|o| o[i]),
        })
        .collect();
    Ok(BenchReport { policy, groups })
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let mut knots = Vec::new();
    for path in &args.input {
        for row in read_rows(path)? {
            let pd = parse_pd(&row.pd).map_err(|e| Failure::Input(format!("{}: {e}", row.name)))?;
            knots.push(pd);
        }
    }
    let report = bench_knots(knots, args.policy, args.compare)?;
    write!(out, "{}", report.render()).map_err(|e| Failure::Internal(e.to_string()))
}
