#![allow(dead_code)]

use std::path::PathBuf;

use alexinv::{parse_pd, IntPoly, PDCode};

pub struct Fixture {
    pub name: String,
    pub pd: PDCode,
    /// Tabulated Alexander polynomial, when the fixture file carries one.
    pub alexander: Option<IntPoly>,
    pub second_alexander: Option<IntPoly>,
}

pub fn fixture_path(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(file)
}

fn coeff_list(s: &str) -> Option<IntPoly> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let c: Vec<i64> = serde_json::from_str(s).expect("coefficient list");
    Some(IntPoly::from_i64s(&c))
}

pub fn load(file: &str) -> Vec<Fixture> {
    let mut rdr = csv::Reader::from_path(fixture_path(file)).expect("fixture file");
    let headers = rdr.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (ni, pi) = (col("name").unwrap(), col("pd").unwrap());
    let (ai, si) = (col("alexander"), col("second_alexander"));
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            Fixture {
                name: r[ni].to_string(),
                pd: parse_pd(&r[pi]).unwrap_or_else(|e| panic!("{}: {e}", &r[ni])),
                alexander: ai.and_then(|i| coeff_list(&r[i])),
                second_alexander: si.and_then(|i| coeff_list(&r[i])),
            }
        })
        .collect()
}

pub fn all_fixture_files() -> [&'static str; 7] {
    ["le10.csv", "table1.csv", "exceptions.csv", "c11.csv", "c12.csv", "c13.csv", "k14a1975.csv"]
}
