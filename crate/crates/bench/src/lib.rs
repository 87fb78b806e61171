//! Fixture loading shared by the criterion benches.

use std::path::PathBuf;

use alexinv::{parse_pd, PDCode};

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// `(name, pd)` rows of a bundled fixture file.
pub fn load(file: &str) -> Vec<(String, PDCode)> {
    let mut rdr = csv::Reader::from_path(fixtures_dir().join(file)).expect("fixture file");
    rdr.records()
        .map(|r| {
            let r = r.expect("fixture row");
            (r[0].to_string(), parse_pd(&r[1]).expect("fixture PD"))
        })
        .collect()
}

/// Knots from all census samples with exactly `n` crossings.
pub fn with_crossings(n: usize) -> Vec<PDCode> {
    ["le10.csv", "c11.csv", "c12.csv", "c13.csv"]
        .iter()
        .flat_map(|f| load(f))
        .map(|(_, pd)| pd)
        .filter(|pd| pd.crossing_count() == n)
        .collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn groups_are_populated() {
        for n in [8, 10, 12] {
            assert!(!super::with_crossings(n).is_empty(), "{n}");
        }
    }
}
