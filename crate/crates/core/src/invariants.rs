//! Invariant factors δᵢ and higher-order Alexander polynomials Δᵢ.
//!
//! For each irreducible factor φ of Δ with exponent e*, the φ-primary part
//! of the module is `⊕ ℚ[t,t⁻¹]/⟨φ^dᵢ⟩` for a partition `d₁ ≥ … ≥ d_r` of
//! e*. Its length is the nullity of the Alexander matrix over ℚ[t]/⟨φ⟩ and
//! its largest part is the φ-exponent in the LCM of the denominators of the
//! inverse matrix. Those three numbers pin the partition down whenever
//! e* ≤ 6; when they do not, the Smith form decides.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{
    det_poly, inv_denominator_multiplicity, nullity_bound_mod_root, nullity_over_field, FieldMatrix,
};
use crate::factorint::factor;
use crate::knotdiag::{alexander_matrix, AlexanderMatrix, PDCode};
use crate::numberfield::NumberField;
use crate::polyring::{multiplicity, normalize_delta, IntPoly};
use crate::smithoracle::{smith_form, SmithResult};

pub type Partition = Vec<u32>;

/// How ambiguity in the fast path is handled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Policy {
    /// Criteria only; ambiguous primes are reported, not resolved.
    Fast,
    /// Criteria first, Smith form for any prime they leave open.
    #[default]
    FastWithFallback,
    /// Smith form only.
    OracleOnly,
}

impl FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.replace('_', "-").as_str() {
            "fast" => Ok(Policy::Fast),
            "fast-with-fallback" | "fallback" => Ok(Policy::FastWithFallback),
            "oracle-only" | "oracle" => Ok(Policy::OracleOnly),
            other => Err(format!(
                "unknown policy {other:?} (expected fast, fast-with-fallback or oracle-only)"
            )),
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Policy::Fast => "fast",
            Policy::FastWithFallback => "fast-with-fallback",
            Policy::OracleOnly => "oracle-only",
        })
    }
}

/// Which route produced a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Fast,
    Fallback,
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Fast => "fast",
            Method::Fallback => "fallback",
            Method::Oracle => "oracle",
        })
    }
}

/// `(e*, r*, d₁*)` for one irreducible factor φ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiEvidence {
    pub phi: IntPoly,
    pub e_star: u32,
    pub r_star: u32,
    pub d1_star: Option<u32>,
}

impl PhiEvidence {
    pub fn new(phi: IntPoly, e_star: u32, r_star: u32, d1_star: Option<u32>) -> Result<Self> {
        let bad = |reason: String| Error::InconsistentEvidence { phi: phi.to_string(), reason };
        if r_star == 0 || r_star > e_star {
            return Err(bad(format!("nullity {r_star} outside 1..={e_star}")));
        }
        if let Some(d1) = d1_star {
            let lo = e_star.div_ceil(r_star);
            let hi = e_star - r_star + 1;
            if d1 < lo || d1 > hi {
                return Err(bad(format!(
                    "largest exponent {d1} outside {lo}..={hi} for e*={e_star}, r*={r_star}"
                )));
            }
        }
        Ok(PhiEvidence { phi, e_star, r_star, d1_star })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Resolution {
    Determined(Partition),
    Ambiguous(Vec<Partition>),
}

/// Partitions of `e` into exactly `r` parts, optionally with largest part
/// `d1`, in lexicographically decreasing order.
pub fn partitions_with(e: u32, r: u32, d1: Option<u32>) -> Vec<Partition> {
    fn rec(remaining: u32, parts: u32, max: u32, prefix: &mut Partition, out: &mut Vec<Partition>) {
        if parts == 0 {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        // each remaining part is at least 1 and at most `max`
        if remaining < parts || remaining > parts * max {
            return;
        }
        let hi = max.min(remaining - (parts - 1));
        for first in (1..=hi).rev() {
            prefix.push(first);
            rec(remaining - first, parts - 1, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if r == 0 || r > e {
        return out;
    }
    match d1 {
        None => rec(e, r, e, &mut Vec::new(), &mut out),
        Some(d) if d >= 1 && d <= e => {
            let mut prefix = vec![d];
            rec(e - d, r - 1, d, &mut prefix, &mut out);
        }
        Some(_) => {}
    }
    out
}

/// Whether e* and r* alone leave more than one partition.
pub fn needs_d1(e: u32, r: u32) -> bool {
    partitions_with(e, r, None).len() > 1
}

pub fn resolve_partition(ev: &PhiEvidence) -> Result<Resolution> {
    let mut candidates = partitions_with(ev.e_star, ev.r_star, ev.d1_star);
    match candidates.len() {
        0 => Err(Error::InconsistentEvidence {
            phi: ev.phi.to_string(),
            reason: format!(
                "no partition of {} with {} parts and largest part {:?}",
                ev.e_star, ev.r_star, ev.d1_star
            ),
        }),
        1 => Ok(Resolution::Determined(candidates.pop().unwrap())),
        _ => Ok(Resolution::Ambiguous(candidates)),
    }
}

/// Ordered invariant factors (largest first) and the derived Δᵢ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlexanderInvariants {
    pub delta: Vec<IntPoly>,
    #[serde(rename = "Delta")]
    pub higher: Vec<IntPoly>,
    pub ambiguous: Vec<IntPoly>,
    pub method: Method,
}

impl AlexanderInvariants {
    /// Builds Δᵢ = δᵢ·δᵢ₊₁·…·δ_r. An empty factor list means the trivial
    /// module, recorded as δ₁ = 1.
    pub fn from_factors(mut delta: Vec<IntPoly>, ambiguous: Vec<IntPoly>, method: Method) -> Self {
        if delta.is_empty() {
            delta.push(IntPoly::one());
        }
        let mut higher = vec![IntPoly::one(); delta.len()];
        let mut acc = IntPoly::one();
        for i in (0..delta.len()).rev() {
            acc = &acc * &delta[i];
            higher[i] = acc.clone();
        }
        AlexanderInvariants { delta, higher, ambiguous, method }
    }

    /// Number of cyclic summands.
    pub fn r(&self) -> usize {
        self.delta.len()
    }

    /// δᵢ for `i ≥ 1`; 1 beyond the last summand.
    pub fn delta_at(&self, i: usize) -> IntPoly {
        assert!(i >= 1, "invariant factors are indexed from 1");
        self.delta.get(i - 1).cloned().unwrap_or_else(IntPoly::one)
    }

    /// Δᵢ for `i ≥ 1`; 1 beyond the last summand.
    pub fn higher_at(&self, i: usize) -> IntPoly {
        assert!(i >= 1, "Alexander polynomials are indexed from 1");
        self.higher.get(i - 1).cloned().unwrap_or_else(IntPoly::one)
    }

    pub fn alexander_polynomial(&self) -> IntPoly {
        self.higher_at(1)
    }

    /// Equality of the polynomial content, ignoring `method`.
    pub fn same_polynomials(&self, other: &AlexanderInvariants) -> bool {
        self.delta == other.delta && self.higher == other.higher
    }
}

/// How one φ-partition was settled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionSource {
    /// e* alone fixes it.
    Forced,
    /// Determined by nullity and, where needed, the inverse denominators.
    Criteria,
    /// The criteria left several candidates; the Smith form chose.
    SmithFallback,
    /// Left ambiguous under [`Policy::Fast`]; the first candidate is reported.
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiReport {
    pub evidence: PhiEvidence,
    pub partition: Partition,
    pub source: PartitionSource,
}

/// Full pipeline output: the invariants plus per-φ evidence.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub alexander: IntPoly,
    pub invariants: AlexanderInvariants,
    pub phis: Vec<PhiReport>,
}

fn partition_from_smith(smith: &SmithResult, phi: &IntPoly) -> Result<Partition> {
    smith
        .diagonal
        .iter()
        .map(|d| multiplicity(d, phi))
        .filter(|m| !matches!(m, Ok(0)))
        .collect()
}

fn invariants_from_smith(smith: &SmithResult) -> Result<AlexanderInvariants> {
    if smith.diagonal.iter().any(IntPoly::is_zero) {
        return Err(Error::SingularMatrix);
    }
    Ok(AlexanderInvariants::from_factors(smith.diagonal.clone(), Vec::new(), Method::Oracle))
}

/// Runs the pipeline on a square Alexander matrix.
pub fn analyze(a: &AlexanderMatrix, policy: Policy) -> Result<Analysis> {
    let m = &a.matrix;
    let det = det_poly(m);
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let alexander = normalize_delta(&det)?;
    if policy == Policy::OracleOnly {
        let invariants = invariants_from_smith(&smith_form(m, false))?;
        return Ok(Analysis { alexander, invariants, phis: Vec::new() });
    }

    let mut smith: Option<SmithResult> = None;
    let mut phis = Vec::new();
    let mut ambiguous = Vec::new();
    let mut method = Method::Fast;
    for (phi, e_star) in factor(&alexander)?.factors {
        if e_star == 1 {
            phis.push(PhiReport {
                evidence: PhiEvidence::new(phi, 1, 1, None)?,
                partition: vec![1],
                source: PartitionSource::Forced,
            });
            continue;
        }
        let r_star = match nullity_bound_mod_root(m, &phi, 2) {
            Some(1) => 1,
            _ => {
                let field = NumberField::new(phi.clone())?;
                nullity_over_field(&FieldMatrix::reduce(m, &field)) as u32
            }
        };
        PhiEvidence::new(phi.clone(), e_star, r_star, None)?;
        let d1_star = if needs_d1(e_star, r_star) {
            let largest = partitions_with(e_star, r_star, None)[0][0];
            Some(inv_denominator_multiplicity(m, &phi, e_star, Some(largest))?)
        } else {
            None
        };
        let evidence = PhiEvidence::new(phi.clone(), e_star, r_star, d1_star)?;
        let (partition, source) = match resolve_partition(&evidence)? {
            Resolution::Determined(p) => {
                let source = if d1_star.is_none() && r_star == 1 || r_star == e_star {
                    PartitionSource::Forced
                } else {
                    PartitionSource::Criteria
                };
                (p, source)
            }
            Resolution::Ambiguous(candidates) => match policy {
                Policy::Fast => {
                    ambiguous.push(phi.clone());
                    (candidates[0].clone(), PartitionSource::Unresolved)
                }
                _ => {
                    let s = smith.get_or_insert_with(|| smith_form(m, false));
                    let p = partition_from_smith(s, &phi)?;
                    if !candidates.contains(&p) {
                        return Err(Error::InconsistentEvidence {
                            phi: phi.to_string(),
                            reason: format!("Smith partition {p:?} not among {candidates:?}"),
                        });
                    }
                    method = Method::Fallback;
                    (p, PartitionSource::SmithFallback)
                }
            },
        };
        phis.push(PhiReport { evidence, partition, source });
    }

    let r = phis.iter().map(|p| p.partition.len()).max().unwrap_or(0);
    let delta: Vec<IntPoly> = (0..r)
        .map(|i| {
            let prod: IntPoly = phis
                .iter()
                .filter_map(|p| p.partition.get(i).map(|&d| p.evidence.phi.pow(d)))
                .product();
            normalize_delta(&prod)
        })
        .collect::<Result<_>>()?;
    let invariants = AlexanderInvariants::from_factors(delta, ambiguous, method);
    Ok(Analysis { alexander, invariants, phis })
}

pub fn compute_invariants(a: &AlexanderMatrix, policy: Policy) -> Result<AlexanderInvariants> {
    analyze(a, policy).map(|x| x.invariants)
}

/// Convenience: PD code straight to invariants.
pub fn invariants_of_pd(pd: &PDCode, policy: Policy) -> Result<AlexanderInvariants> {
    compute_invariants(&alexander_matrix(pd), policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::PolyMatrix;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn phi6() -> IntPoly {
        p(&[1, -1, 1])
    }

    /// Independent enumeration: all weakly decreasing sequences by brute force.
    fn brute_partitions(e: u32, r: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let total = (e as usize + 1).pow(r);
        for code in 0..total {
            let mut c = code;
            let mut v = Vec::new();
            for _ in 0..r {
                v.push((c % (e as usize + 1)) as u32);
                c /= e as usize + 1;
            }
            if v.iter().all(|&x| x >= 1) && v.windows(2).all(|w| w[0] >= w[1]) && v.iter().sum::<u32>() == e {
                out.push(v);
            }
        }
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    #[test]
    fn partition_examples() {
        assert_eq!(partitions_with(6, 2, None), vec![vec![5, 1], vec![4, 2], vec![3, 3]]);
        assert_eq!(partitions_with(4, 2, Some(3)), vec![vec![3, 1]]);
        assert_eq!(partitions_with(4, 2, Some(2)), vec![vec![2, 2]]);
        assert_eq!(partitions_with(7, 3, Some(3)), vec![vec![3, 3, 1], vec![3, 2, 2]]);
        assert!(partitions_with(4, 2, Some(4)).is_empty());
        assert!(partitions_with(3, 4, None).is_empty());
    }

    #[test]
    fn partitions_match_enumeration() {
        for e in 1..=8 {
            for r in 1..=e {
                assert_eq!(partitions_with(e, r, None), brute_partitions(e, r), "e={e} r={r}");
            }
        }
        let total: usize = (1..=6).map(|r| partitions_with(6, r, None).len()).sum();
        assert_eq!(total, 11);
    }

    #[test]
    fn needs_d1_examples() {
        assert!(!needs_d1(2, 1));
        assert!(needs_d1(4, 2));
        assert!(!needs_d1(3, 3));
    }

    #[test]
    fn resolve_examples() {
        let ev = PhiEvidence::new(phi6(), 4, 2, Some(3)).unwrap();
        assert_eq!(resolve_partition(&ev).unwrap(), Resolution::Determined(vec![3, 1]));
        let ev = PhiEvidence::new(phi6(), 1, 1, None).unwrap();
        assert_eq!(resolve_partition(&ev).unwrap(), Resolution::Determined(vec![1]));
        let ev = PhiEvidence::new(phi6(), 7, 3, Some(3)).unwrap();
        assert_eq!(
            resolve_partition(&ev).unwrap(),
            Resolution::Ambiguous(vec![vec![3, 3, 1], vec![3, 2, 2]])
        );
    }

    #[test]
    fn evidence_validation() {
        assert!(PhiEvidence::new(phi6(), 2, 3, None).is_err());
        assert!(PhiEvidence::new(phi6(), 2, 0, None).is_err());
        assert!(PhiEvidence::new(phi6(), 4, 2, Some(1)).is_err());
        assert!(PhiEvidence::new(phi6(), 4, 2, Some(4)).is_err());
    }

    #[test]
    fn policy_parsing() {
        assert_eq!("fast".parse::<Policy>().unwrap(), Policy::Fast);
        assert_eq!("fast-with-fallback".parse::<Policy>().unwrap(), Policy::FastWithFallback);
        assert_eq!("oracle_only".parse::<Policy>().unwrap(), Policy::OracleOnly);
        assert!("slow".parse::<Policy>().is_err());
        assert_eq!(Policy::default(), Policy::FastWithFallback);
    }

    fn as_alexander(m: PolyMatrix) -> AlexanderMatrix {
        AlexanderMatrix { matrix: m, deleted_row: 0, deleted_col: 0 }
    }

    #[test]
    fn diagonal_module_8_18() {
        let fig8 = p(&[1, -3, 1]);
        let a = as_alexander(PolyMatrix::diagonal(&[&phi6() * &fig8, phi6()]));
        let inv = compute_invariants(&a, Policy::FastWithFallback).unwrap();
        assert_eq!(inv.delta, vec![&phi6() * &fig8, phi6()]);
        assert_eq!(inv.higher, vec![&phi6().pow(2) * &fig8, phi6()]);
        assert_eq!(inv.higher_at(3), IntPoly::one());
        assert_eq!(inv.method, Method::Fast);
        let oracle = compute_invariants(&a, Policy::OracleOnly).unwrap();
        assert!(inv.same_polynomials(&oracle));
        assert_eq!(oracle.method, Method::Oracle);
    }

    #[test]
    fn trivial_module() {
        let inv = compute_invariants(&as_alexander(PolyMatrix::zeros(0)), Policy::Fast).unwrap();
        assert_eq!(inv.delta, vec![IntPoly::one()]);
        assert_eq!(inv.higher, vec![IntPoly::one()]);
        let oracle = compute_invariants(&as_alexander(PolyMatrix::identity(2)), Policy::OracleOnly).unwrap();
        assert_eq!(oracle.delta, vec![IntPoly::one()]);
    }

    #[test]
    fn ambiguous_partition_policies() {
        // φ-primary part [3,2,2]: e* = 7, r* = 3, d₁* = 3 cannot tell it from [3,3,1].
        let phi = phi6();
        let a = as_alexander(PolyMatrix::diagonal(&[phi.pow(3), phi.pow(2), phi.pow(2)]));
        let fast = analyze(&a, Policy::Fast).unwrap();
        assert_eq!(fast.invariants.ambiguous, vec![phi.clone()]);
        assert_eq!(fast.phis[0].source, PartitionSource::Unresolved);
        assert_eq!(fast.phis[0].partition, vec![3, 3, 1]);
        let fb = analyze(&a, Policy::FastWithFallback).unwrap();
        assert!(fb.invariants.ambiguous.is_empty());
        assert_eq!(fb.invariants.method, Method::Fallback);
        assert_eq!(fb.phis[0].partition, vec![3, 2, 2]);
        assert_eq!(fb.invariants.delta, vec![phi.pow(3), phi.pow(2), phi.pow(2)]);
        let oracle = compute_invariants(&a, Policy::OracleOnly).unwrap();
        assert!(fb.invariants.same_polynomials(&oracle));
    }

    #[test]
    fn singular_matrix_is_an_error() {
        let a = as_alexander(PolyMatrix::zeros(2));
        assert_eq!(compute_invariants(&a, Policy::Fast), Err(Error::SingularMatrix));
    }

    #[test]
    fn json_schema() {
        let inv = AlexanderInvariants::from_factors(vec![phi6()], Vec::new(), Method::Fast);
        let s = serde_json::to_string(&inv).unwrap();
        assert_eq!(s, r#"{"delta":[[1,-1,1]],"Delta":[[1,-1,1]],"ambiguous":[],"method":"fast"}"#);
        let back: AlexanderInvariants = serde_json::from_str(&s).unwrap();
        assert_eq!(back, inv);
    }
}
