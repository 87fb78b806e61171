//! The φ-exponent of the inverse's denominators is a module invariant: it
//! does not move under multiplication by determinant-one matrices.

mod common;

use alexinv::exactla::inv_denominator_multiplicity;
use alexinv::polyring::multiplicity;
use alexinv::{alexander_matrix, det_poly, factor, normalize_delta, IntPoly, PolyMatrix};
use proptest::prelude::*;
use std::sync::OnceLock;

/// (matrix, φ, e*, d₁*) for a few knots with repeated factors.
fn cases() -> &'static [(PolyMatrix, IntPoly, u32, u32)] {
    static CASES: OnceLock<Vec<(PolyMatrix, IntPoly, u32, u32)>> = OnceLock::new();
    CASES.get_or_init(load_cases)
}

fn load_cases() -> Vec<(PolyMatrix, IntPoly, u32, u32)> {
    let mut out = Vec::new();
    for k in common::load("table1.csv") {
        if !["8_18", "9_40", "10_98", "10_99"].contains(&k.name.as_str()) {
            continue;
        }
        let m = alexander_matrix(&k.pd).matrix;
        let delta = normalize_delta(&det_poly(&m)).unwrap();
        for (phi, e) in factor(&delta).unwrap().factors {
            let d1 = inv_denominator_multiplicity(&m, &phi, e, None).unwrap();
            out.push((m.clone(), phi, e, d1));
        }
    }
    out
}

/// Product of elementary operations `row_i += c·tᵏ·row_j`; determinant 1.
fn elementary_product(n: usize, ops: &[(usize, usize, i64, usize)]) -> PolyMatrix {
    let mut u = PolyMatrix::identity(n);
    for &(i, j, c, k) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let mut mono = vec![0i64; k + 1];
        mono[k] = c;
        let f = IntPoly::from_i64s(&mono);
        for col in 0..n {
            let v = u.get(i, col) + &(&f * u.get(j, col));
            u.set(i, col, v);
        }
    }
    u
}

fn ops() -> impl Strategy<Value = Vec<(usize, usize, i64, usize)>> {
    prop::collection::vec((0usize..16, 0usize..16, -2i64..=2, 0usize..2), 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn denominator_exponent_is_invariant(case in 0usize..64, left in ops(), right in ops()) {
        let all = cases();
        let (m, phi, e, d1) = &all[case % all.len()];
        let n = m.size();
        let u = elementary_product(n, &left);
        let v = elementary_product(n, &right);
        let moved = u.mul(m).unwrap().mul(&v).unwrap();
        prop_assert_eq!(det_poly(&moved), det_poly(m));
        prop_assert_eq!(multiplicity(&normalize_delta(&det_poly(&moved)).unwrap(), phi).unwrap(), *e);
        prop_assert_eq!(inv_denominator_multiplicity(&moved, phi, *e, None).unwrap(), *d1);
    }
}
