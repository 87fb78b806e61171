//! Smith normal form over ℚ[t].
//!
//! The slow, always-correct route to the invariant factors. Pivots are
//! chosen by minimal degree; after every elimination round each touched row
//! is rescaled to a primitive integer polynomial vector, which is a unit
//! operation over ℚ[t] and keeps coefficient growth in check.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exactla::PolyMatrix;
use crate::polyring::{normalize_delta_rat, IntPoly, RatPoly};

/// Square matrix over ℚ[t], row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPolyMatrix {
    pub n: usize,
    pub entries: Vec<RatPoly>,
}

impl RatPolyMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![RatPoly::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = RatPoly::one();
        }
        RatPolyMatrix { n, entries }
    }

    pub fn from_poly_matrix(m: &PolyMatrix) -> Self {
        let n = m.size();
        let mut entries = Vec::with_capacity(n * n);
        for row in m.rows() {
            entries.extend(row.iter().map(IntPoly::to_rat));
        }
        RatPolyMatrix { n, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &RatPoly {
        &self.entries[i * self.n + j]
    }

    fn at(&mut self, i: usize, j: usize) -> &mut RatPoly {
        &mut self.entries[i * self.n + j]
    }

    pub fn mul(&self, other: &RatPolyMatrix) -> RatPolyMatrix {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = RatPoly::zero();
                for k in 0..n {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        RatPolyMatrix { n, entries }
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.n {
                self.entries.swap(a * self.n + j, b * self.n + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.n {
                self.entries.swap(i * self.n + a, i * self.n + b);
            }
        }
    }

    /// row[dst] += q · row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &RatPoly) {
        for j in 0..self.n {
            let s = self.get(src, j);
            if !s.is_zero() {
                let v = self.get(dst, j) + &(q * s);
                *self.at(dst, j) = v;
            }
        }
    }

    /// col[dst] += q · col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &RatPoly) {
        for i in 0..self.n {
            let s = self.get(i, src);
            if !s.is_zero() {
                let v = self.get(i, dst) + &(s * q);
                *self.at(i, dst) = v;
            }
        }
    }

    fn scale_row(&mut self, i: usize, c: &BigRational) {
        for j in 0..self.n {
            let v = self.get(i, j).scale(c);
            *self.at(i, j) = v;
        }
    }

    /// Rescales row `i` so its entries are integer polynomials with
    /// coprime coefficients; returns the factor applied.
    fn make_row_primitive(&mut self, i: usize) -> Option<BigRational> {
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for j in 0..self.n {
            for c in self.get(i, j).coeffs() {
                den = den.lcm(c.denom());
            }
        }
        for j in 0..self.n {
            for c in self.get(i, j).coeffs() {
                num = num.gcd(&(c * BigRational::from_integer(den.clone())).to_integer());
            }
        }
        if num.is_zero() {
            return None;
        }
        let factor = BigRational::new(den, num);
        if factor.is_one() {
            return None;
        }
        self.scale_row(i, &factor);
        Some(factor)
    }

    /// Determinant: row denominators are cleared and the integer routine
    /// does the rest.
    pub fn det(&self) -> RatPoly {
        let mut scale = BigRational::one();
        let mut rows = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut den = BigInt::one();
            for j in 0..self.n {
                for c in self.get(i, j).coeffs() {
                    den = den.lcm(c.denom());
                }
            }
            scale /= BigRational::from_integer(den.clone());
            let d = BigRational::from_integer(den);
            rows.push(
                (0..self.n)
                    .map(|j| self.get(i, j).scale(&d).to_int().expect("denominators cleared"))
                    .collect(),
            );
        }
        let m = PolyMatrix::from_rows(rows).expect("square");
        crate::exactla::det_poly(&m).to_rat().scale(&scale)
    }
}

/// Output of [`smith_form`].
#[derive(Clone, Debug)]
pub struct SmithResult {
    /// Non-unit invariant factors, normalized, largest first (`δ₁, δ₂, …`).
    pub diagonal: Vec<IntPoly>,
    /// The diagonal of `left · M · right` in elimination order.
    pub raw_diagonal: Vec<RatPoly>,
    pub left_transform: Option<RatPolyMatrix>,
    pub right_transform: Option<RatPolyMatrix>,
}

fn find_min_degree(w: &RatPolyMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(isize, usize, usize)> = None;
    for i in k..w.n {
        for j in k..w.n {
            let d = w.get(i, j).degree();
            if d >= 0 && best.is_none_or(|(bd, _, _)| d < bd) {
                best = Some((d, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Smith normal form of `m` over ℚ[t].
pub fn smith_form(m: &PolyMatrix, want_transforms: bool) -> SmithResult {
    let n = m.size();
    let mut w = RatPolyMatrix::from_poly_matrix(m);
    let mut left = want_transforms.then(|| RatPolyMatrix::identity(n));
    let mut right = want_transforms.then(|| RatPolyMatrix::identity(n));

    'pivots: for k in 0..n {
        loop {
            let Some((pi, pj)) = find_min_degree(&w, k) else {
                break 'pivots;
            };
            w.swap_rows(k, pi);
            w.swap_cols(k, pj);
            if let Some(l) = left.as_mut() {
                l.swap_rows(k, pi);
            }
            if let Some(r) = right.as_mut() {
                r.swap_cols(k, pj);
            }
            let pivot = w.get(k, k).clone();
            let mut clean = true;
            for i in k + 1..n {
                if w.get(i, k).is_zero() {
                    continue;
                }
                let (q, r) = w.get(i, k).div_rem(&pivot).expect("pivot nonzero");
                let q = -q;
                w.add_row_multiple(i, k, &q);
                if let Some(l) = left.as_mut() {
                    l.add_row_multiple(i, k, &q);
                }
                clean &= r.is_zero();
                if let Some(f) = w.make_row_primitive(i) {
                    if let Some(l) = left.as_mut() {
                        l.scale_row(i, &f);
                    }
                }
            }
            for j in k + 1..n {
                if w.get(k, j).is_zero() {
                    continue;
                }
                let (q, r) = w.get(k, j).div_rem(&pivot).expect("pivot nonzero");
                let q = -q;
                w.add_col_multiple(j, k, &q);
                if let Some(rt) = right.as_mut() {
                    rt.add_col_multiple(j, k, &q);
                }
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            // Row and column k are clear; enforce divisibility of the rest.
            let offender = (k + 1..n).find(|&i| {
                (k + 1..n).any(|j| {
                    let e = w.get(i, j);
                    !e.is_zero() && !e.div_rem(&pivot).expect("pivot nonzero").1.is_zero()
                })
            });
            match offender {
                Some(i) => {
                    w.add_row_multiple(k, i, &RatPoly::one());
                    if let Some(l) = left.as_mut() {
                        l.add_row_multiple(k, i, &RatPoly::one());
                    }
                }
                None => break,
            }
        }
    }

    let raw_diagonal: Vec<RatPoly> = (0..n).map(|i| w.get(i, i).clone()).collect();
    let mut diagonal: Vec<IntPoly> = raw_diagonal
        .iter()
        .map(|d| {
            if d.is_zero() {
                IntPoly::zero()
            } else {
                normalize_delta_rat(d).expect("nonzero")
            }
        })
        .filter(|d| !d.is_one())
        .collect();
    diagonal.reverse();
    SmithResult {
        diagonal,
        raw_diagonal,
        left_transform: left,
        right_transform: right,
    }
}
