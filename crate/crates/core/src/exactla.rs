//! Exact linear algebra over ℤ[t] and ℚ(ω).
//!
//! Determinants of polynomial matrices are computed by evaluation at
//! `0, 1, −1, 2, −2, …`, fraction-free (Bareiss) integer elimination at each
//! point, and interpolation. The φ-adic statistic of the inverse is read off
//! the cofactors, so `A⁻¹` over ℚ(t) is never materialized.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numberfield::{NFElem, NumberField};
use crate::polyring::{multiplicity_capped, IntPoly, RatPoly};

/// Square matrix over ℤ[t], row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    n: usize,
    entries: Vec<IntPoly>,
}

impl PolyMatrix {
    pub fn new(n: usize, entries: Vec<IntPoly>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Shape(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(PolyMatrix { n, entries })
    }

    pub fn from_rows(rows: Vec<Vec<IntPoly>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::Shape(format!(
                "row {bad} has {} entries, expected {n}",
                rows[bad].len()
            )));
        }
        Ok(PolyMatrix { n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn zeros(n: usize) -> Self {
        PolyMatrix { n, entries: vec![IntPoly::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, IntPoly::one());
        }
        m
    }

    pub fn diagonal(d: &[IntPoly]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &IntPoly {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: IntPoly) {
        self.entries[i * self.n + j] = v;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[IntPoly]> {
        self.entries.chunks(self.n.max(1)).take(self.n)
    }

    /// Submatrix with row `r` and column `c` removed.
    pub fn minor(&self, r: usize, c: usize) -> PolyMatrix {
        let mut entries = Vec::with_capacity((self.n - 1) * (self.n - 1));
        for i in (0..self.n).filter(|&i| i != r) {
            for j in (0..self.n).filter(|&j| j != c) {
                entries.push(self.get(i, j).clone());
            }
        }
        PolyMatrix { n: self.n - 1, entries }
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.n != other.n {
            return Err(Error::Shape(format!("cannot multiply {0}x{0} by {1}x{1}", self.n, other.n)));
        }
        let n = self.n;
        let mut out = PolyMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = IntPoly::zero();
                for k in 0..n {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Sum over rows of the largest entry degree; `None` if a row is zero.
    pub fn degree_bound(&self) -> Option<usize> {
        self.rows()
            .map(|row| row.iter().map(IntPoly::degree).max().filter(|&d| d >= 0))
            .try_fold(0usize, |acc, d| d.map(|d| acc + d as usize))
    }

    pub fn eval(&self, x: &BigInt) -> Vec<Vec<BigInt>> {
        self.rows()
            .map(|row| row.iter().map(|e| e.eval(x)).collect())
            .collect()
    }
}

/// Square matrix over a number field.
#[derive(Clone, Debug)]
pub struct FieldMatrix {
    field: Arc<NumberField>,
    n: usize,
    entries: Vec<NFElem>,
}

impl FieldMatrix {
    /// Image of `m` under ℤ[t] → ℚ[t]/⟨φ⟩.
    pub fn reduce(m: &PolyMatrix, field: &Arc<NumberField>) -> Self {
        FieldMatrix {
            field: Arc::clone(field),
            n: m.n,
            entries: m.entries.iter().map(|e| field.reduce_int(e)).collect(),
        }
    }

    pub fn from_elems(field: &Arc<NumberField>, n: usize, entries: Vec<NFElem>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Shape(format!("expected {} entries, got {}", n * n, entries.len())));
        }
        Ok(FieldMatrix { field: Arc::clone(field), n, entries })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &NFElem {
        &self.entries[i * self.n + j]
    }
}

/// Evaluation points 0, 1, −1, 2, −2, …
pub fn evaluation_points(count: usize) -> impl Iterator<Item = BigInt> {
    (0..count).map(|k| {
        let m = (k as i64 + 1) / 2;
        BigInt::from(if k % 2 == 1 { m } else { -m })
    })
}

/// Fraction-free Gaussian elimination; exact integer determinant.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Newton interpolation through integer points, returned in the monomial
/// basis over ℚ.
pub fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> RatPoly {
    let n = xs.len();
    let mut c: Vec<BigRational> = ys.iter().cloned().map(BigRational::from_integer).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let den = BigRational::from_integer(&xs[i] - &xs[i - level]);
            c[i] = (&c[i] - &c[i - 1]) / den;
        }
    }
    let mut p = RatPoly::zero();
    for k in (0..n).rev() {
        let shift = RatPoly::new(vec![BigRational::from_integer(-&xs[k]), BigRational::one()]);
        p = &(&p * &shift) + &RatPoly::constant(c[k].clone());
    }
    p
}

/// Exact determinant over ℤ[t].
pub fn det_poly(m: &PolyMatrix) -> IntPoly {
    if m.n == 0 {
        return IntPoly::one();
    }
    let Some(bound) = m.degree_bound() else {
        return IntPoly::zero();
    };
    let xs: Vec<BigInt> = evaluation_points(bound + 1).collect();
    if let Some(p) = det_poly_mod_prime(m, &xs) {
        return p;
    }
    let ys: Vec<BigInt> = xs.iter().map(|x| bareiss_det(m.eval(x))).collect();
    interpolate(&xs, &ys)
        .to_int()
        .expect("determinant of an integer matrix has integer coefficients")
}

const P61: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    let x = a as u128 * b as u128;
    // 2⁶¹ ≡ 1, so fold the high bits back in
    let r = (x as u64 & P61) + (x >> 61) as u64;
    let r = (r & P61) + (r >> 61);
    if r >= P61 {
        r - P61
    } else {
        r
    }
}


fn to_mod(v: &BigInt) -> u64 {
    let r = v % BigInt::from(P61);
    let r = if r.is_negative() { r + BigInt::from(P61) } else { r };
    r.to_u64().expect("reduced below the modulus")
}

fn inv_mod(a: u64) -> u64 {
    let (mut r0, mut r1) = (P61 as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(P61 as i128) as u64
}

/// Determinant over ℤ/p by elimination; rows already zero in the pivot
/// column are skipped, which keeps sparse matrices cheap.
fn det_mod_prime(mut a: Vec<Vec<u64>>) -> u64 {
    let n = a.len();
    let mut det = 1u64;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| a[i][k] != 0) else {
            return 0;
        };
        if piv != k {
            a.swap(k, piv);
            det = (P61 - det) % P61;
        }
        det = mul_mod(det, a[k][k]);
        let inv = inv_mod(a[k][k]);
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            if row[k] == 0 {
                continue;
            }
            let f = mul_mod(row[k], inv);
            for j in k + 1..n {
                if pivot_row[j] != 0 {
                    row[j] = (row[j] + P61 - mul_mod(f, pivot_row[j])) % P61;
                }
            }
        }
    }
    det
}

/// Evaluation, elimination and interpolation all modulo 2⁶¹ − 1, lifted to
/// the symmetric range. Only used when ‖det‖₁ ≤ ∏ᵢ Σⱼ ‖aᵢⱼ‖₁ guarantees
/// the lift is exact.
fn det_poly_mod_prime(m: &PolyMatrix, xs: &[BigInt]) -> Option<IntPoly> {
    let mut bound = 1.0f64;
    for row in m.rows() {
        let norm: f64 = row.iter().flat_map(|p| p.coeffs()).map(|c| c.to_f64().unwrap_or(f64::INFINITY).abs()).sum();
        bound *= norm;
    }
    // NaN and infinity both fail the bound
    if bound.is_nan() || bound >= (P61 / 4) as f64 {
        return None;
    }
    let entries: Vec<Vec<u64>> = m.entries.iter().map(|p| p.coeffs().iter().map(to_mod).collect()).collect();
    let xm: Vec<u64> = xs.iter().map(to_mod).collect();
    let ys: Vec<u64> = xm
        .iter()
        .map(|&x| {
            let rows = entries
                .chunks(m.n)
                .map(|row| {
                    row.iter()
                        .map(|c| c.iter().rev().fold(0, |acc, &a| (mul_mod(acc, x) + a) % P61))
                        .collect()
                })
                .collect();
            det_mod_prime(rows)
        })
        .collect();
    let n = xs.len();
    let mut c = ys;
    let mut inverses = HashMap::new();
    for level in 1..n {
        for i in (level..n).rev() {
            let den = (xm[i] + P61 - xm[i - level]) % P61;
            let inv = *inverses.entry(den).or_insert_with(|| inv_mod(den));
            let num = (c[i] + P61 - c[i - 1]) % P61;
            c[i] = mul_mod(num, inv);
        }
    }
    // Horner on the Newton form: p = c_k + (t − x_k)·p
    let mut p: Vec<u64> = Vec::with_capacity(n);
    for k in (0..n).rev() {
        let neg_x = (P61 - xm[k]) % P61;
        let mut next = vec![0u64; p.len() + 1];
        for (i, &a) in p.iter().enumerate() {
            next[i + 1] = (next[i + 1] + a) % P61;
            next[i] = (next[i] + mul_mod(a, neg_x)) % P61;
        }
        next[0] = (next[0] + c[k]) % P61;
        p = next;
    }
    let half = P61 / 2;
    let coeffs = p
        .into_iter()
        .map(|a| if a > half { BigInt::from(a) - BigInt::from(P61) } else { BigInt::from(a) })
        .collect();
    Some(IntPoly::new(coeffs))
}

/// An upper bound on the nullity of `m` over ℚ[t]/⟨φ⟩, from the nullity of
/// `m(α)` over 𝔽_q for roots α of φ modulo small primes q. If φ divides a
/// minor then the minor vanishes at α, so reduction never gains rank. A
/// bound of 1 is exact, since φ | det forces nullity ≥ 1.
pub fn nullity_bound_mod_root(m: &PolyMatrix, phi: &IntPoly, attempts: usize) -> Option<usize> {
    let mut best: Option<usize> = None;
    let mut tried = 0;
    for q in (1009u64..200_000).step_by(2).filter(|&q| is_small_prime(q)).take(64) {
        let reduce = |c: &BigInt| c.mod_floor(&BigInt::from(q)).to_u64().expect("reduced mod q");
        let phi_q: Vec<u64> = phi.coeffs().iter().map(reduce).collect();
        if phi_q.last() == Some(&0) {
            continue;
        }
        let horner = |c: &[u64], x: u64| c.iter().rev().fold(0, |acc, &a| (acc * x + a) % q);
        let Some(alpha) = (0..q).find(|&x| horner(&phi_q, x) == 0) else {
            continue;
        };
        let rows: Vec<Vec<u64>> = m
            .rows()
            .map(|row| {
                row.iter()
                    .map(|p| horner(&p.coeffs().iter().map(reduce).collect::<Vec<_>>(), alpha))
                    .collect()
            })
            .collect();
        let nullity = m.n - rank_mod_small_prime(rows, q);
        best = Some(best.map_or(nullity, |b| b.min(nullity)));
        tried += 1;
        if best == Some(1) || tried == attempts {
            break;
        }
    }
    best
}

fn is_small_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn pow_mod_small(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    acc
}

fn rank_mod_small_prime(mut a: Vec<Vec<u64>>, q: u64) -> usize {
    let n = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..n).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = pow_mod_small(a[rank][c], q - 2, q);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let f = row[c] * inv % q;
            for j in c..cols {
                row[j] = (row[j] + q * q - f * pivot_row[j]) % q;
            }
        }
        rank += 1;
    }
    rank
}

/// Size of a field element's representative, for pivot selection.
fn pivot_cost(x: &NFElem) -> u64 {
    let rep = x.rep();
    let bits: u64 = rep.coeffs().iter().map(|c| c.numer().bits() + c.denom().bits()).sum();
    (rep.degree().max(0) as u64) << 32 | bits
}

/// `n − rank` by Gaussian elimination. Pivots are the cheapest remaining
/// entries anywhere in the trailing block (rank ignores column order),
/// which keeps the representatives from growing.
pub fn nullity_over_field(m: &FieldMatrix) -> usize {
    let n = m.n;
    let mut rows: Vec<Vec<NFElem>> = m.entries.chunks(n.max(1)).take(n).map(<[_]>::to_vec).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    while rank < n {
        let best = (rank..n)
            .flat_map(|i| (rank..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !rows[i][cols[j]].is_zero())
            .min_by_key(|&(i, j)| pivot_cost(&rows[i][cols[j]]));
        let Some((pi, pj)) = best else {
            break;
        };
        rows.swap(rank, pi);
        cols.swap(rank, pj);
        let col = cols[rank];
        let inv = rows[rank][col].inv().expect("pivot is nonzero");
        let pivot_row: Vec<NFElem> = rows[rank]
            .iter()
            .map(|x| if x.is_zero() { x.clone() } else { x.mul(&inv).expect("same field") })
            .collect();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for &j in &cols[rank..] {
                if pivot_row[j].is_zero() {
                    continue;
                }
                let delta = factor.mul(&pivot_row[j]).expect("same field");
                row[j] = row[j].sub(&delta).expect("same field");
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    n - rank
}

/// Exponent of `phi` in the LCM of the denominators of the reduced entries
/// of `m⁻¹`, computed as `e* − min v_φ(cofactor)` over all cofactors in
/// row-major order. With `stop_at = Some(s)` the scan stops as soon as the
/// running value reaches `s`.
pub fn inv_denominator_multiplicity(
    m: &PolyMatrix,
    phi: &IntPoly,
    e_star: u32,
    stop_at: Option<u32>,
) -> Result<u32> {
    if phi.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    if det_poly(m).is_zero() {
        return Err(Error::SingularMatrix);
    }
    let n = m.n;
    if n == 0 {
        return Ok(0);
    }
    let mut min_val = e_star;
    for i in 0..n {
        for j in 0..n {
            let c = det_poly(&m.minor(i, j));
            if c.is_zero() {
                continue;
            }
            let v = multiplicity_capped(&c, phi, min_val)?;
            min_val = min_val.min(v);
            let d1 = e_star - min_val;
            if min_val == 0 || stop_at.is_some_and(|s| d1 >= s) {
                return Ok(d1);
            }
        }
    }
    Ok(e_star - min_val)
}
