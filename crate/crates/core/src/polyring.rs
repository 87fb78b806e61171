//! Univariate polynomials over ℤ and ℚ.
//!
//! Coefficients are stored in ascending degree order and the zero polynomial
//! is the empty coefficient list. Every constructor trims trailing zeros, so
//! structural equality is polynomial equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Polynomial with arbitrary-precision integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

/// Polynomial with rational coefficients in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

fn trim<T: Zero>(v: &mut Vec<T>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        trim(&mut coeffs);
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        Self::from_i64s(&[0, 1])
    }

    pub fn monomial(c: BigInt, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, with the zero polynomial at −1.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// gcd of the coefficients, always positive.
    pub fn content(&self) -> Result<BigInt> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self
            .coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c)))
    }

    /// Splits `f` as `content · primitive_part` with a positive content.
    pub fn content_primitive(&self) -> Result<(BigInt, IntPoly)> {
        let c = self.content()?;
        let pp = IntPoly {
            coeffs: self.coeffs.iter().map(|x| x / &c).collect(),
        };
        Ok((c, pp))
    }

    /// Primitive part with a positive leading coefficient.
    pub fn primitive_monic_sign(&self) -> Result<IntPoly> {
        let (_, pp) = self.content_primitive()?;
        Ok(if pp.coeffs.last().is_some_and(Signed::is_negative) {
            -pp
        } else {
            pp
        })
    }

    /// Number of trailing powers of `t`, i.e. the index of the first
    /// nonzero coefficient.
    pub fn t_valuation(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(0)
    }

    /// Divides out `t^k` for the largest possible `k`.
    pub fn strip_t(&self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs[self.t_valuation()..].to_vec(),
        }
    }

    /// Exact division over ℤ; `None` when `d` does not divide `self` in ℤ[t].
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.degree() < d.degree() {
            return None;
        }
        let dl = d.coeffs.last().unwrap();
        let dn = d.coeffs.len();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dn + 1];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dn - 1];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(dl);
            if !r.is_zero() {
                return None;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &q * dc;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(quot))
    }

    /// Pseudo-remainder `lc(d)^(deg f − deg d + 1) · f mod d`.
    pub fn pseudo_rem(&self, d: &IntPoly) -> Result<IntPoly> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.degree() < d.degree() {
            return Ok(self.clone());
        }
        let dl = d.coeffs.last().unwrap().clone();
        let dn = d.coeffs.len();
        let mut rem = self.coeffs.clone();
        let mut steps = self.coeffs.len() - dn + 1;
        while rem.len() >= dn {
            let top = rem.pop().unwrap();
            for c in rem.iter_mut() {
                *c *= &dl;
            }
            let off = rem.len() + 1 - dn;
            for (i, dc) in d.coeffs[..dn - 1].iter().enumerate() {
                rem[off + i] -= &top * dc;
            }
            trim(&mut rem);
            steps -= 1;
        }
        let fix = num_traits::pow(dl, steps);
        Ok(IntPoly::new(rem).scale(&fix))
    }

    /// Division with remainder over ℚ.
    pub fn div_rem_rational(&self, d: &IntPoly) -> Result<(RatPoly, RatPoly)> {
        RatPoly::from(self).div_rem(&RatPoly::from(d))
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::from(self)
    }

    /// Reversal `t^deg · f(1/t)`.
    pub fn reversed(&self) -> IntPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPoly::new(c)
    }
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        trim(&mut coeffs);
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn from_ratios(coeffs: &[(i64, i64)]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&(n, d)| BigRational::new(n.into(), d.into()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatPoly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => Self::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &RatPoly) -> Result<(RatPoly, RatPoly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.degree() < d.degree() {
            return Ok((Self::zero(), self.clone()));
        }
        let inv_lead = d.coeffs.last().unwrap().recip();
        let dn = d.coeffs.len();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); rem.len() - dn + 1];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dn - 1] * &inv_lead;
            if q.is_zero() {
                continue;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &q * dc;
            }
            quot[k] = q;
        }
        rem.truncate(dn - 1);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn rem(&self, d: &RatPoly) -> Result<RatPoly> {
        Ok(self.div_rem(d)?.1)
    }

    /// Monic gcd over ℚ; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: returns `(g, u, v)` with `u·self + v·other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &RatPoly) -> (RatPoly, RatPoly, RatPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (RatPoly::one(), RatPoly::zero());
        let (mut t0, mut t1) = (RatPoly::zero(), RatPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.coeffs.last().cloned() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = l.recip();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    /// Clears denominators: returns `(c, g)` with `self = c · g`, `g` a
    /// primitive integer polynomial with positive leading coefficient.
    pub fn to_int_primitive(&self) -> Result<(BigRational, IntPoly)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let p = IntPoly::new(ints);
        let (mut cont, mut pp) = p.content_primitive()?;
        if pp.coeffs.last().unwrap().is_negative() {
            pp = -pp;
            cont = -cont;
        }
        Ok((BigRational::new(cont, den), pp))
    }

    /// Exact conversion when every coefficient is an integer.
    pub fn to_int(&self) -> Option<IntPoly> {
        if self.coeffs.iter().all(|c| c.is_integer()) {
            Some(IntPoly::new(
                self.coeffs.iter().map(|c| c.to_integer()).collect(),
            ))
        } else {
            None
        }
    }
}

impl From<&IntPoly> for RatPoly {
    fn from(p: &IntPoly) -> Self {
        RatPoly {
            coeffs: p
                .coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        }
    }
}

impl From<IntPoly> for RatPoly {
    fn from(p: IntPoly) -> Self {
        RatPoly::from(&p)
    }
}

macro_rules! impl_ring_ops {
    ($ty:ident, $coef:ty) => {
        impl<'a> Add<&'a $ty> for &'a $ty {
            type Output = $ty;
            fn add(self, rhs: &$ty) -> $ty {
                let n = self.coeffs.len().max(rhs.coeffs.len());
                let mut out: Vec<$coef> = Vec::with_capacity(n);
                for k in 0..n {
                    out.push(match (self.coeffs.get(k), rhs.coeffs.get(k)) {
                        (Some(a), Some(b)) => a + b,
                        (Some(a), None) => a.clone(),
                        (None, Some(b)) => b.clone(),
                        (None, None) => unreachable!(),
                    });
                }
                $ty::new(out)
            }
        }

        impl<'a> Sub<&'a $ty> for &'a $ty {
            type Output = $ty;
            fn sub(self, rhs: &$ty) -> $ty {
                let n = self.coeffs.len().max(rhs.coeffs.len());
                let mut out: Vec<$coef> = Vec::with_capacity(n);
                for k in 0..n {
                    out.push(match (self.coeffs.get(k), rhs.coeffs.get(k)) {
                        (Some(a), Some(b)) => a - b,
                        (Some(a), None) => a.clone(),
                        (None, Some(b)) => -b,
                        (None, None) => unreachable!(),
                    });
                }
                $ty::new(out)
            }
        }

        impl<'a> Mul<&'a $ty> for &'a $ty {
            type Output = $ty;
            fn mul(self, rhs: &$ty) -> $ty {
                if self.is_zero() || rhs.is_zero() {
                    return $ty::zero();
                }
                let mut out: Vec<$coef> =
                    vec![<$coef>::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
                for (i, a) in self.coeffs.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (j, b) in rhs.coeffs.iter().enumerate() {
                        out[i + j] += a * b;
                    }
                }
                $ty::new(out)
            }
        }

        impl Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $ty {
                    coeffs: self.coeffs.iter().map(|c| -c).collect(),
                }
            }
        }

        impl Neg for $ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                -&self
            }
        }

        impl Add for $ty {
            type Output = $ty;
            fn add(self, rhs: $ty) -> $ty {
                &self + &rhs
            }
        }

        impl Sub for $ty {
            type Output = $ty;
            fn sub(self, rhs: $ty) -> $ty {
                &self - &rhs
            }
        }

        impl Mul for $ty {
            type Output = $ty;
            fn mul(self, rhs: $ty) -> $ty {
                &self * &rhs
            }
        }
    };
}

impl_ring_ops!(IntPoly, BigInt);
impl_ring_ops!(RatPoly, BigRational);

impl std::iter::Product for IntPoly {
    fn product<I: Iterator<Item = IntPoly>>(iter: I) -> Self {
        iter.fold(IntPoly::one(), |acc, p| &acc * &p)
    }
}

/// Primitive gcd over ℤ[t] by a primitive pseudo-remainder sequence. The
/// result is primitive with positive leading coefficient.
pub fn poly_gcd(f: &IntPoly, g: &IntPoly) -> Result<IntPoly> {
    match (f.is_zero(), g.is_zero()) {
        (true, true) => return Err(Error::ZeroPolynomial),
        (false, true) => return f.primitive_monic_sign(),
        (true, false) => return g.primitive_monic_sign(),
        _ => {}
    }
    let (mut a, mut b) = if f.degree() >= g.degree() {
        (f.content_primitive()?.1, g.content_primitive()?.1)
    } else {
        (g.content_primitive()?.1, f.content_primitive()?.1)
    };
    while !b.is_zero() {
        let r = a.pseudo_rem(&b)?;
        a = b;
        b = if r.is_zero() {
            r
        } else {
            r.content_primitive()?.1
        };
    }
    a.primitive_monic_sign()
}

/// Largest `k` with `phi^k | f` in ℚ[t].
pub fn multiplicity(f: &IntPoly, phi: &IntPoly) -> Result<u32> {
    multiplicity_capped(f, phi, u32::MAX)
}

/// As [`multiplicity`], but stops counting at `cap`.
pub fn multiplicity_capped(f: &IntPoly, phi: &IntPoly, cap: u32) -> Result<u32> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if phi.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    // Gauss's lemma: a primitive divisor over ℚ divides over ℤ.
    let (_, p) = phi.content_primitive()?;
    let mut cur = f.clone();
    let mut k = 0;
    while k < cap {
        match cur.div_exact(&p) {
            Some(q) => {
                cur = q;
                k += 1;
            }
            None => break,
        }
    }
    Ok(k)
}

/// True iff the coefficient sequence is a palindrome.
pub fn is_symmetric(f: &IntPoly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let c = f.strip_t().coeffs;
    Ok(c.iter().eq(c.iter().rev()))
}

/// Canonical generator of the ideal `⟨f⟩ ⊂ ℚ[t, t⁻¹]`: strips powers of `t`,
/// takes the primitive part, and makes the constant term positive.
pub fn normalize_delta(f: &IntPoly) -> Result<IntPoly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (_, pp) = f.strip_t().content_primitive()?;
    Ok(if pp.coeffs[0].is_negative() { -pp } else { pp })
}

pub fn normalize_delta_rat(f: &RatPoly) -> Result<IntPoly> {
    let (_, p) = f.to_int_primitive()?;
    normalize_delta(&p)
}

fn fmt_terms<T, F>(f: &mut fmt::Formatter<'_>, coeffs: &[T], render: F) -> fmt::Result
where
    T: Zero + Signed + One + Clone,
    F: Fn(&T) -> String,
{
    if coeffs.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        let show_coeff = k == 0 || !mag.is_one();
        if show_coeff {
            write!(f, "{}", render(&mag))?;
        }
        match k {
            0 => {}
            1 => write!(f, "t")?,
            _ => write!(f, "t^{k}")?,
        }
    }
    Ok(())
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.coeffs, |c| c.to_string())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.coeffs, |c| {
            if c.is_integer() {
                c.numer().to_string()
            } else {
                format!("({c})")
            }
        })
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly({self})")
    }
}

impl PartialOrd for IntPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by degree, then lexicographically on ascending coefficients.
impl Ord for IntPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

// JSON form: array of ascending integer coefficients, e.g. [1,-1,1].
impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            let v = c
                .to_i128()
                .ok_or_else(|| serde::ser::Error::custom(Error::CoefficientOverflow))?;
            seq.serialize_element(&v)?;
        }
        seq.end()
    }
}

struct Coeff(BigInt);

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Coeff;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "an integer coefficient")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Coeff, E> {
                Ok(Coeff(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Coeff, E> {
                Ok(Coeff(v.into()))
            }
            fn visit_i128<E: de::Error>(self, v: i128) -> std::result::Result<Coeff, E> {
                Ok(Coeff(v.into()))
            }
            fn visit_u128<E: de::Error>(self, v: u128) -> std::result::Result<Coeff, E> {
                Ok(Coeff(v.into()))
            }
        }
        d.deserialize_i128(V)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = IntPoly;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "an array of integer coefficients")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<IntPoly, A::Error> {
                let mut out = Vec::new();
                while let Some(Coeff(c)) = seq.next_element()? {
                    out.push(c);
                }
                Ok(IntPoly::new(out))
            }
        }
        d.deserialize_seq(V)
    }
}
