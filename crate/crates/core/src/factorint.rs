//! Factorization of integer polynomials into irreducibles over ℚ.
//!
//! Square-free parts are factored modulo the smallest admissible prime
//! `p ≥ 3` with Berlekamp's algorithm, lifted to `p^(2^j)` by quadratic
//! Hensel lifting, and recombined by trial division over subsets of
//! increasing size.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::polyring::{poly_gcd, IntPoly};

/// `unit_sign · ∏ factor^exponent` is the primitive part of the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit_sign: i8,
    pub factors: Vec<(IntPoly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> IntPoly {
        let prod: IntPoly = self.factors.iter().map(|(f, e)| f.pow(*e)).product();
        prod.scale(&BigInt::from(self.unit_sign))
    }

    pub fn exponent_of(&self, phi: &IntPoly) -> u32 {
        self.factors
            .iter()
            .find(|(f, _)| f == phi)
            .map_or(0, |(_, e)| *e)
    }
}

/// Yun's square-free decomposition of the primitive part of `f`, as
/// `(part, exponent)` pairs in increasing exponent order.
pub fn squarefree_decompose(f: &IntPoly) -> Result<Vec<(IntPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    let f = f.primitive_monic_sign()?;
    if squarefree_mod_small_prime(&f) {
        return Ok(vec![(f, 1)]);
    }
    let df = f.derivative();
    let b = poly_gcd(&f, &df)?;
    let mut c = f.div_exact(&b).expect("gcd divides f");
    let mut d = &df.div_exact(&b).expect("gcd divides f'") - &c.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while c.degree() > 0 {
        let a = poly_gcd(&c, &d)?;
        if a.degree() > 0 {
            out.push((a.clone(), i));
        }
        c = c.div_exact(&a).expect("gcd divides c");
        d = &d.div_exact(&a).expect("gcd divides d") - &c.derivative();
        i += 1;
    }
    Ok(out)
}

/// Complete factorization over ℚ with factors primitive, positive leading
/// coefficient, sorted by degree then coefficients.
pub fn factor(f: &IntPoly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (_, pp) = f.content_primitive()?;
    let unit_sign = if pp.leading_coeff().unwrap().is_negative() { -1 } else { 1 };
    if pp.is_constant() {
        return Ok(Factorization { unit_sign, factors: Vec::new() });
    }
    let mut factors = Vec::new();
    for (part, e) in squarefree_decompose(&pp)? {
        for g in factor_squarefree(&part) {
            factors.push((g, e));
        }
    }
    factors.sort();
    Ok(Factorization { unit_sign, factors })
}

/// Irreducible factors of a primitive square-free polynomial with positive
/// leading coefficient.
fn factor_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    if f.degree() <= 1 {
        return vec![f.clone()];
    }
    if f.coeff(0).is_zero() {
        let rest = f.div_exact(&IntPoly::t()).unwrap();
        let mut out = vec![IntPoly::t()];
        if rest.degree() > 0 {
            out.extend(factor_squarefree(&rest));
        }
        return out;
    }
    // Among a few admissible primes, split modulo the one giving the fewest
    // factors; that keeps recombination small. One factor anywhere means f
    // is irreducible.
    let mut best: Option<(u64, ModPoly, Vec<Vec<u64>>)> = None;
    for p in admissible_primes(f).take(PRIME_TRIALS) {
        let fp = ModPoly::from_int(f, p).monic();
        let basis = berlekamp_basis(&fp);
        if basis.len() == 1 {
            return vec![f.clone()];
        }
        if best.as_ref().is_none_or(|(_, _, b)| basis.len() < b.len()) {
            best = Some((p, fp, basis));
        }
    }
    let (p, fp, basis) = best.expect("a square-free polynomial has admissible primes");
    let modular = berlekamp_split(&fp, &basis);
    let modulus_target = BigInt::from(2) * f.leading_coeff().unwrap().abs() * coefficient_bound(f);
    let mut modulus = BigInt::from(p);
    let mut doublings = 0;
    while modulus <= modulus_target {
        modulus = &modulus * &modulus;
        doublings += 1;
    }
    let lifted = multifactor_lift(f, &modular, p, doublings);
    recombine(f, lifted, &modulus)
}

/// Mignotte-style bound on coefficients of any factor: 2^n · (n+1) · ‖f‖∞.
fn coefficient_bound(f: &IntPoly) -> BigInt {
    let n = f.degree() as usize;
    let max = f.coeffs().iter().map(|c| c.abs()).max().unwrap();
    (BigInt::one() << n) * BigInt::from(n + 1) * max
}

/// Square-free modulo some small prime not dividing the leading
/// coefficient implies square-free over ℚ. A cheap screen before Yun.
fn squarefree_mod_small_prime(f: &IntPoly) -> bool {
    let lc = f.leading_coeff().unwrap();
    [3u64, 5, 7, 11, 13].iter().any(|&q| {
        if (lc % BigInt::from(q)).is_zero() {
            return false;
        }
        let fq = ModPoly::from_int(f, q);
        fq.gcd(&fq.derivative()).degree() == 0
    })
}

const PRIME_TRIALS: usize = 5;

/// Odd primes not dividing the leading coefficient and keeping f square-free.
fn admissible_primes(f: &IntPoly) -> impl Iterator<Item = u64> + '_ {
    let lc = f.leading_coeff().unwrap();
    (3u64..).step_by(2).filter(|&q| is_prime(q)).filter(move |&q| {
        if (lc % BigInt::from(q)).is_zero() {
            return false;
        }
        let fp = ModPoly::from_int(f, q);
        fp.gcd(&fp.derivative()).degree() == 0
    })
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Polynomial over 𝔽_p, ascending, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
struct ModPoly {
    c: Vec<u64>,
    p: u64,
}

impl ModPoly {
    fn new(mut c: Vec<u64>, p: u64) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        ModPoly { c, p }
    }

    fn from_int(f: &IntPoly, p: u64) -> Self {
        let pb = BigInt::from(p);
        Self::new(
            f.coeffs()
                .iter()
                .map(|x| x.mod_floor(&pb).to_u64().unwrap())
                .collect(),
            p,
        )
    }

    fn one(p: u64) -> Self {
        Self::new(vec![1], p)
    }

    fn degree(&self) -> isize {
        self.c.len() as isize - 1
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }

    fn monic(&self) -> Self {
        match self.c.last() {
            None => self.clone(),
            Some(&l) => {
                let inv = self.inv(l);
                Self::new(self.c.iter().map(|x| x * inv % self.p).collect(), self.p)
            }
        }
    }

    fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, x)| (k as u64 % self.p) * x % self.p)
                .collect(),
            self.p,
        )
    }

    fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new(
            (0..n)
                .map(|k| {
                    let a = self.c.get(k).copied().unwrap_or(0);
                    let b = o.c.get(k).copied().unwrap_or(0);
                    (a + self.p - b) % self.p
                })
                .collect(),
            self.p,
        )
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::new(Vec::new(), self.p);
        }
        let mut out = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % self.p;
            }
        }
        Self::new(out, self.p)
    }

    fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dn = d.c.len();
        assert!(dn > 0, "division by zero polynomial mod p");
        if self.c.len() < dn {
            return (Self::new(Vec::new(), self.p), self.clone());
        }
        let inv = self.inv(*d.c.last().unwrap());
        let mut rem = self.c.clone();
        let mut quot = vec![0u64; rem.len() - dn + 1];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dn - 1] * inv % self.p;
            if q == 0 {
                continue;
            }
            for (i, dc) in d.c.iter().enumerate() {
                rem[k + i] = (rem[k + i] + self.p - q * dc % self.p) % self.p;
            }
            quot[k] = q;
        }
        rem.truncate(dn - 1);
        (Self::new(quot, self.p), Self::new(rem, self.p))
    }

    fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(s, t)` with `s·self + t·o = 1`; inputs must be coprime.
    fn bezout(&self, o: &Self) -> (Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(p), Self::new(Vec::new(), p));
        let (mut t0, mut t1) = (Self::new(Vec::new(), p), Self::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        assert_eq!(r0.degree(), 0, "bezout on non-coprime inputs");
        let inv = r0.inv(r0.c[0]);
        let scale = |x: &Self| Self::new(x.c.iter().map(|v| v * inv % p).collect(), p);
        (scale(&s0), scale(&t0))
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Berlekamp factorization of a monic square-free polynomial over 𝔽_p into
/// monic irreducibles. Splitting is deterministic: basis vectors in order,
/// shifts `s = 0, 1, …, p−1`.
/// Basis of the Berlekamp subalgebra; its dimension is the number of
/// irreducible factors of the square-free `f`.
fn berlekamp_basis(f: &ModPoly) -> Vec<Vec<u64>> {
    let p = f.p;
    let n = f.degree() as usize;
    // Rows Q_i = t^(i·p) mod f.
    let xp = {
        let mut acc = ModPoly::one(p);
        let mut base = ModPoly::new(vec![0, 1], p);
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(f);
            }
            base = base.mul(&base).rem(f);
            e >>= 1;
        }
        acc
    };
    let mut rows = Vec::with_capacity(n);
    let mut cur = ModPoly::one(p);
    for _ in 0..n {
        let mut r = cur.c.clone();
        r.resize(n, 0);
        rows.push(r);
        cur = cur.mul(&xp).rem(f);
    }
    // Solve v·(Q − I) = 0, i.e. (Q − I)ᵀ v = 0.
    let mut a = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut v = rows[j][i];
            if i == j {
                v = (v + p - 1) % p;
            }
            a[i][j] = v;
        }
    }
    nullspace_mod(a, p)
}

fn berlekamp_split(f: &ModPoly, basis: &[Vec<u64>]) -> Vec<ModPoly> {
    let p = f.p;
    let k = basis.len();
    let mut factors = vec![f.clone()];
    for v in basis {
        if factors.len() == k {
            break;
        }
        let vpoly = ModPoly::new(v.clone(), p);
        if vpoly.degree() <= 0 {
            continue;
        }
        let mut next = Vec::new();
        for u in factors {
            if u.degree() <= 1 {
                next.push(u);
                continue;
            }
            let mut remaining = u.clone();
            for s in 0..p {
                if remaining.degree() <= 0 {
                    break;
                }
                let shifted = vpoly.sub(&ModPoly::new(vec![s], p));
                let g = remaining.gcd(&shifted);
                if g.degree() > 0 {
                    remaining = remaining.div_rem(&g).0;
                    next.push(g);
                }
            }
        }
        factors = next;
    }
    debug_assert_eq!(factors.len(), k);
    factors.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.c.cmp(&b.c)));
    factors
}

/// Basis of the right nullspace of `a` over 𝔽_p.
fn nullspace_mod(mut a: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = pow_mod(a[r][c], p - 2, p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; cols];
            v[fc] = 1;
            for (ri, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = (p - a[ri][fc]) % p;
            }
            v
        })
        .collect()
}

/// Integer polynomial arithmetic modulo `m` (symmetric residues not needed
/// until recombination).
struct ModRing<'a> {
    m: &'a BigInt,
}

impl ModRing<'_> {
    fn reduce(&self, f: &IntPoly) -> IntPoly {
        IntPoly::new(f.coeffs().iter().map(|c| c.mod_floor(self.m)).collect())
    }

    fn mul(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        self.reduce(&(a * b))
    }

    fn sub(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        self.reduce(&(a - b))
    }

    fn add(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        self.reduce(&(a + b))
    }

    /// Division by a monic divisor.
    fn div_rem_monic(&self, a: &IntPoly, d: &IntPoly) -> (IntPoly, IntPoly) {
        let dn = d.coeffs().len();
        if a.coeffs().len() < dn {
            return (IntPoly::zero(), a.clone());
        }
        let mut rem: Vec<BigInt> = a.coeffs().to_vec();
        let mut quot = vec![BigInt::zero(); rem.len() - dn + 1];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dn - 1].mod_floor(self.m);
            if q.is_zero() {
                continue;
            }
            for (i, dc) in d.coeffs().iter().enumerate() {
                rem[k + i] = (&rem[k + i] - &q * dc).mod_floor(self.m);
            }
            quot[k] = q;
        }
        rem.truncate(dn - 1);
        (IntPoly::new(quot), self.reduce(&IntPoly::new(rem)))
    }

    fn inverse(&self, a: &BigInt) -> BigInt {
        let e = a.extended_gcd(self.m);
        debug_assert!(e.gcd.is_one());
        e.x.mod_floor(self.m)
    }
}

fn mod_to_int(f: &ModPoly) -> IntPoly {
    IntPoly::new(f.c.iter().map(|&x| BigInt::from(x)).collect())
}

/// One quadratic Hensel step: from `f ≡ g·h`, `s·g + t·h ≡ 1 (mod m)` with
/// `h` monic, produce the same relations modulo `m²`.
fn hensel_step(
    f: &IntPoly,
    g: &IntPoly,
    h: &IntPoly,
    s: &IntPoly,
    t: &IntPoly,
    m: &BigInt,
) -> (IntPoly, IntPoly, IntPoly, IntPoly) {
    let m2 = m * m;
    let r = ModRing { m: &m2 };
    let e = r.sub(f, &r.mul(g, h));
    let (q, rem) = r.div_rem_monic(&r.mul(s, &e), h);
    let g2 = r.add(&r.add(g, &r.mul(t, &e)), &r.mul(&q, g));
    let h2 = r.add(h, &rem);
    let b = r.sub(&r.add(&r.mul(s, &g2), &r.mul(t, &h2)), &IntPoly::one());
    let (c, d) = r.div_rem_monic(&r.mul(s, &b), &h2);
    let s2 = r.sub(s, &d);
    let t2 = r.sub(&r.sub(t, &r.mul(t, &b)), &r.mul(&c, &g2));
    (g2, h2, s2, t2)
}

/// Lifts `f ≡ lc(f) · ∏ factors (mod p)` to monic factors modulo
/// `p^(2^doublings)`.
fn multifactor_lift(f: &IntPoly, factors: &[ModPoly], p: u64, doublings: u32) -> Vec<IntPoly> {
    let mut modulus = BigInt::from(p);
    for _ in 0..doublings {
        modulus = &modulus * &modulus;
    }
    let ring = ModRing { m: &modulus };
    if factors.len() == 1 {
        let lc_inv = ring.inverse(f.leading_coeff().unwrap());
        return vec![ring.reduce(&f.scale(&lc_inv))];
    }
    let half = factors.len() / 2;
    let (left, right) = factors.split_at(half);
    let prod = |fs: &[ModPoly]| fs.iter().fold(ModPoly::one(p), |acc, x| acc.mul(x));
    let lc_mod = f.leading_coeff().unwrap().mod_floor(&BigInt::from(p)).to_u64().unwrap();
    let g0 = {
        let pl = prod(left);
        ModPoly::new(pl.c.iter().map(|x| x * lc_mod % p).collect(), p)
    };
    let h0 = prod(right);
    let (s0, t0) = g0.bezout(&h0);
    let (mut g, mut h, mut s, mut t) = (mod_to_int(&g0), mod_to_int(&h0), mod_to_int(&s0), mod_to_int(&t0));
    let mut m = BigInt::from(p);
    for _ in 0..doublings {
        (g, h, s, t) = hensel_step(f, &g, &h, &s, &t, &m);
        m = &m * &m;
    }
    let mut out = multifactor_lift(&g, left, p, doublings);
    out.extend(multifactor_lift(&h, right, p, doublings));
    out
}

fn symmetric(f: &IntPoly, m: &BigInt) -> IntPoly {
    let half: BigInt = m >> 1;
    IntPoly::new(
        f.coeffs()
            .iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Zassenhaus recombination by subsets of increasing size.
fn recombine(f: &IntPoly, lifted: Vec<IntPoly>, modulus: &BigInt) -> Vec<IntPoly> {
    let ring = ModRing { m: modulus };
    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut current = f.clone();
    let mut found = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= remaining.len() {
        for subset in remaining.iter().copied().combinations(size) {
            let lc = current.leading_coeff().unwrap().clone();
            let prod = subset
                .iter()
                .fold(IntPoly::constant(lc.clone()), |acc, &i| ring.mul(&acc, &lifted[i]));
            let candidate = symmetric(&prod, modulus);
            let Ok(candidate) = candidate.primitive_monic_sign() else {
                continue;
            };
            if let Some(q) = current.div_exact(&candidate) {
                found.push(candidate);
                current = q.primitive_monic_sign().unwrap();
                remaining.retain(|i| !subset.contains(i));
                continue 'outer;
            }
        }
        size += 1;
    }
    if current.degree() > 0 {
        found.push(current);
    }
    found
}
