//! Arithmetic in ℚ(ω) = ℚ[t]/⟨φ⟩ for an irreducible φ.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::polyring::{IntPoly, RatPoly};

/// The field ℚ[t]/⟨modulus⟩. Irreducibility of the modulus is the caller's
/// responsibility; it is not re-checked here.
#[derive(Debug, PartialEq, Eq)]
pub struct NumberField {
    modulus: IntPoly,
    monic: RatPoly,
}

impl NumberField {
    pub fn new(modulus: IntPoly) -> Result<Arc<Self>> {
        if modulus.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if modulus.is_constant() {
            return Err(Error::ConstantPolynomial);
        }
        let monic = modulus.to_rat().monic();
        Ok(Arc::new(NumberField { modulus, monic }))
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree() as usize
    }

    pub fn zero(self: &Arc<Self>) -> NFElem {
        NFElem { field: Arc::clone(self), rep: RatPoly::zero() }
    }

    pub fn one(self: &Arc<Self>) -> NFElem {
        NFElem { field: Arc::clone(self), rep: RatPoly::one() }
    }

    /// Image of `f` under the quotient map.
    pub fn reduce(self: &Arc<Self>, f: &RatPoly) -> NFElem {
        let rep = if f.degree() < self.monic.degree() {
            f.clone()
        } else {
            f.rem(&self.monic).expect("modulus is nonzero")
        };
        NFElem { field: Arc::clone(self), rep }
    }

    pub fn reduce_int(self: &Arc<Self>, f: &IntPoly) -> NFElem {
        self.reduce(&f.to_rat())
    }

    /// ω, the class of `t`.
    pub fn generator(self: &Arc<Self>) -> NFElem {
        self.reduce_int(&IntPoly::t())
    }
}

/// Element of a [`NumberField`], stored as its reduced representative.
#[derive(Clone, PartialEq, Eq)]
pub struct NFElem {
    field: Arc<NumberField>,
    rep: RatPoly,
}

impl NFElem {
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn rep(&self) -> &RatPoly {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rep.is_one()
    }

    fn same_field(&self, other: &NFElem) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field.modulus == other.field.modulus {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    fn with_rep(&self, rep: RatPoly) -> NFElem {
        NFElem { field: Arc::clone(&self.field), rep }
    }

    pub fn add(&self, other: &NFElem) -> Result<NFElem> {
        self.same_field(other)?;
        Ok(self.with_rep(&self.rep + &other.rep))
    }

    pub fn sub(&self, other: &NFElem) -> Result<NFElem> {
        self.same_field(other)?;
        Ok(self.with_rep(&self.rep - &other.rep))
    }

    pub fn neg(&self) -> NFElem {
        self.with_rep(-&self.rep)
    }

    pub fn mul(&self, other: &NFElem) -> Result<NFElem> {
        self.same_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.field.zero());
        }
        Ok(self.field.reduce(&(&self.rep * &other.rep)))
    }

    pub fn scale(&self, c: &BigRational) -> NFElem {
        self.with_rep(self.rep.scale(c))
    }

    /// Inverse via the extended Euclidean algorithm on (rep, modulus).
    pub fn inv(&self) -> Result<NFElem> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        if self.rep.degree() == 0 {
            return Ok(self.with_rep(RatPoly::constant(self.rep.coeffs()[0].recip())));
        }
        let (g, u, _) = self.rep.ext_gcd(&self.field.monic);
        debug_assert!(g.is_one(), "modulus must be irreducible");
        Ok(self.field.reduce(&u))
    }
}

impl fmt::Debug for NFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] mod ({})", self.rep, self.field.modulus)
    }
}
