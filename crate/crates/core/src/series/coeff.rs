use std::fmt;

use rug::{Float, Rational};

/// Coefficient ring for truncated series.
///
/// Constructors take `&self` as a template so that types carrying a runtime
/// parameter (the working precision of a [`Float`]) need no global state.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_i64_like(&self, v: i64) -> Self;
    fn from_rational_like(&self, v: &Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self) {
        let p = a.mul(b);
        *self = self.add(&p);
    }
}

/// Coefficient types with a context-free zero.
pub trait StaticZero: Coeff {
    fn zero() -> Self;
}

/// Coefficients admitting division.
pub trait FieldCoeff: Coeff {
    fn inv(&self) -> Option<Self>;
}

impl Coeff for Rational {
    fn zero_like(&self) -> Self {
        Rational::new()
    }
    fn one_like(&self) -> Self {
        Rational::from(1)
    }
    fn from_i64_like(&self, v: i64) -> Self {
        Rational::from(v)
    }
    fn from_rational_like(&self, v: &Rational) -> Self {
        v.clone()
    }
    fn is_zero(&self) -> bool {
        self.cmp0() == std::cmp::Ordering::Equal
    }
    fn add(&self, rhs: &Self) -> Self {
        Rational::from(self + rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Rational::from(self - rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Rational::from(self * rhs)
    }
    fn neg(&self) -> Self {
        Rational::from(-self)
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += Rational::from(a * b);
    }
}

impl StaticZero for Rational {
    fn zero() -> Self {
        Rational::new()
    }
}

impl FieldCoeff for Rational {
    fn inv(&self) -> Option<Self> {
        if Coeff::is_zero(self) {
            None
        } else {
            Some(Rational::from(self.recip_ref()))
        }
    }
}

impl Coeff for Float {
    fn zero_like(&self) -> Self {
        Float::new(self.prec())
    }
    fn one_like(&self) -> Self {
        Float::with_val(self.prec(), 1)
    }
    fn from_i64_like(&self, v: i64) -> Self {
        Float::with_val(self.prec(), v)
    }
    fn from_rational_like(&self, v: &Rational) -> Self {
        Float::with_val(self.prec(), v)
    }
    fn is_zero(&self) -> bool {
        Float::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        Float::with_val(self.prec(), self + rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Float::with_val(self.prec(), self - rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Float::with_val(self.prec(), self * rhs)
    }
    fn neg(&self) -> Self {
        Float::with_val(self.prec(), -self)
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
}

impl FieldCoeff for Float {
    fn inv(&self) -> Option<Self> {
        if Float::is_zero(self) {
            None
        } else {
            Some(Float::with_val(self.prec(), self.recip_ref()))
        }
    }
}
