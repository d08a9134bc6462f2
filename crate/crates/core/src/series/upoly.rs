use std::fmt;

use rug::Rational;

use super::coeff::{Coeff, StaticZero};

/// Polynomial in the block weight `u` with rational coefficients.
///
/// Dense representation, index `k` holds `[u^k]`; trailing zeros are trimmed so
/// that structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.cmp0().is_eq()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn constant(c: Rational) -> Self {
        UPoly::new(vec![c])
    }

    /// The monomial `u`.
    pub fn u() -> Self {
        UPoly::new(vec![Rational::new(), Rational::from(1)])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `[u^k]`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, u: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= u;
            acc += c;
        }
        acc
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.cmp0().is_eq() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*u")?,
                _ => write!(f, "{c}*u^{k}")?,
            }
        }
        Ok(())
    }
}

impl Coeff for UPoly {
    fn zero_like(&self) -> Self {
        UPoly::default()
    }
    fn one_like(&self) -> Self {
        UPoly::constant(Rational::from(1))
    }
    fn from_i64_like(&self, v: i64) -> Self {
        UPoly::constant(Rational::from(v))
    }
    fn from_rational_like(&self, v: &Rational) -> Self {
        UPoly::constant(v.clone())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
    fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return UPoly::default();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        UPoly::new(out)
    }
    fn neg(&self) -> Self {
        UPoly::new(self.coeffs.iter().map(|c| Rational::from(-c)).collect())
    }
}

impl StaticZero for UPoly {
    fn zero() -> Self {
        UPoly::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_eval() {
        let p = UPoly::u().add(&UPoly::constant(Rational::from(1)));
        let sq = p.mul(&p);
        assert_eq!(sq.coeffs(), &[Rational::from(1), Rational::from(2), Rational::from(1)]);
        assert_eq!(sq.eval(&Rational::from(2)), 9);
        assert!(sq.sub(&sq).is_zero());
        assert_eq!(format!("{sq}"), "1 + 2*u + 1*u^2");
    }
}
