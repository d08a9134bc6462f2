//! Polynomials `P(z, M)` with rational coefficients, used as algebraic
//! descriptors of counting series.

use std::collections::BTreeMap;
use std::fmt;

use rug::Rational;

use super::coeff::{Coeff, FieldCoeff};
use super::Series;
use crate::error::{Error, Result};

/// Sparse bivariate polynomial; the key `(i, j)` stands for `z^i M^j`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(usize, usize), Rational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        BiPoly::monomial(0, 0, c)
    }

    pub fn monomial(i: usize, j: usize, c: Rational) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(i, j, c);
        p
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        BiPoly::monomial(1, 0, Rational::from(1))
    }

    /// The polynomial `M`.
    pub fn m() -> Self {
        BiPoly::monomial(0, 1, Rational::from(1))
    }

    pub fn from_terms<I: IntoIterator<Item = (usize, usize, Rational)>>(terms: I) -> Self {
        let mut p = BiPoly::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    fn add_term(&mut self, i: usize, j: usize, c: Rational) {
        let entry = self.terms.entry((i, j)).or_default();
        *entry += c;
        if entry.cmp0().is_eq() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn coeff(&self, i: usize, j: usize) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn deg_z(&self) -> usize {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn deg_m(&self) -> usize {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (i, j, c) in rhs.terms() {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&Rational::from(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        BiPoly::from_terms(self.terms().map(|(i, j, a)| (i, j, Rational::from(a * c))))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = BiPoly::zero();
        for (i1, j1, a) in self.terms() {
            for (i2, j2, b) in rhs.terms() {
                out.add_term(i1 + i2, j1 + j2, Rational::from(a * b));
            }
        }
        out
    }

    pub fn pow(&self, exp: usize) -> Self {
        let mut out = BiPoly::constant(Rational::from(1));
        for _ in 0..exp {
            out = out.mul(self);
        }
        out
    }

    pub fn diff_z(&self) -> Self {
        BiPoly::from_terms(
            self.terms()
                .filter(|t| t.0 > 0)
                .map(|(i, j, c)| (i - 1, j, Rational::from(c * i as u64))),
        )
    }

    pub fn diff_m(&self) -> Self {
        BiPoly::from_terms(
            self.terms()
                .filter(|t| t.1 > 0)
                .map(|(i, j, c)| (i, j - 1, Rational::from(c * j as u64))),
        )
    }

    /// Evaluates at a point of any coefficient ring.
    pub fn eval<C: Coeff>(&self, z: &C, m: &C) -> C {
        let mut acc = z.zero_like();
        let mut zp = vec![z.one_like()];
        let mut mp = vec![m.one_like()];
        for _ in 0..self.deg_z() {
            let next = zp.last().unwrap().mul(z);
            zp.push(next);
        }
        for _ in 0..self.deg_m() {
            let next = mp.last().unwrap().mul(m);
            mp.push(next);
        }
        for (i, j, c) in self.terms() {
            let term = zp[i].mul(&mp[j]).mul(&z.from_rational_like(c));
            acc = acc.add(&term);
        }
        acc
    }

    /// Numerator of `P(zn/zd, mn/md)`, i.e.
    /// `sum c_ij zn^i zd^(deg_z - i) mn^j md^(deg_m - j)`.
    pub fn substitute(&self, zn: &BiPoly, zd: &BiPoly, mn: &BiPoly, md: &BiPoly) -> BiPoly {
        let (dz, dm) = (self.deg_z(), self.deg_m());
        let powers = |p: &BiPoly, n: usize| {
            let mut v = vec![BiPoly::constant(Rational::from(1))];
            for k in 0..n {
                let next = v[k].mul(p);
                v.push(next);
            }
            v
        };
        let (zn_p, zd_p, mn_p, md_p) = (powers(zn, dz), powers(zd, dz), powers(mn, dm), powers(md, dm));
        let mut out = BiPoly::zero();
        for (i, j, c) in self.terms() {
            let term = zn_p[i].mul(&zd_p[dz - i]).mul(&mn_p[j]).mul(&md_p[dm - j]).scale(c);
            out = out.add(&term);
        }
        out
    }

    /// Divides out the largest power of `z` common to every term.
    pub fn strip_z(&self) -> BiPoly {
        let k = self.terms.keys().map(|t| t.0).min().unwrap_or(0);
        BiPoly::from_terms(self.terms().map(|(i, j, c)| (i - k, j, c.clone())))
    }

    /// The power series root `F` with `F(0) = 0` and `P(z, F(z)) = 0`.
    ///
    /// Requires `P(0, 0) = 0` and `P_M(0, 0) != 0`, which make the root
    /// unique. Coefficients are produced one at a time from the running powers
    /// `F^j`; cost is `O(deg_m * N^2)` ring operations.
    pub fn series_root<C: FieldCoeff>(&self, template: &C, order: usize) -> Result<Series<C>> {
        if !self.coeff(0, 0).cmp0().is_eq() {
            return Err(Error::InvalidArgument("P(0,0) must vanish".into()));
        }
        let c01 = self.coeff(0, 1);
        if c01.cmp0().is_eq() {
            return Err(Error::InvalidArgument("P_M(0,0) must be nonzero".into()));
        }
        let dm = self.deg_m();
        let inv = template.from_rational_like(&Rational::from(c01.recip_ref()));
        let terms: Vec<(usize, usize, C)> = self
            .terms()
            .filter(|&(i, j, _)| (i, j) != (0, 1))
            .map(|(i, j, c)| (i, j, template.from_rational_like(c)))
            .collect();
        // powers[j][n] = [z^n] F^j
        let mut powers: Vec<Vec<C>> = (0..=dm).map(|_| Vec::with_capacity(order + 1)).collect();
        powers[0].push(template.one_like());
        for p in powers.iter_mut().skip(1) {
            p.push(template.zero_like());
        }
        for n in 1..=order {
            powers[0].push(template.zero_like());
            // F_0 = 0, so [z^n] F^j for j >= 2 only involves F_1 .. F_{n-1}.
            for j in 2..=dm {
                let mut acc = template.zero_like();
                for k in 1..n {
                    let f = &powers[1][k];
                    if !f.is_zero() {
                        acc.add_mul(f, &powers[j - 1][n - k]);
                    }
                }
                powers[j].push(acc);
            }
            let mut rhs = template.zero_like();
            for (i, j, c) in &terms {
                if *i <= n {
                    let pc = &powers[*j][n - *i];
                    if !pc.is_zero() {
                        rhs.add_mul(c, pc);
                    }
                }
            }
            let fn_ = rhs.mul(&inv).neg();
            powers[1].push(fn_);
        }
        Ok(Series::from_coeffs(powers.swap_remove(1)))
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(i, j, c)| format!("({c})*z^{i}*M^{j}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from(v)
    }

    #[test]
    fn catalan_root() {
        // z (1 + M)^2 - M = 0
        let one_m = BiPoly::m().add(&BiPoly::constant(q(1)));
        let p = BiPoly::z().mul(&one_m.pow(2)).sub(&BiPoly::m());
        let f = p.series_root(&q(0), 8).unwrap();
        assert_eq!(&f.coeffs()[..6], &[q(0), q(1), q(2), q(5), q(14), q(42)]);
        let ff = p.series_root(&rug::Float::with_val(128, 0), 8).unwrap();
        assert_eq!(ff.coeff(5).to_f64(), 42.0);
    }

    #[test]
    fn substitution_and_strip() {
        // P = M - z; substitute z -> w (1 + B), M -> B gives B - w - wB
        let p = BiPoly::m().sub(&BiPoly::z());
        let one = BiPoly::constant(q(1));
        let s = p.substitute(&BiPoly::z().mul(&BiPoly::m().add(&one)), &one, &BiPoly::m(), &one);
        assert_eq!(s.coeff(0, 1), 1);
        assert_eq!(s.coeff(1, 0), -1);
        assert_eq!(s.coeff(1, 1), -1);
        let z2 = BiPoly::monomial(2, 1, q(3)).add(&BiPoly::monomial(3, 0, q(1)));
        assert_eq!(
            z2.strip_z(),
            BiPoly::monomial(0, 1, q(3)).add(&BiPoly::monomial(1, 0, q(1)))
        );
    }

    #[test]
    fn derivatives_and_eval() {
        let p = BiPoly::from_terms([(2, 1, q(3)), (0, 3, q(-1))]);
        assert_eq!(p.diff_z(), BiPoly::monomial(1, 1, q(6)));
        assert_eq!(p.diff_m(), BiPoly::from_terms([(2, 0, q(3)), (0, 2, q(-3))]));
        assert_eq!(p.eval(&q(2), &q(1)), 11);
    }
}
