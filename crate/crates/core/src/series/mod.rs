//! Truncated formal power series.
//!
//! A [`Series`] of order `N` stores `[z^0] ..= [z^N]`; everything beyond `N`
//! is unknown rather than zero. Binary operations truncate to the smaller of
//! the two orders. Polynomials are represented by zero-padding to whatever
//! order is needed, which is exact.

mod algebraic;
mod coeff;
mod text;
mod upoly;

pub use algebraic::BiPoly;
pub use coeff::{Coeff, FieldCoeff, StaticZero};
pub use text::{read_series, write_series};
pub use upoly::UPoly;

use rug::Rational;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Series<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> Series<C> {
    /// Builds a series whose order is `coeffs.len() - 1`.
    ///
    /// Panics on an empty vector: a series always knows at least `[z^0]`.
    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        Series { coeffs }
    }

    /// Exact polynomial padded (or cut) to the given order.
    pub fn polynomial(mut coeffs: Vec<C>, order: usize) -> Self {
        assert!(!coeffs.is_empty(), "template coefficient required");
        let zero = coeffs[0].zero_like();
        coeffs.resize(order + 1, zero);
        Series { coeffs }
    }

    pub fn zeros_like(template: &C, order: usize) -> Self {
        Series {
            coeffs: vec![template.zero_like(); order + 1],
        }
    }

    pub fn constant_like(c: C, order: usize) -> Self {
        let mut s = Series::zeros_like(&c, order);
        s.coeffs[0] = c;
        s
    }

    /// The series `z`, truncated at `order`.
    pub fn variable_like(template: &C, order: usize) -> Self {
        let mut s = Series::zeros_like(template, order);
        if order >= 1 {
            s.coeffs[1] = template.one_like();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &C {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn set_coeff(&mut self, n: usize, c: C) {
        self.coeffs[n] = c;
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        Series {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    fn zero_coeff(&self) -> C {
        self.coeffs[0].zero_like()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        Series {
            coeffs: (0..=order).map(|i| self.coeffs[i].add(&rhs.coeffs[i])).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        Series {
            coeffs: (0..=order).map(|i| self.coeffs[i].sub(&rhs.coeffs[i])).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(Coeff::neg).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    /// Adds `c` to the constant term.
    pub fn add_constant(&self, c: &C) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0].add(c);
        out
    }

    /// Cauchy product, truncated to the smaller order.
    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let mut out = vec![self.zero_coeff(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=order - i].iter().enumerate() {
                out[i + j].add_mul(a, b);
            }
        }
        Series { coeffs: out }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut result = Series::constant_like(self.coeffs[0].one_like(), self.order());
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiplies by `z^k`; the order grows by `k` because the shifted-in
    /// coefficients are known zeros.
    pub fn mul_z_pow(&self, k: usize) -> Self {
        let mut coeffs = vec![self.zero_coeff(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Series { coeffs }
    }

    /// `f(z^k)`, order `k * order`.
    pub fn substitute_power(&self, k: usize) -> Self {
        assert!(k >= 1);
        let mut coeffs = vec![self.zero_coeff(); self.order() * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Series { coeffs }
    }

    /// `outer(inner(z))` by Horner's rule.
    ///
    /// The result order is `min(outer.order(), inner.order())`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = Series::constant_like(self.coeffs[order].clone(), order);
        for k in (0..order).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] = acc.coeffs[0].add(&self.coeffs[k]);
        }
        Ok(acc)
    }

    /// Formal derivative; the order drops by one (order 0 stays order 0).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Series::zeros_like(&self.coeffs[0], 0);
        }
        Series {
            coeffs: (1..=self.order())
                .map(|i| self.coeffs[i].mul(&self.coeffs[i].from_i64_like(i as i64)))
                .collect(),
        }
    }

    /// Iterates `m <- f(m)` one coefficient at a time.
    ///
    /// Pass `k` feeds `f` the current approximation truncated at order `k`;
    /// for a contraction the returned `[z^k]` is new and every lower
    /// coefficient is reproduced. A change in an already fixed coefficient is
    /// reported as [`Error::Divergence`].
    pub fn solve_fixed_point<F>(template: &C, order: usize, f: F) -> Result<Self>
    where
        F: Fn(&Series<C>) -> Result<Series<C>>,
    {
        let mut current = Series::zeros_like(template, 0);
        let first = f(&current)?;
        current.coeffs[0] = first.coeffs[0].clone();
        for k in 1..=order {
            let mut probe = current.clone();
            probe.coeffs.push(template.zero_like());
            let next = f(&probe)?;
            if next.order() < k {
                return Err(Error::Divergence { order: k });
            }
            if next.coeffs[..k] != current.coeffs[..] {
                return Err(Error::Divergence { order: k });
            }
            current = next.truncate(k);
        }
        // A final pass confirms that the top coefficient is itself stable.
        let check = f(&current)?;
        if check.order() < order || check.coeffs[..=order] != current.coeffs[..] {
            return Err(Error::Divergence { order });
        }
        Ok(current)
    }
}

impl<C: StaticZero> Series<C> {
    pub fn zero(order: usize) -> Self {
        Series {
            coeffs: vec![C::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = C::zero().one_like();
        s
    }

    pub fn variable(order: usize) -> Self {
        Series::variable_like(&C::zero(), order)
    }
}

impl<C: FieldCoeff> Series<C> {
    /// Multiplicative inverse; requires an invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].inv().ok_or(Error::NotInvertible)?;
        let order = self.order();
        let mut out: Vec<C> = Vec::with_capacity(order + 1);
        out.push(inv0.clone());
        for n in 1..=order {
            let mut acc = self.zero_coeff();
            for k in 1..=n {
                acc.add_mul(&self.coeffs[k], &out[n - k]);
            }
            out.push(acc.mul(&inv0).neg());
        }
        Ok(Series { coeffs: out })
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inverse()?))
    }

    /// Compositional inverse `g` with `h(g(z)) = z`, by Newton iteration with
    /// doubling precision.
    pub fn reversion(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() || self.order() < 1 {
            return Err(Error::NotReversible);
        }
        let inv1 = self.coeffs[1].inv().ok_or(Error::NotReversible)?;
        let order = self.order();
        let dh = self.derivative();
        let mut g = Series::variable_like(&self.coeffs[0], 1).scale(&inv1);
        let mut prec = 1;
        while prec < order {
            prec = (2 * prec).min(order);
            let mut gp = g.clone();
            gp.coeffs.resize(prec + 1, self.zero_coeff());
            let z = Series::variable_like(&self.coeffs[0], prec);
            let residual = self.truncate(prec).compose(&gp)?.sub(&z);
            let mut slope = dh.truncate(prec).compose(&gp)?;
            // The residual vanishes at z^0, so the top coefficient of the
            // slope (unknown when prec = order) never enters the quotient.
            slope.coeffs.resize(prec + 1, self.zero_coeff());
            g = gp.sub(&residual.div(&slope)?);
        }
        if g.order() < order {
            g.coeffs.resize(order + 1, self.zero_coeff());
        }
        Ok(g.truncate(order))
    }

    /// Solves `m = f(m)` by Newton iteration `m + (f(m) - m) / (1 - df(m))`
    /// with doubling precision. `df` returns the derivative of `f` with respect
    /// to its series argument, evaluated at that argument.
    pub fn solve_newton<F, D>(template: &C, order: usize, f: F, df: D) -> Result<Self>
    where
        F: Fn(&Series<C>) -> Result<Series<C>>,
        D: Fn(&Series<C>) -> Result<Series<C>>,
    {
        let mut m = Series::zeros_like(template, 0);
        m.coeffs[0] = f(&m)?.coeffs[0].clone();
        let mut prec = 0;
        while prec < order {
            prec = (2 * prec + 1).min(order);
            let mut mp = m.clone();
            mp.coeffs.resize(prec + 1, template.zero_like());
            let fm = f(&mp)?;
            let dfm = df(&mp)?;
            if fm.order() < prec || dfm.order() < prec {
                return Err(Error::Divergence { order: prec });
            }
            let one = Series::constant_like(template.one_like(), prec);
            let denom = one.sub(&dfm.truncate(prec));
            let step = fm.truncate(prec).sub(&mp).div(&denom)?;
            m = mp.add(&step);
        }
        Ok(m.truncate(order))
    }
}

impl Series<Rational> {
    /// `1 / (1 - z)` to the given order.
    pub fn geometric(order: usize) -> Self {
        Series {
            coeffs: vec![Rational::from(1); order + 1],
        }
    }

    /// True when every coefficient is a nonnegative integer.
    pub fn is_nonnegative_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer() && c.cmp0().is_ge())
    }

    /// Converts every coefficient to a float of the given precision.
    pub fn to_float(&self, prec: u32) -> Series<rug::Float> {
        Series {
            coeffs: self.coeffs.iter().map(|c| rug::Float::with_val(prec, c)).collect(),
        }
    }

    /// Lifts into the bivariate ring (constant polynomials in `u`).
    pub fn to_upoly(&self) -> Series<UPoly> {
        Series {
            coeffs: self.coeffs.iter().map(|c| UPoly::constant(c.clone())).collect(),
        }
    }
}

impl Series<UPoly> {
    /// Specialises `u` to a rational value.
    pub fn eval_u(&self, u: &Rational) -> Series<Rational> {
        Series {
            coeffs: self.coeffs.iter().map(|p| p.eval(u)).collect(),
        }
    }
}

/// `[z^n] M` for the solution of `M = z * phi(M)`, via
/// `(1/n) [X^{n-1}] phi(X)^n`.
pub fn lagrange_coefficient<C: FieldCoeff>(phi: &Series<C>, n: usize) -> Result<C> {
    if n == 0 {
        return Err(Error::InvalidArgument("Lagrange coefficient needs n >= 1".into()));
    }
    if phi.coeff(0).is_zero() {
        return Err(Error::InvalidArgument("phi(0) must be nonzero".into()));
    }
    if phi.order() < n - 1 {
        return Err(Error::InvalidArgument(format!(
            "phi known to order {} but [X^{}] is needed",
            phi.order(),
            n - 1
        )));
    }
    let power = phi.truncate(n - 1).pow(n as u32);
    let inv_n = phi.coeff(0).from_i64_like(n as i64).inv().expect("n >= 1");
    Ok(power.coeff(n - 1).mul(&inv_n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from(v)
    }

    fn series(vals: &[i64]) -> Series<Rational> {
        Series::from_coeffs(vals.iter().map(|&v| q(v)).collect())
    }

    fn catalan(order: usize) -> Series<Rational> {
        // c_n = binom(2n, n) / (n + 1)
        let mut c = vec![q(1)];
        for n in 1..=order {
            let prev = c[n - 1].clone();
            c.push(prev * q(2 * (2 * n as i64 - 1)) / q(n as i64 + 1));
        }
        Series::from_coeffs(c)
    }

    #[test]
    fn add_examples() {
        assert_eq!(series(&[1, 1]).add(&series(&[1, -1])), series(&[2, 0]));
        let s = series(&[4, 5, 6]);
        assert_eq!(Series::<Rational>::zero(2).add(&s), s);
        assert_eq!(series(&[0, 2, 9]).add(&series(&[0, 1, 1])), series(&[0, 3, 10]));
        // mixed orders truncate to the minimum
        assert_eq!(series(&[1, 1, 1]).add(&series(&[1, 1])).order(), 1);
    }

    #[test]
    fn mul_examples() {
        let a = Series::polynomial(vec![q(1), q(1)], 4);
        let b = Series::polynomial(vec![q(1), q(-1)], 4);
        assert_eq!(a.mul(&b), series(&[1, 0, -1, 0, 0]));
        let g = Series::geometric(6);
        assert_eq!(g.mul(&Series::polynomial(vec![q(1), q(-1)], 6)), Series::one(6));
    }

    #[test]
    fn catalan_identity() {
        let c = catalan(20);
        let lhs = c.mul(&c).mul_z_pow(1).truncate(20);
        let rhs = c.sub(&Series::one(20));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn compose_examples() {
        let g = Series::geometric(8);
        let z = Series::variable(8);
        assert_eq!(g.compose(&z).unwrap(), Series::geometric(8));
        let x2 = Series::polynomial(vec![q(0), q(0), q(1)], 4);
        let inner = Series::polynomial(vec![q(0), q(1), q(1)], 4);
        assert_eq!(x2.compose(&inner).unwrap(), series(&[0, 0, 1, 2, 1]));
        assert!(matches!(g.compose(&Series::one(8)), Err(Error::NonzeroConstantTerm)));
    }

    #[test]
    fn reversion_examples() {
        let z = Series::<Rational>::variable(10);
        assert_eq!(z.reversion().unwrap(), z);
        // z / (1 - z)  <->  z / (1 + z)
        let h = Series::geometric(10).mul_z_pow(1).truncate(10);
        let expected: Vec<i64> = (0..=10)
            .map(|n| {
                if n == 0 {
                    0
                } else if n % 2 == 1 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        assert_eq!(h.reversion().unwrap(), series(&expected));
        // z (1 + z)^2: check h(g) = z by direct composition
        let h = Series::polynomial(vec![q(0), q(1), q(2), q(1)], 12);
        let g = h.reversion().unwrap();
        assert_eq!(&g.coeffs()[..4], &[q(0), q(1), q(-2), q(7)]);
        assert_eq!(h.compose(&g).unwrap(), Series::variable(12));
        assert!(matches!(
            Series::<Rational>::one(4).reversion(),
            Err(Error::NotReversible)
        ));
        assert!(matches!(series(&[0, 0, 1]).reversion(), Err(Error::NotReversible)));
    }

    #[test]
    fn lagrange_examples() {
        // phi = 1/(1-X): Catalan(n-1)
        let phi = Series::geometric(10);
        assert_eq!(lagrange_coefficient(&phi, 4).unwrap(), 5);
        // phi = (1+X)^2: (1/n) binom(2n, n-1)
        let phi = Series::polynomial(vec![q(1), q(2), q(1)], 10);
        assert_eq!(lagrange_coefficient(&phi, 2).unwrap(), 2);
        assert_eq!(lagrange_coefficient(&phi, 5).unwrap(), 42);
        let one = Series::<Rational>::one(6);
        assert_eq!(lagrange_coefficient(&one, 1).unwrap(), 1);
        for n in 2..=6 {
            assert_eq!(lagrange_coefficient(&one, n).unwrap(), 0);
        }
        assert!(lagrange_coefficient(&one, 0).is_err());
    }

    #[test]
    fn fixed_point_examples() {
        let z = Series::<Rational>::variable(12);
        // M = z (1 + M)
        let m =
            Series::solve_fixed_point(&q(0), 12, |m| Ok(m.add_constant(&q(1)).mul(&z.truncate(m.order())))).unwrap();
        assert_eq!(
            m,
            Series::geometric(12).mul_z_pow(1).truncate(12).sub(&Series::zero(12))
        );
        // M = z (1 + M)^2: Catalan
        let m = Series::solve_fixed_point(&q(0), 12, |m| {
            let one_m = m.add_constant(&q(1));
            Ok(one_m.mul(&one_m).mul(&z.truncate(m.order())))
        })
        .unwrap();
        assert_eq!(&m.coeffs()[1..5], &[q(1), q(2), q(5), q(14)]);
        // Non-contraction: M = 1 + 2M moves the constant term on every pass
        let bad = Series::solve_fixed_point(&q(0), 3, |m| Ok(m.scale(&q(2)).add_constant(&q(1))));
        assert!(matches!(bad, Err(Error::Divergence { .. })));
    }

    #[test]
    fn newton_agrees_with_iteration() {
        let z = Series::<Rational>::variable(20);
        let f = |m: &Series<Rational>| {
            let one_m = m.add_constant(&q(1));
            Ok(one_m.mul(&one_m).mul(&z.truncate(m.order())))
        };
        let df = |m: &Series<Rational>| Ok(m.add_constant(&q(1)).scale(&q(2)).mul(&z.truncate(m.order())));
        let a = Series::solve_fixed_point(&q(0), 20, f).unwrap();
        let b = Series::solve_newton(&q(0), 20, f, df).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn inverse_and_derivative() {
        let s = series(&[1, -1, 0, 0]);
        assert_eq!(s.inverse().unwrap(), Series::geometric(3));
        assert_eq!(series(&[5, 1, 3, 2]).derivative(), series(&[1, 6, 6]));
        assert!(series(&[0, 1]).inverse().is_err());
    }
}
