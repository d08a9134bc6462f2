//! Dominant singularity of a series with `k^(-5/2)` coefficient asymptotics,
//! estimated from its leading coefficients.

use rug::ops::Pow;
use rug::Float;

use super::numeric::{extrapolate_to_zero, hurwitz_zeta, rel_err, solve_linear};
use crate::error::{Error, Result};
use crate::series::Series;

/// Number of points in the ratio extrapolation.
const RATIO_POINTS: usize = 9;
/// Number of terms `c_j k^(-5/2 - j)` in the tail model.
const TAIL_TERMS: usize = 7;
/// Agreement required between extrapolations of different depth.
const RATIO_AGREEMENT: f64 = 1e-14;

/// Radius, value and derivative at the radius of a series whose
/// coefficients behave like `R^-k k^(-5/2) (c_0 + c_1 / k + ...)`.
#[derive(Clone, Debug)]
pub struct Singularity {
    pub radius: Float,
    /// `F(R)`
    pub value: Float,
    /// `F'(R)`
    pub slope: Float,
    /// Tail model `f_k R^k ~ sum_j tail[j] k^(-5/2 - j)` fitted at the end of
    /// the known coefficients.
    pub tail: Vec<Float>,
    /// Last coefficient index used.
    pub order: usize,
    /// Coefficients `f_k R^k` for `k <= order`.
    pub scaled: Vec<Float>,
}

fn index_points(order: usize, count: usize) -> Result<Vec<usize>> {
    let step = (order / (2 * count)).max(1);
    if order < step * (count - 1) + 8 {
        return Err(Error::IncreaseOrder { order });
    }
    Ok((0..count).map(|j| order - j * step).collect())
}

/// Ratio-extrapolated radius `R` from coefficients `f_0 ..= f_N`.
pub fn ratio_radius(coeffs: &Series<Float>, points: usize) -> Result<Float> {
    let order = coeffs.order();
    let prec = coeffs.coeff(0).prec();
    let ks = index_points(order, points)?;
    let mut xs = Vec::with_capacity(points);
    let mut ys = Vec::with_capacity(points);
    for &k in &ks {
        let (a, b) = (coeffs.coeff(k), coeffs.coeff(k - 1));
        if a.is_zero() || b.is_zero() || a.is_sign_negative() || b.is_sign_negative() {
            return Err(Error::Stride(format!("coefficient support has gaps near index {k}")));
        }
        xs.push(Float::with_val(prec, k).recip());
        ys.push(Float::with_val(prec, a / b));
    }
    Ok(extrapolate_to_zero(&xs, &ys).recip())
}

/// Fits `scaled[k] ~ sum_j c_j k^(-5/2 - j)` on the last entries.
pub fn fit_tail(scaled: &[Float]) -> Result<Vec<Float>> {
    let order = scaled.len() - 1;
    let prec = scaled[0].prec();
    let ks = index_points(order, TAIL_TERMS)?;
    let rows: Vec<Vec<Float>> = ks
        .iter()
        .map(|&k| {
            let kf = Float::with_val(prec, k);
            (0..TAIL_TERMS)
                .map(|j| Float::with_val(prec, (&kf).pow(-(2.5 + j as f64))))
                .collect()
        })
        .collect();
    let rhs: Vec<Float> = ks.iter().map(|&k| scaled[k].clone()).collect();
    solve_linear(rows, rhs).ok_or_else(|| Error::InconsistentSingularity("singular tail fit".into()))
}

impl Singularity {
    /// Estimates the singular data of the series with the given coefficients.
    pub fn estimate(coeffs: &Series<Float>) -> Result<Singularity> {
        let order = coeffs.order();
        let prec = coeffs.coeff(0).prec();
        let r1 = ratio_radius(coeffs, RATIO_POINTS)?;
        let r2 = ratio_radius(coeffs, RATIO_POINTS - 1)?;
        if rel_err(&r1, &r2) > RATIO_AGREEMENT {
            return Err(Error::IncreaseOrder { order });
        }
        let radius = r1;
        let mut scaled = Vec::with_capacity(order + 1);
        let mut power = Float::with_val(prec, 1);
        for k in 0..=order {
            scaled.push(Float::with_val(prec, coeffs.coeff(k) * &power));
            power *= &radius;
        }
        let tail = fit_tail(&scaled)?;
        let mut sing = Singularity {
            radius,
            value: Float::new(prec),
            slope: Float::new(prec),
            tail,
            order,
            scaled,
        };
        let (v, s) = sing.eval_at_radius();
        sing.value = v;
        sing.slope = s;
        Ok(sing)
    }

    fn prec(&self) -> u32 {
        self.radius.prec()
    }

    /// `sum_{k > N} k^(-a)`
    fn zeta_tail(&self, a: f64) -> Float {
        let prec = self.prec();
        hurwitz_zeta(&Float::with_val(prec, a), &Float::with_val(prec, self.order + 1))
    }

    fn eval_at_radius(&self) -> (Float, Float) {
        let prec = self.prec();
        let mut value = Float::new(prec);
        let mut slope = Float::new(prec);
        for (k, c) in self.scaled.iter().enumerate() {
            value += c;
            slope += Float::with_val(prec, c * k as u64);
        }
        for (j, c) in self.tail.iter().enumerate() {
            value += Float::with_val(prec, c * &self.zeta_tail(2.5 + j as f64));
            slope += Float::with_val(prec, c * &self.zeta_tail(1.5 + j as f64));
        }
        slope /= &self.radius;
        (value, slope)
    }

    /// `(F(x), F'(x))` for `0 <= x <= R`; beyond the known coefficients the
    /// tail model is summed explicitly.
    pub fn eval(&self, x: &Float) -> Result<(Float, Float)> {
        let prec = self.prec();
        if *x >= self.radius {
            return Ok((self.value.clone(), self.slope.clone()));
        }
        if x.is_sign_negative() {
            return Err(Error::InvalidArgument("evaluation point must be nonnegative".into()));
        }
        let ratio = Float::with_val(prec, x / &self.radius);
        let mut value = Float::new(prec);
        let mut slope = Float::new(prec);
        let mut power = Float::with_val(prec, 1);
        for (k, c) in self.scaled.iter().enumerate() {
            let t = Float::with_val(prec, c * &power);
            slope += Float::with_val(prec, &t * k as u64);
            value += t;
            power *= &ratio;
        }
        // Tail in double precision: its magnitude is already below the
        // coefficients kept above.
        let r = ratio.to_f64();
        let tail: Vec<f64> = self.tail.iter().map(Float::to_f64).collect();
        let (mut tv, mut ts) = (0.0f64, 0.0f64);
        let mut rk = power.to_f64();
        let limit = self.order + 200_000_000;
        let mut k = self.order + 1;
        loop {
            let kf = k as f64;
            let base = kf.powf(-2.5);
            let mut term = 0.0;
            let mut inv = 1.0;
            for c in &tail {
                term += c * base * inv;
                inv /= kf;
            }
            term *= rk;
            tv += term;
            ts += term * kf;
            if term.abs() * kf < 1e-22 * ts.abs().max(1e-300) {
                break;
            }
            k += 1;
            if k > limit {
                return Err(Error::IncreaseOrder { order: self.order });
            }
            rk *= r;
        }
        value += tv;
        slope += ts;
        slope /= x;
        if x.is_zero() {
            slope = self.scaled.get(1).cloned().unwrap_or_else(|| Float::new(prec)) / &self.radius;
        }
        Ok((value, slope))
    }

    /// Tail model value `sum_j c_j k^(-5/2 - j)` for `f_k R^k`.
    pub fn tail_model(&self, k: usize) -> f64 {
        let kf = k as f64;
        let mut inv = kf.powf(-2.5);
        let mut acc = 0.0;
        for c in &self.tail {
            acc += c.to_f64() * inv;
            inv /= kf;
        }
        acc
    }
}
