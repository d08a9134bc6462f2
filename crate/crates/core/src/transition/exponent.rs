use rug::ops::Pow;
use rug::{Float, Rational};
use serde::Serialize;

use super::numeric::least_squares;
use super::Regime;
use crate::error::{Error, Result};
use crate::series::Series;

const MIN_POINTS: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct ExponentFit {
    pub scheme: u8,
    #[serde(serialize_with = "crate::transition::serialize_rational")]
    pub u: Rational,
    pub alpha: f64,
    pub stderr: f64,
    /// Inclusive range of `n` whose local exponents entered the fit.
    pub n_range: (usize, usize),
    /// Period of the coefficient support.
    pub period: usize,
    pub points: usize,
    /// `a_n n^alpha rho^n` at the largest `n` of the range; reported, not
    /// extrapolated.
    pub amplitude: f64,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Period of the support of `a_n` for `n >= 1` and the residue it lives on.
fn support_period(coeffs: &Series<Float>, from: usize) -> Result<(usize, usize)> {
    let support: Vec<usize> = (from..=coeffs.order())
        .filter(|&n| !coeffs.coeff(n).is_zero())
        .collect();
    let first = *support
        .first()
        .ok_or_else(|| Error::Stride("no nonzero coefficients".into()))?;
    let period = support.iter().fold(0, |g, &n| gcd(g, n - first));
    if period == 0 {
        return Err(Error::Stride("a single nonzero coefficient".into()));
    }
    Ok((period, first % period))
}

fn correction_exponents(regime: Regime) -> &'static [f64] {
    match regime {
        Regime::Critical => &[2.0 / 3.0, 1.0, 4.0 / 3.0, 5.0 / 3.0],
        _ => &[1.0, 2.0, 3.0],
    }
}

/// Least-squares fit of local exponents
/// `alpha_m = -(ln a_(m-p) + ln a_(m+p) - 2 ln a_m) / ln(1 - p^2/m^2)`
/// against `alpha + sum_j e_j m^(-theta_j)` over `m` in the upper half of the
/// coefficient range.
pub(super) fn fit(
    scheme: u8,
    u: &Rational,
    coeffs: &Series<Float>,
    regime: Regime,
    rho: &Float,
) -> Result<ExponentFit> {
    let order = coeffs.order();
    let prec = coeffs.coeff(0).prec();
    let lo = order / 2;
    let (p, residue) = support_period(coeffs, lo.saturating_sub(order / 4).max(1))?;
    let mut ms = Vec::new();
    let mut locals = Vec::new();
    let mut m = lo.max(p + 1);
    while m % p != residue {
        m += 1;
    }
    while m + p <= order {
        let (a0, a1, a2) = (coeffs.coeff(m - p), coeffs.coeff(m), coeffs.coeff(m + p));
        if a0.cmp0() != Some(std::cmp::Ordering::Greater)
            || a1.cmp0() != Some(std::cmp::Ordering::Greater)
            || a2.cmp0() != Some(std::cmp::Ordering::Greater)
        {
            return Err(Error::Stride(format!(
                "nonpositive coefficient near n = {m} on the support"
            )));
        }
        let second = Float::with_val(prec, a0.ln_ref()) + Float::with_val(prec, a2.ln_ref())
            - Float::with_val(prec, a1.ln_ref()) * 2u32;
        let mf = Float::with_val(prec, m);
        let denom = (Float::with_val(prec, p * p) / Float::with_val(prec, &mf * &mf) * -1i32).ln_1p();
        locals.push(-(second / denom));
        ms.push(mf);
        m += p;
    }
    if ms.len() < MIN_POINTS {
        return Err(Error::IncreaseOrder { order });
    }
    let thetas = correction_exponents(regime);
    let mut estimates = Vec::with_capacity(thetas.len());
    for terms in 1..=thetas.len() {
        let rows: Vec<Vec<Float>> = ms
            .iter()
            .map(|mf| {
                let mut row = vec![Float::with_val(prec, 1)];
                for th in &thetas[..terms] {
                    row.push(Float::with_val(prec, mf.pow(-th)));
                }
                row
            })
            .collect();
        let sol = least_squares(&rows, &locals).ok_or_else(|| Error::InconsistentSingularity("exponent fit".into()))?;
        estimates.push(sol[0].to_f64());
    }
    let alpha = *estimates.last().unwrap();
    let tail = &estimates[estimates.len().saturating_sub(3)..];
    let stderr = tail.iter().map(|e| (e - alpha).abs()).fold(0.0, f64::max);
    let top = ms.last().unwrap();
    let n_top = top.to_f64() as usize;
    let log_amp = Float::with_val(prec, coeffs.coeff(n_top).ln_ref())
        + Float::with_val(prec, top.ln_ref()) * alpha
        + Float::with_val(prec, rho.ln_ref()) * Float::with_val(prec, n_top);
    Ok(ExponentFit {
        scheme,
        u: u.clone(),
        alpha,
        stderr,
        n_range: (ms[0].to_f64() as usize, ms.last().unwrap().to_f64() as usize),
        period: p,
        points: ms.len(),
        amplitude: log_amp.exp().to_f64(),
    })
}
