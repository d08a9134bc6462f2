//! Singular data, offspring laws, the critical weight and coefficient
//! exponents, all at a fixed rational weight `u`.
//!
//! Let `s` be the stride of the Lagrangian form (`d`, or 2 for the sequence
//! recipe) and write `x` for the evaluation point of `Phi`, `t = x^s`. With
//! block data `B(t)`, `B'(t)`:
//!
//! * stride recipes: `Phi(x) = 1 + u B(t)`, `E = d u t B'(t) / Phi(x)`;
//! * sequence recipe: `Phi(x) = 1 / (1 - u B(t))`, `E = 2 u t B'(t) / (1 - u B(t))`;
//!
//! and in both cases `M(rho) = Phi(x) - 1`, `rho = t / Phi(x)^s`. Below the
//! critical weight `t` is the block radius `R`; above it `t < R` solves
//! `E = 1`.

pub mod exact;
mod exponent;
mod law;
pub mod numeric;
pub mod singular;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use rug::ops::Pow;
use rug::{Float, Rational};
use serde::Serialize;

pub use exponent::ExponentFit;
pub use law::{OffspringLaw, SequenceTables, TailModel};

use crate::error::{Error, Result};
use crate::schemes::{self, load_scheme, LagrangianRecipe, SchemeSpec};
use numeric::{rationalize, rel_err};
use singular::{ratio_radius, Singularity};

/// Default truncation order for singular data.
pub const DEFAULT_ORDER: usize = 512;
/// Default truncation order for exponent fits.
pub const DEFAULT_EXPONENT_ORDER: usize = 2048;
/// Default mantissa bits for non-exact quantities.
pub const DEFAULT_PREC: u32 = 128;
/// Tolerance on `|E - 1|` for regime classification.
pub const REGIME_TOL: f64 = 1e-6;
/// Largest tolerated relative gap between the block-based radius and the
/// ratio estimate taken directly from the coefficients of `M(z, u)`.
pub const RATIO_CHECK_TOL: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Subcritical => "subcritical",
            Regime::Critical => "critical",
            Regime::Supercritical => "supercritical",
        })
    }
}

#[derive(Clone, Debug)]
pub struct TransitionPoint {
    pub scheme: u8,
    pub u: Rational,
    pub rho: Float,
    /// `M(rho(u), u)`
    pub y: Float,
    /// `E(u)`
    pub mean: Float,
    pub regime: Regime,
    /// Evaluation point of `Phi`.
    pub x: Float,
    /// `x^stride`, the evaluation point of the block series.
    pub t: Float,
    /// `Phi(x)`
    pub phi: Float,
    /// Radius estimated directly from the coefficients of `M(z, u)`.
    pub rho_ratio: Float,
    /// Critical weight from the same block data.
    pub u_c: Float,
}

#[derive(Clone, Debug)]
pub struct CriticalPoint {
    pub scheme: u8,
    pub u_c: Float,
    /// `E(u_c) - 1`
    pub residual: Float,
    /// Closest rational with denominator at most one million.
    pub rational: Rational,
    /// Bisection steps taken.
    pub iterations: usize,
}

/// Cache of expensive per-scheme series, shared read-only between threads.
///
/// Lookups take a read lock; a miss computes outside the lock and inserts
/// under the write lock.
pub struct Workbench {
    prec: u32,
    block_series: RwLock<HashMap<u8, Arc<crate::series::Series<Float>>>>,
    singular: RwLock<HashMap<(u8, usize), Arc<Singularity>>>,
    weighted: RwLock<HashMap<(u8, Rational, usize), Arc<crate::series::Series<Float>>>>,
}

fn check_u(u: &Rational) -> Result<()> {
    if u.cmp0().is_le() {
        return Err(Error::InvalidArgument(format!("u must be positive, got {u}")));
    }
    Ok(())
}

impl Workbench {
    pub fn new(prec: u32) -> Self {
        Workbench {
            prec,
            block_series: RwLock::default(),
            singular: RwLock::default(),
            weighted: RwLock::default(),
        }
    }

    /// Process-wide workbench at the default precision.
    pub fn global() -> &'static Workbench {
        static GLOBAL: OnceLock<Workbench> = OnceLock::new();
        GLOBAL.get_or_init(|| Workbench::new(DEFAULT_PREC))
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Floating-point block series to at least the given order.
    pub fn block_series(&self, scheme: u8, order: usize) -> Result<Arc<crate::series::Series<Float>>> {
        if let Some(s) = self.block_series.read().unwrap().get(&scheme) {
            if s.order() >= order {
                return Ok(Arc::clone(s));
            }
        }
        let spec = load_scheme(scheme)?;
        let s = Arc::new(schemes::block_series_float(spec, order, self.prec)?);
        let mut w = self.block_series.write().unwrap();
        let entry = w.entry(scheme).or_insert_with(|| Arc::clone(&s));
        if entry.order() < order {
            *entry = Arc::clone(&s);
        }
        Ok(Arc::clone(entry))
    }

    /// Block singular data estimated from the first `order` coefficients.
    pub fn block_singularity(&self, scheme: u8, order: usize) -> Result<Arc<Singularity>> {
        if let Some(s) = self.singular.read().unwrap().get(&(scheme, order)) {
            return Ok(Arc::clone(s));
        }
        let series = self.block_series(scheme, order)?;
        let sing = Arc::new(Singularity::estimate(&series.truncate(order))?);
        let mut w = self.singular.write().unwrap();
        Ok(Arc::clone(w.entry((scheme, order)).or_insert(sing)))
    }

    /// Floating-point `M(z, u)` to the given order.
    pub fn weighted_series(&self, scheme: u8, u: &Rational, order: usize) -> Result<Arc<crate::series::Series<Float>>> {
        check_u(u)?;
        let key = (scheme, u.clone(), order);
        if let Some(s) = self.weighted.read().unwrap().get(&key) {
            return Ok(Arc::clone(s));
        }
        let spec = load_scheme(scheme)?;
        let s = Arc::new(schemes::solve_weighted_float(spec, u, order, self.prec)?);
        let mut w = self.weighted.write().unwrap();
        Ok(Arc::clone(w.entry(key).or_insert(s)))
    }

    fn float(&self, v: impl Into<f64>) -> Float {
        Float::with_val(self.prec, v.into())
    }

    /// `(Phi(x), E)` at block evaluation point `t`.
    fn phi_and_mean(&self, spec: &SchemeSpec, sing: &Singularity, u: &Float, t: &Float) -> Result<(Float, Float)> {
        let (b, db) = sing.eval(t)?;
        let p = self.prec;
        let ub = Float::with_val(p, u * &b);
        let utdb = Float::with_val(p, u * t) * &db;
        Ok(match spec.recipe {
            LagrangianRecipe::Sequence => {
                let one_minus = Float::with_val(p, 1 - &ub);
                if one_minus.is_sign_negative() || one_minus.is_zero() {
                    return Ok((Float::with_val(p, f64::INFINITY), Float::with_val(p, f64::INFINITY)));
                }
                let mean = utdb * 2u32 / &one_minus;
                (one_minus.recip(), mean)
            }
            _ => {
                let phi = ub + 1u32;
                let mean = utdb * spec.d as u32 / &phi;
                (phi, mean)
            }
        })
    }

    fn critical_from_block(&self, spec: &SchemeSpec, sing: &Singularity) -> Float {
        let rb = Float::with_val(self.prec, &sing.radius * &sing.slope);
        let denom = match spec.recipe {
            LagrangianRecipe::Sequence => rb * 2u32 + &sing.value,
            _ => rb * spec.d as u32 - &sing.value,
        };
        denom.recip()
    }

    /// Singular data and regime of `M(z, u)`.
    pub fn singular_point(&self, scheme: u8, u: &Rational, order: usize) -> Result<TransitionPoint> {
        check_u(u)?;
        let spec = load_scheme(scheme)?;
        let sing = self.block_singularity(scheme, order)?;
        let uf = Float::with_val(self.prec, u);
        let radius = sing.radius.clone();
        let (phi_r, mean_r) = self.phi_and_mean(spec, &sing, &uf, &radius)?;
        let gap = Float::with_val(self.prec, &mean_r - 1u32).to_f64();
        let (regime, t, phi, mean) = if gap < -REGIME_TOL {
            (Regime::Subcritical, radius, phi_r, mean_r)
        } else if gap.abs() <= REGIME_TOL {
            (Regime::Critical, radius, phi_r, mean_r)
        } else {
            let t = self.solve_branch_point(spec, &sing, &uf)?;
            let (phi, mean) = self.phi_and_mean(spec, &sing, &uf, &t)?;
            (Regime::Supercritical, t, phi, mean)
        };
        let stride = spec.stride();
        let rho = Float::with_val(self.prec, &t / Float::with_val(self.prec, (&phi).pow(stride as u32)));
        let y = Float::with_val(self.prec, &phi - 1u32);
        let x = Float::with_val(self.prec, t.root_ref(stride as u32));
        let weighted = self.weighted_series(scheme, u, order)?;
        let rho_ratio = ratio_radius(&weighted, 9)?;
        let gap = rel_err(&rho_ratio, &rho);
        if gap > RATIO_CHECK_TOL {
            return Err(Error::InconsistentSingularity(format!(
                "scheme {scheme}, u = {u}: block route gives rho = {}, coefficient ratios give {} (relative gap {gap:e})",
                rho.to_f64(),
                rho_ratio.to_f64()
            )));
        }
        Ok(TransitionPoint {
            scheme,
            u: u.clone(),
            rho,
            y,
            mean,
            regime,
            x,
            t,
            phi,
            rho_ratio,
            u_c: self.critical_from_block(spec, &sing),
        })
    }

    /// Solves `E(t) = 1` for `0 < t < R` by bisection.
    fn solve_branch_point(&self, spec: &SchemeSpec, sing: &Singularity, u: &Float) -> Result<Float> {
        let mut lo = self.float(0.0);
        let mut hi = sing.radius.clone();
        for _ in 0..(self.prec as usize + 8) {
            let mid = Float::with_val(self.prec, &lo + &hi) / 2u32;
            let (_, mean) = self.phi_and_mean(spec, sing, u, &mid)?;
            if mean > 1u32 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(Float::with_val(self.prec, &lo + &hi) / 2u32)
    }

    /// Offspring law `mu(k) = [X^k] Phi(X) x^k / Phi(x)` with a table of
    /// `order` block sizes and singular data from the default order.
    pub fn offspring_law(&self, scheme: u8, u: &Rational, order: usize) -> Result<OffspringLaw> {
        self.offspring_law_with(scheme, u, order, DEFAULT_ORDER)
    }

    /// As [`Workbench::offspring_law`] with an explicit order for the
    /// singular data.
    pub fn offspring_law_with(
        &self,
        scheme: u8,
        u: &Rational,
        table_order: usize,
        singular_order: usize,
    ) -> Result<OffspringLaw> {
        let spec = load_scheme(scheme)?;
        let point = self.singular_point(scheme, u, singular_order)?;
        let sing = self.block_singularity(scheme, singular_order)?;
        let blocks = self.block_series(scheme, table_order)?;
        law::build(spec, &point, &sing, &blocks.truncate(table_order), self.prec)
    }

    /// Weight at which `E` reaches 1, by bisection on the mean at the block
    /// radius.
    pub fn find_critical_u(&self, scheme: u8, order: usize) -> Result<CriticalPoint> {
        let spec = load_scheme(scheme)?;
        let sing = self.block_singularity(scheme, order)?;
        let radius = sing.radius.clone();
        let mean_at = |u: &Float| self.phi_and_mean(spec, &sing, u, &radius).map(|(_, e)| e);
        let mut lo = self.float(1e-9);
        let mut hi = self.float(1.0);
        let mut widenings = 0;
        while mean_at(&hi)? <= 1u32 {
            lo = hi.clone();
            hi *= 2u32;
            widenings += 1;
            if widenings > 40 {
                return Err(Error::Bracket(format!("E(u) < 1 for all u up to {}", hi.to_f64())));
            }
        }
        if mean_at(&lo)? >= 1u32 {
            return Err(Error::Bracket(
                "E(u) >= 1 already at the lower end of the bracket".into(),
            ));
        }
        let mut iterations = 0;
        while iterations < 4 * self.prec as usize {
            let width = Float::with_val(self.prec, &hi - &lo) / &hi;
            if width.to_f64() < 1e-30 {
                break;
            }
            let mid = Float::with_val(self.prec, &lo + &hi) / 2u32;
            if mean_at(&mid)? > 1u32 {
                hi = mid;
            } else {
                lo = mid;
            }
            iterations += 1;
        }
        let u_c = Float::with_val(self.prec, &lo + &hi) / 2u32;
        let residual = Float::with_val(self.prec, mean_at(&u_c)? - 1u32);
        let closed = self.critical_from_block(spec, &sing);
        if rel_err(&u_c, &closed) > 1e-20 {
            return Err(Error::InconsistentSingularity(format!(
                "bisection gives u_C = {}, block formula gives {}",
                u_c.to_f64(),
                closed.to_f64()
            )));
        }
        Ok(CriticalPoint {
            scheme,
            rational: rationalize(&u_c, 1_000_000),
            u_c,
            residual,
            iterations,
        })
    }

    /// Estimates `alpha` in `[z^n] M(z, u) ~ c n^(-alpha) rho^(-n)`.
    pub fn exponent_estimate(&self, scheme: u8, u: &Rational, order: usize) -> Result<ExponentFit> {
        let point = self.singular_point(scheme, u, DEFAULT_ORDER.min(order))?;
        let coeffs = self.weighted_series(scheme, u, order)?;
        exponent::fit(scheme, u, &coeffs, point.regime, &point.rho)
    }
}

pub(crate) fn serialize_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(q)
}

pub fn singular_point(scheme: u8, u: &Rational, order: usize) -> Result<TransitionPoint> {
    Workbench::global().singular_point(scheme, u, order)
}

pub fn offspring_law(scheme: u8, u: &Rational, order: usize) -> Result<OffspringLaw> {
    Workbench::global().offspring_law(scheme, u, order)
}

pub fn find_critical_u(scheme: u8) -> Result<CriticalPoint> {
    Workbench::global().find_critical_u(scheme, DEFAULT_ORDER)
}

pub fn exponent_estimate(scheme: u8, u: &Rational, order: usize) -> Result<ExponentFit> {
    Workbench::global().exponent_estimate(scheme, u, order)
}
