//! Exact singular data for every scheme at `u <= u_C`.
//!
//! The singular point of each fixture is located numerically, rounded to a
//! rational and then certified by checking `P = P_z = P_M = 0` exactly. The
//! block data of every scheme then follows by exact transport along the
//! substitution chain. This route shares no code with the coefficient-based
//! estimates beyond the initial guess.

use rug::{Float, Rational};

use super::numeric::rationalize;
use super::singular::Singularity;
use crate::error::{Error, Result};
use crate::oracle::Family;
use crate::schemes::{load_scheme, EquationForm, Fixture, LagrangianRecipe, MapSource, Shift};

const GUESS_ORDER: usize = 512;
const GUESS_PREC: u32 = 128;
const MAX_DENOMINATOR: u64 = 1_000_000;

/// `(R, F(R), F'(R))` with exact rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSingularity {
    pub radius: Rational,
    pub value: Rational,
    pub slope: Rational,
}

/// Certified singular point of a fixture family.
pub fn fixture_singularity(family: Family) -> Result<ExactSingularity> {
    let fx = Fixture::load(family)?;
    let p = fx.polynomial().ok_or_else(|| Error::FixtureInvalid {
        family: family.name().into(),
        reason: "exact singular data needs an algebraic descriptor".into(),
    })?;
    let series = p.series_root(&Float::new(GUESS_PREC), GUESS_ORDER)?;
    let guess = Singularity::estimate(&series)?;
    let rho = rationalize(&guess.radius, MAX_DENOMINATOR);
    let f = rationalize(&guess.value, MAX_DENOMINATOR);
    let (pz, pm) = (p.diff_z(), p.diff_m());
    let fail = |what: &str| {
        Error::InconsistentSingularity(format!("{family}: candidate ({rho}, {f}) does not satisfy {what}"))
    };
    for (poly, name) in [(p, "P = 0"), (&pz, "P_z = 0"), (&pm, "P_M = 0")] {
        if !poly.eval(&rho, &f).cmp0().is_eq() {
            return Err(fail(name));
        }
    }
    let pzz = pz.diff_z().eval(&rho, &f);
    let pzm = pz.diff_m().eval(&rho, &f);
    let pmm = pm.diff_m().eval(&rho, &f);
    if pmm.cmp0().is_eq() {
        return Err(fail("P_MM != 0"));
    }
    // Along the curve P_zz + 2 P_zM F' + P_MM F'^2 = 0; a finite slope at a
    // cusp is the double root.
    if Rational::from(&pzm * &pzm) != Rational::from(&pzz * &pmm) {
        return Err(fail("a double root for F'"));
    }
    let slope = -(pzm / pmm);
    Ok(ExactSingularity {
        radius: rho,
        value: f,
        slope,
    })
}

fn pow(x: &Rational, k: usize) -> Rational {
    let mut out = Rational::from(1);
    for _ in 0..k {
        out *= x;
    }
    out
}

/// Exact block singularity of a scheme.
pub fn block_singularity(scheme: u8) -> Result<ExactSingularity> {
    let spec = load_scheme(scheme)?;
    let map = match spec.map_source {
        MapSource::Fixture(family) => fixture_singularity(family)?,
        MapSource::BlocksOf { scheme: inner, shift } => {
            let b = block_singularity(inner)?;
            match shift {
                Shift::Identity => b,
                Shift::MinusZ => ExactSingularity {
                    value: Rational::from(&b.value - &b.radius),
                    slope: b.slope - 1,
                    radius: b.radius,
                },
                Shift::MinusZOverZ => {
                    let r = b.radius.clone();
                    ExactSingularity {
                        value: Rational::from(&b.value - &r) / &r,
                        slope: (Rational::from(&r * &b.slope) - &b.value) / Rational::from(&r * &r),
                        radius: r,
                    }
                }
            }
        }
    };
    let d = spec.d;
    let one_f = Rational::from(&map.value + 1);
    // h(z) = z (1 + M)^d maps the map singularity onto the block singularity.
    let radius = Rational::from(&map.radius * &pow(&one_f, d));
    let dh = pow(&one_f, d) + Rational::from(&map.radius * &map.slope) * Rational::from(d) * pow(&one_f, d - 1);
    let (value, target_slope) = match spec.form {
        EquationForm::Substitution => (map.value.clone(), map.slope.clone()),
        EquationForm::Factored => (
            Rational::from(&map.value / &one_f),
            Rational::from(&map.slope / &pow(&one_f, 2)),
        ),
    };
    Ok(ExactSingularity {
        radius,
        value,
        slope: target_slope / dh,
    })
}

/// Exact critical weight from block data.
pub fn u_critical(scheme: u8) -> Result<Rational> {
    let spec = load_scheme(scheme)?;
    let b = block_singularity(scheme)?;
    let rb = Rational::from(&b.radius * &b.slope);
    let denom = match spec.recipe {
        LagrangianRecipe::Sequence => rb * 2 + &b.value,
        _ => rb * spec.d as u32 - &b.value,
    };
    Ok(denom.recip())
}

/// Exact `(rho(u), M(rho(u), u), E(u))` for `0 < u <= u_C`.
pub fn subcritical_point(scheme: u8, u: &Rational) -> Result<(Rational, Rational, Rational)> {
    let spec = load_scheme(scheme)?;
    if u.cmp0().is_le() || *u > u_critical(scheme)? {
        return Err(Error::InvalidArgument(format!(
            "exact data needs 0 < u <= u_C, got {u}"
        )));
    }
    let b = block_singularity(scheme)?;
    let ub = Rational::from(u * &b.value);
    let urb = Rational::from(u * &b.radius) * &b.slope;
    Ok(match spec.recipe {
        LagrangianRecipe::Sequence => {
            let one_minus = Rational::from(1) - &ub;
            let y = Rational::from(&ub / &one_minus);
            let rho = Rational::from(&b.radius * &one_minus) * &one_minus;
            let e = urb * 2 / one_minus;
            (rho, y, e)
        }
        _ => {
            let phi = Rational::from(&ub + 1);
            let rho = Rational::from(&b.radius / &pow(&phi, spec.d));
            let e = urb * spec.d as u32 / phi;
            (rho, ub, e)
        }
    })
}
