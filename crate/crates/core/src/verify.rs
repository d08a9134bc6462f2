//! Verification suite: enumerator against fixtures, chain consistency,
//! closed-form singular data, the critical weight and coefficient exponents.

use rayon::prelude::*;
use rug::{Float, Rational};
use serde::Serialize;

use crate::closed_forms;
use crate::error::Result;
use crate::oracle::{self, Family};
use crate::schemes::{self, load_scheme, map_polynomial, MapSource, Shift};
use crate::series::Series;
use crate::transition::{Workbench, DEFAULT_EXPONENT_ORDER, DEFAULT_ORDER};

/// Relative tolerance for closed-form singular data and the critical weight.
pub const CLOSED_FORM_TOL: f64 = 1e-6;
/// Tolerance on `|E(u_C) - 1|`.
pub const CRITICAL_MEAN_TOL: f64 = 1e-8;
/// Order for chain consistency.
pub const CHAIN_ORDER: usize = 128;
/// Largest size compared with the enumerator.
pub const ORACLE_DEPTH: usize = 4;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub scheme: Option<u8>,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, scheme: Option<u8>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            scheme,
            passed,
            detail: detail.into(),
        }
    }

    fn from_result(name: impl Into<String>, scheme: Option<u8>, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Check::new(name, scheme, passed, detail),
            Err(e) => Check::new(name, scheme, false, format!("error: {e}")),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Suite {
    pub checks: Vec<Check>,
}

impl Suite {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn rel(a: &Float, b: &Rational) -> f64 {
    let b = Float::with_val(a.prec(), b);
    if b.is_zero() {
        return a.to_f64().abs();
    }
    (Float::with_val(a.prec(), a - &b) / &b).to_f64().abs()
}

/// Every fixture family and every derived family against the enumerator;
/// the bivariate series of scheme 2 against the block census.
pub fn oracle_checks(depth: usize) -> Vec<Check> {
    let mut checks: Vec<Check> = Family::ALL
        .par_iter()
        .map(|&family| {
            Check::from_result(format!("oracle {family}"), None, {
                (|| {
                    let counts = oracle::census(family, depth)?;
                    let series = schemes::base_series(family, depth)?;
                    let got: Vec<String> = (1..=depth).map(|n| series.coeff(n).to_string()).collect();
                    let ok = counts.iter().enumerate().all(|(i, c)| *series.coeff(i + 1) == *c);
                    Ok((ok, format!("series {} / enumerator {:?}", got.join(" "), counts)))
                })()
            })
        })
        .collect();
    checks.push(Check::from_result(
        "oracle bivariate scheme 2",
        Some(2),
        (|| {
            let census = oracle::bivariate_census(depth)?;
            let series = schemes::solve_weighted_bivariate(load_scheme(2)?, depth)?;
            let mut ok = true;
            for n in 1..=depth {
                let poly = series.coeff(n);
                for k in 0..=n + 1 {
                    let want = census.get(&(n, k)).copied().unwrap_or(0);
                    ok &= poly.coeff(k) == want;
                }
            }
            let z2 = series
                .coeff(2)
                .coeffs()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            Ok((ok, format!("[z^2] coefficients in u: {z2}")))
        })(),
    ));
    checks
}

/// Blocks of scheme `k`, adjusted, against the algebraic map series of
/// scheme `k + 1`; all block coefficients nonnegative integers.
pub fn chain_checks(order: usize) -> Vec<Check> {
    [(2u8, 3u8), (5, 6), (7, 8)]
        .par_iter()
        .map(|&(from, to)| {
            Check::from_result(
                format!("chain {from} -> {to}"),
                Some(to),
                (|| {
                    let target = load_scheme(to)?;
                    let shift = match target.map_source {
                        MapSource::BlocksOf { shift, .. } => shift,
                        MapSource::Fixture(_) => Shift::Identity,
                    };
                    let extra = usize::from(shift == Shift::MinusZOverZ);
                    let blocks = schemes::extract_block_series(load_scheme(from)?, order + extra)?;
                    let z = Series::<Rational>::variable(blocks.order());
                    let adjusted = match shift {
                        Shift::Identity => blocks.truncate(order),
                        Shift::MinusZ => blocks.sub(&z).truncate(order),
                        Shift::MinusZOverZ => {
                            let c = blocks.sub(&z).into_coeffs();
                            Series::from_coeffs(c[1..].to_vec()).truncate(order)
                        }
                    };
                    let algebraic = map_polynomial(to)?.series_root(&Rational::new(), order)?;
                    let next_blocks = schemes::extract_block_series(target, order)?;
                    let same = adjusted == algebraic;
                    let integral = next_blocks.is_nonnegative_integral() && adjusted.is_nonnegative_integral();
                    Ok((
                        same && integral,
                        format!("order {order}: equal {same}, nonnegative integral {integral}"),
                    ))
                })(),
            )
        })
        .collect()
}

/// Singular data at `u_C / 2`, `3 u_C / 4`, `u_C` and `u = 1` against the
/// closed forms.
pub fn closed_form_checks(scheme: u8) -> Vec<Check> {
    let bench = Workbench::global();
    let Ok(uc) = closed_forms::u_critical(scheme) else {
        return vec![Check::new("closed forms", Some(scheme), false, "unknown scheme")];
    };
    let mut us = vec![Rational::from(1)];
    us.extend([(1, 2), (3, 4), (1, 1)].map(|q| &uc * Rational::from(q)));
    us.into_iter()
        .flat_map(|u| {
            let point = bench.singular_point(scheme, &u, DEFAULT_ORDER);
            let rows: [(&str, fn(u8, &Rational) -> Result<Rational>); 3] = [
                ("rho", closed_forms::rho),
                ("y", closed_forms::y),
                ("E", closed_forms::mean),
            ];
            rows.into_iter()
                .map(|(what, exact)| {
                    let name = format!("{what}({u})");
                    let r = match &point {
                        Ok(p) => exact(scheme, &u).map(|want| {
                            let got = match what {
                                "rho" => &p.rho,
                                "y" => &p.y,
                                _ => &p.mean,
                            };
                            let e = rel(got, &want);
                            (
                                e <= CLOSED_FORM_TOL,
                                format!("{} vs {want} (relative error {e:.2e})", got.to_f64()),
                            )
                        }),
                        Err(e) => Ok((false, format!("error: {e}"))),
                    };
                    Check::from_result(name, Some(scheme), r)
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Bisection for `u_C` and `E(u_C) = 1` at the closed-form critical weight.
pub fn critical_checks(scheme: u8) -> Vec<Check> {
    let bench = Workbench::global();
    let found = Check::from_result(
        "u_C",
        Some(scheme),
        (|| {
            let want = closed_forms::u_critical(scheme)?;
            let c = bench.find_critical_u(scheme, DEFAULT_ORDER)?;
            let e = rel(&c.u_c, &want);
            Ok((
                e <= CLOSED_FORM_TOL,
                format!("{} vs {want} (relative error {e:.2e})", c.u_c.to_f64()),
            ))
        })(),
    );
    let mean = Check::from_result(
        "E(u_C) = 1",
        Some(scheme),
        (|| {
            let uc = closed_forms::u_critical(scheme)?;
            let p = bench.singular_point(scheme, &uc, DEFAULT_ORDER)?;
            let gap = Float::with_val(p.mean.prec(), &p.mean - 1u32).to_f64().abs();
            Ok((gap <= CRITICAL_MEAN_TOL, format!("|E - 1| = {gap:.2e}")))
        })(),
    );
    vec![found, mean]
}

/// Exponent targets `(u, alpha, tolerance)`.
pub fn exponent_targets(scheme: u8) -> Result<[(Rational, f64, f64); 3]> {
    let uc = closed_forms::u_critical(scheme)?;
    Ok([
        (Rational::from(1), 2.5, 0.1),
        (Rational::from(&uc * 2), 1.5, 0.1),
        (uc, 5.0 / 3.0, 0.15),
    ])
}

pub fn exponent_checks(scheme: u8, order: usize) -> Vec<Check> {
    let targets = match exponent_targets(scheme) {
        Ok(t) => t,
        Err(e) => return vec![Check::new("exponent", Some(scheme), false, e.to_string())],
    };
    targets
        .par_iter()
        .map(|(u, alpha, tol)| {
            Check::from_result(
                format!("alpha({u})"),
                Some(scheme),
                Workbench::global().exponent_estimate(scheme, u, order).map(|f| {
                    let gap = (f.alpha - alpha).abs();
                    (
                        gap <= *tol,
                        format!("{:.4} +- {:.1e} vs {alpha:.4} (tolerance {tol})", f.alpha, f.stderr),
                    )
                }),
            )
        })
        .collect()
}

/// Selects what [`run`] checks.
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub schemes: Vec<u8>,
    pub oracle: bool,
    pub chain: bool,
    pub exponents: bool,
    pub exponent_order: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            schemes: (1..=8).collect(),
            oracle: true,
            chain: true,
            exponents: true,
            exponent_order: DEFAULT_EXPONENT_ORDER,
        }
    }
}

pub fn run(options: &SuiteOptions) -> Suite {
    let mut checks = Vec::new();
    if options.oracle {
        checks.extend(oracle_checks(ORACLE_DEPTH));
    }
    if options.chain {
        checks.extend(chain_checks(CHAIN_ORDER).into_iter().filter(|c| {
            c.scheme
                .is_none_or(|s| options.schemes.contains(&s) || options.schemes.contains(&(s - 1)))
        }));
    }
    let per_scheme: Vec<Vec<Check>> = options
        .schemes
        .par_iter()
        .map(|&s| {
            let mut v = closed_form_checks(s);
            v.extend(critical_checks(s));
            if options.exponents {
                v.extend(exponent_checks(s, options.exponent_order));
            }
            v
        })
        .collect();
    checks.extend(per_scheme.into_iter().flatten());
    Suite { checks }
}
