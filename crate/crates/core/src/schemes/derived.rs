//! Algebraic descriptors for every map, block and weighted series, obtained
//! from the fixtures by rational substitution.
//!
//! These give a second, independent route to the series produced by
//! reversion in [`super::solve`], and are the route of choice for long
//! floating-point expansions.

use std::sync::OnceLock;

use rug::Rational;

use super::fixtures::Fixture;
use super::{load_scheme, EquationForm, MapSource, Shift};
use crate::error::{Error, Result};
use crate::series::BiPoly;

fn one() -> BiPoly {
    BiPoly::constant(Rational::from(1))
}

fn one_plus_m() -> BiPoly {
    BiPoly::m().add(&one())
}

type Table = std::result::Result<Vec<(BiPoly, BiPoly)>, String>;

fn table() -> Result<&'static Vec<(BiPoly, BiPoly)>> {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE
        .get_or_init(|| build().map_err(|e| e.to_string()))
        .as_ref()
        .map_err(|reason| Error::FixtureInvalid {
            family: "registry".into(),
            reason: reason.clone(),
        })
}

fn build() -> Result<Vec<(BiPoly, BiPoly)>> {
    let mut out: Vec<(BiPoly, BiPoly)> = Vec::with_capacity(8);
    for id in 1..=8u8 {
        let spec = load_scheme(id)?;
        let map = match spec.map_source {
            MapSource::Fixture(family) => {
                Fixture::load(family)?
                    .polynomial()
                    .cloned()
                    .ok_or_else(|| Error::FixtureInvalid {
                        family: family.name().into(),
                        reason: "an algebraic descriptor is required".into(),
                    })?
            }
            MapSource::BlocksOf { scheme, shift } => {
                let q = &out[scheme as usize - 1].1;
                let z = BiPoly::z();
                let mn = match shift {
                    Shift::Identity => BiPoly::m(),
                    Shift::MinusZ => BiPoly::m().add(&z),
                    Shift::MinusZOverZ => z.mul(&one_plus_m()),
                };
                q.substitute(&z, &one(), &mn, &one()).strip_z()
            }
        };
        let block = match spec.form {
            EquationForm::Substitution => map.substitute(&BiPoly::z(), &one_plus_m().pow(spec.d), &BiPoly::m(), &one()),
            EquationForm::Factored => {
                let one_minus_b = one().sub(&BiPoly::m());
                map.substitute(
                    &BiPoly::z().mul(&one_minus_b.pow(2)),
                    &one(),
                    &BiPoly::m(),
                    &one_minus_b,
                )
            }
        }
        .strip_z();
        out.push((map, block));
    }
    Ok(out)
}

/// `P(z, M) = 0` for the map series of the scheme.
pub fn map_polynomial(id: u8) -> Result<&'static BiPoly> {
    load_scheme(id)?;
    Ok(&table()?[id as usize - 1].0)
}

/// `Q(w, B) = 0` for the block series of the scheme (`w` in the `z` slot).
pub fn block_polynomial(id: u8) -> Result<&'static BiPoly> {
    load_scheme(id)?;
    Ok(&table()?[id as usize - 1].1)
}

/// Polynomial satisfied by `M(z, u)` at a fixed positive weight.
pub fn weighted_polynomial(id: u8, u: &Rational) -> Result<BiPoly> {
    if u.cmp0().is_le() {
        return Err(Error::InvalidArgument("u must be positive".into()));
    }
    let spec = load_scheme(id)?;
    let q = block_polynomial(id)?;
    let u_const = BiPoly::constant(u.clone());
    let p = match spec.form {
        EquationForm::Substitution => q.substitute(
            &BiPoly::z().mul(&one_plus_m().pow(spec.d)),
            &one(),
            &BiPoly::m(),
            &u_const,
        ),
        EquationForm::Factored => q.substitute(
            &BiPoly::z().mul(&one_plus_m().pow(2)),
            &one(),
            &BiPoly::m(),
            &u_const.mul(&one_plus_m()),
        ),
    };
    Ok(p.strip_z())
}
