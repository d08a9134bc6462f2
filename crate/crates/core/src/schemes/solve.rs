use rug::{Float, Rational};

use super::derived::{block_polynomial, weighted_polynomial};
use super::fixtures::Fixture;
use super::{load_scheme, EquationForm, MapSource, SchemeSpec, Shift};
use crate::error::{Error, Result};
use crate::oracle::Family;
use crate::series::{Series, UPoly};

/// Default order cap for series with polynomial-in-`u` coefficients.
pub const BIVARIATE_CAP: usize = 64;

fn apply_shift(b: Series<Rational>, shift: Shift, order: usize) -> Series<Rational> {
    let z = Series::<Rational>::variable(b.order());
    match shift {
        Shift::Identity => b.truncate(order),
        Shift::MinusZ => b.sub(&z).truncate(order),
        Shift::MinusZOverZ => {
            let c = b.sub(&z).into_coeffs();
            Series::from_coeffs(c[1..].to_vec()).truncate(order)
        }
    }
}

fn shift_extra(shift: Shift) -> usize {
    match shift {
        Shift::MinusZOverZ => 1,
        _ => 0,
    }
}

/// Exact map series of a scheme, zero constant term.
pub fn map_series(spec: &SchemeSpec, order: usize) -> Result<Series<Rational>> {
    match spec.map_source {
        MapSource::Fixture(family) => Fixture::load(family)?.series(order),
        MapSource::BlocksOf { scheme, shift } => {
            let inner = load_scheme(scheme)?;
            let b = extract_block_series(inner, order + shift_extra(shift))?;
            Ok(apply_shift(b, shift, order))
        }
    }
}

/// Block series of a scheme, recovered from its map series at `u = 1`:
/// `B = M o h^<-1>` with `h = z (1 + M)^d`, or `B o h = M / (1 + M)` for the
/// second equation form.
pub fn extract_block_series(spec: &SchemeSpec, order: usize) -> Result<Series<Rational>> {
    let m = map_series(spec, order)?;
    let one = Rational::from(1);
    let h = m.add_constant(&one).pow(spec.d as u32).mul_z_pow(1).truncate(order);
    let g = h.reversion()?;
    let target = match spec.form {
        EquationForm::Substitution => m,
        EquationForm::Factored => m.div(&m.add_constant(&one))?,
    };
    let b = target.compose(&g)?;
    if !b.is_nonnegative_integral() {
        let bad = b
            .coeffs()
            .iter()
            .position(|c| !(c.is_integer() && c.cmp0().is_ge()))
            .unwrap_or_default();
        return Err(Error::Convention {
            scheme: spec.id,
            reason: format!(
                "extracted block coefficient [z^{bad}] = {} is not a nonnegative integer",
                b.coeff(bad)
            ),
        });
    }
    Ok(b)
}

/// Exact counting series of any known family.
pub fn base_series(family: Family, order: usize) -> Result<Series<Rational>> {
    let blocks = |id: u8, shift: Shift| -> Result<Series<Rational>> {
        let b = extract_block_series(load_scheme(id)?, order + shift_extra(shift))?;
        Ok(apply_shift(b, shift, order))
    };
    match family {
        Family::All | Family::Loopless | Family::Bipartite | Family::LooplessTriangulation => {
            Fixture::load(family)?.series(order)
        }
        Family::Simple => blocks(1, Shift::Identity),
        Family::TwoConnected => blocks(2, Shift::Identity),
        Family::TwoConnectedLoopless => blocks(2, Shift::MinusZ),
        Family::TwoConnectedSimple => blocks(3, Shift::Identity),
        Family::BipartiteSimple => blocks(4, Shift::Identity),
        Family::BipartiteTwoConnected => blocks(5, Shift::Identity),
        Family::BipartiteTwoConnectedSimple => blocks(6, Shift::Identity),
        Family::SimpleTriangulation => blocks(7, Shift::MinusZOverZ),
        Family::IrreducibleTriangulation => blocks(8, Shift::Identity),
    }
}

fn check_u(u: &Rational) -> Result<()> {
    if u.cmp0().is_le() {
        return Err(Error::InvalidArgument("u must be positive".into()));
    }
    Ok(())
}

/// `M(z, u)` at a fixed rational weight, by coefficient-wise iteration of
/// the scheme equation.
pub fn solve_weighted(spec: &SchemeSpec, u: &Rational, order: usize) -> Result<Series<Rational>> {
    check_u(u)?;
    let b = extract_block_series(spec, order)?.scale(u);
    let one = Rational::from(1);
    let d = spec.d as u32;
    Series::solve_fixed_point(&Rational::new(), order, |m| {
        let k = m.order();
        let one_m = m.add_constant(&one);
        let h = one_m.pow(d).mul_z_pow(1).truncate(k);
        let bh = b.truncate(k).compose(&h)?;
        Ok(match spec.form {
            EquationForm::Substitution => bh,
            EquationForm::Factored => one_m.mul(&bh),
        })
    })
}

/// Same series as [`solve_weighted`], by Newton iteration.
pub fn solve_weighted_newton(spec: &SchemeSpec, u: &Rational, order: usize) -> Result<Series<Rational>> {
    check_u(u)?;
    let b = extract_block_series(spec, order + 1)?.scale(u);
    let db = b.derivative();
    let one = Rational::from(1);
    let d = spec.d as u32;
    let h_of = |m: &Series<Rational>| m.add_constant(&one).pow(d).mul_z_pow(1).truncate(m.order());
    let f = |m: &Series<Rational>| -> Result<Series<Rational>> {
        let bh = b.compose(&h_of(m))?;
        Ok(match spec.form {
            EquationForm::Substitution => bh,
            EquationForm::Factored => m.add_constant(&one).mul(&bh),
        })
    };
    let df = |m: &Series<Rational>| -> Result<Series<Rational>> {
        let k = m.order();
        let one_m = m.add_constant(&one);
        let h = h_of(m);
        // dH/dM = d z (1 + M)^(d - 1)
        let dh = one_m.pow(d - 1).scale(&Rational::from(d)).mul_z_pow(1).truncate(k);
        let dbh = db.compose(&h)?.mul(&dh);
        Ok(match spec.form {
            EquationForm::Substitution => dbh,
            EquationForm::Factored => b.compose(&h)?.add(&one_m.mul(&dbh)),
        })
    };
    Series::solve_newton(&Rational::new(), order, f, df)
}

/// `M(z, u)` with coefficients polynomial in `u`; capped at
/// [`BIVARIATE_CAP`].
pub fn solve_weighted_bivariate(spec: &SchemeSpec, order: usize) -> Result<Series<UPoly>> {
    if order > BIVARIATE_CAP {
        return Err(Error::InvalidArgument(format!(
            "bivariate order {order} exceeds the cap of {BIVARIATE_CAP}"
        )));
    }
    let b = extract_block_series(spec, order)?.to_upoly().scale(&UPoly::u());
    let one = UPoly::constant(Rational::from(1));
    let d = spec.d as u32;
    Series::solve_fixed_point(&UPoly::default(), order, |m| {
        let k = m.order();
        let one_m = m.add_constant(&one);
        let h = one_m.pow(d).mul_z_pow(1).truncate(k);
        let bh = b.truncate(k).compose(&h)?;
        Ok(match spec.form {
            EquationForm::Substitution => bh,
            EquationForm::Factored => one_m.mul(&bh),
        })
    })
}

/// Block series in floating point, from the block descriptor.
pub fn block_series_float(spec: &SchemeSpec, order: usize, prec: u32) -> Result<Series<Float>> {
    block_polynomial(spec.id)?.series_root(&Float::new(prec), order)
}

/// `M(z, u)` in floating point, from the weighted descriptor.
pub fn solve_weighted_float(spec: &SchemeSpec, u: &Rational, order: usize, prec: u32) -> Result<Series<Float>> {
    weighted_polynomial(spec.id, u)?.series_root(&Float::new(prec), order)
}
