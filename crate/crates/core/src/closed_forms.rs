//! Published closed forms of the critical weight and of the singular data
//! `rho(u)`, `M(rho(u), u)` and `E(u)` for `u <= u_C`. These are
//! verification targets only; nothing in the crate computes with them.

use rug::Rational;

use crate::error::{Error, Result};

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

pub fn u_critical(scheme: u8) -> Result<Rational> {
    Ok(match scheme {
        1 => q(81, 17),
        2 => q(9, 5),
        3 => q(135, 7),
        4 => q(36, 11),
        5 => q(52, 27),
        6 => q(68, 3),
        7 => q(16, 7),
        8 => q(64, 37),
        other => return Err(Error::UnknownScheme(other)),
    })
}

/// `rho(u)`.
pub fn rho(scheme: u8, u: &Rational) -> Result<Rational> {
    let u = u.clone();
    Ok(match scheme {
        1 => q(27, 8) / (u * 5 + 27),
        2 => {
            let t: Rational = u + 3;
            q(4, 3) / (t.clone() * t)
        }
        3 => q(128, 27) / (u * 5 + 27),
        4 => q(5, 8) / (u + 4),
        5 => {
            let t: Rational = u + 4;
            q(25, 8) / (t.clone() * t)
        }
        6 => q(125, 128) / (u + 4),
        7 => {
            let t: Rational = u + 8;
            Rational::from(54) / (t.clone() * t.clone() * t)
        }
        8 => q(25, 6912) * u.clone() * u.clone() - q(5, 108) * u + q(4, 27),
        other => return Err(Error::UnknownScheme(other)),
    })
}

/// `M(rho(u), u)` as printed.
///
/// For scheme 3 the printed value counts the single-loop map at weight one,
/// i.e. it equals [`y`] plus `rho(u)`.
pub fn y_published(scheme: u8, u: &Rational) -> Result<Rational> {
    let u = u.clone();
    Ok(match scheme {
        1 => u * q(5, 27),
        2 => u / 3,
        3 => (u.clone() * u.clone() * 25 + u.clone() * 135 + 128) / (Rational::from(27) * (u * 5 + 27)),
        4..=6 => u / 4,
        7 => u / 8,
        8 => u.clone() * 5 / (Rational::from(32) - u * 5),
        other => return Err(Error::UnknownScheme(other)),
    })
}

/// `M(rho(u), u)` for the positive-size series solved in this crate.
pub fn y(scheme: u8, u: &Rational) -> Result<Rational> {
    let printed = y_published(scheme, u)?;
    Ok(if scheme == 3 {
        printed - rho(scheme, u)?
    } else {
        printed
    })
}

/// `E(u)`, the mean of the offspring law.
pub fn mean(scheme: u8, u: &Rational) -> Result<Rational> {
    let u = u.clone();
    Ok(match scheme {
        1 => u.clone() * 32 / (Rational::from(3) * (u * 5 + 27)),
        2 => u.clone() * 8 / (Rational::from(3) * (u + 3)),
        3 => u.clone() * 32 / (Rational::from(5) * (u * 5 + 27)),
        4 => u.clone() * 20 / (Rational::from(9) * (u + 4)),
        5 => u.clone() * 40 / (Rational::from(13) * (u + 4)),
        6 => u.clone() * 20 / (Rational::from(17) * (u + 4)),
        7 => u.clone() * 9 / (Rational::from(2) * (u + 8)),
        8 => u.clone() * 27 / (Rational::from(2) * (Rational::from(32) - u * 5)),
        other => return Err(Error::UnknownScheme(other)),
    })
}
