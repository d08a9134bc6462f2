//! Line-oriented text format: a header `order=N`, then one `n num/den` line
//! per coefficient.

use std::fmt::Write as _;

use rug::{Integer, Rational};

use super::Series;
use crate::error::{Error, Result};

pub fn write_series(s: &Series<Rational>) -> String {
    let mut out = format!("order={}\n", s.order());
    for (n, c) in s.coeffs().iter().enumerate() {
        writeln!(out, "{n} {}/{}", c.numer(), c.denom()).unwrap();
    }
    out
}

pub fn read_series(text: &str) -> Result<Series<Rational>> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
    let order: usize = header
        .strip_prefix("order=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad header `{header}`")))?;
    let mut coeffs = Vec::with_capacity(order + 1);
    for (expected, line) in lines.enumerate() {
        let (idx, frac) = line
            .split_once(' ')
            .ok_or_else(|| Error::Parse(format!("bad line `{line}`")))?;
        if idx.parse::<usize>().ok() != Some(expected) {
            return Err(Error::Parse(format!("expected index {expected}, found `{idx}`")));
        }
        let (num, den) = frac
            .split_once('/')
            .ok_or_else(|| Error::Parse(format!("bad fraction `{frac}`")))?;
        let num: Integer = num
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator `{num}`")))?;
        let den: Integer = den
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator `{den}`")))?;
        if den.cmp0().is_le() {
            return Err(Error::Parse(format!("nonpositive denominator in `{frac}`")));
        }
        coeffs.push(Rational::from((num, den)));
    }
    if coeffs.len() != order + 1 {
        return Err(Error::Parse(format!(
            "header says order {order} but {} coefficients follow",
            coeffs.len()
        )));
    }
    Ok(Series::from_coeffs(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let s = Series::from_coeffs(vec![Rational::from((-3, 4)), Rational::new(), Rational::from(7)]);
        let text = write_series(&s);
        assert_eq!(text, "order=2\n0 -3/4\n1 0/1\n2 7/1\n");
        assert_eq!(read_series(&text).unwrap(), s);
    }

    #[test]
    fn rejects_malformed() {
        assert!(read_series("order=1\n0 1/1\n").is_err());
        assert!(read_series("order=0\n0 1/0\n").is_err());
        assert!(read_series("ord=0\n0 1/1\n").is_err());
        assert!(read_series("order=1\n1 1/1\n0 1/1\n").is_err());
    }
}
