//! Algebraic descriptors of the independent base families.
//!
//! Each fixture file holds `family:` and `poly: i j c` lines (the monomial
//! `c z^i M^j` of a polynomial `P` with `P(z, M(z)) = 0`), optionally
//! `coeffs:` lines listing leading coefficients explicitly, and the
//! `validated_to:` / `oracle:` stamp written by [`stamp_fixture`] after a
//! successful comparison with the enumerator.

use rug::{Integer, Rational};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::oracle::{self, Family};
use crate::series::{BiPoly, Series};

/// Minimum stamp depth accepted by [`Fixture::load`].
pub const REQUIRED_DEPTH: usize = 4;

const EMBEDDED: [(Family, &str); 4] = [
    (Family::All, include_str!("../../fixtures/all.txt")),
    (Family::Loopless, include_str!("../../fixtures/loopless.txt")),
    (Family::Bipartite, include_str!("../../fixtures/bipartite.txt")),
    (
        Family::LooplessTriangulation,
        include_str!("../../fixtures/loopless-triangulation.txt"),
    ),
];

#[derive(Clone, Debug)]
pub enum FixtureSource {
    Algebraic(BiPoly),
    Coefficients(Vec<Integer>),
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub family: Family,
    pub source: FixtureSource,
    pub validated_to: usize,
    /// Enumerator counts for sizes `1..=validated_to`, as stamped.
    pub oracle_counts: Vec<Integer>,
    /// Hex SHA-256 of the fixture text.
    pub digest: String,
}

impl Fixture {
    /// Parses fixture text without requiring a stamp.
    pub fn parse(text: &str) -> Result<Fixture> {
        let mut family = None;
        let mut terms = Vec::new();
        let mut coeffs = Vec::new();
        let mut validated_to = 0;
        let mut oracle_counts = Vec::new();
        let bad = |fam: &str, reason: String| Error::FixtureInvalid {
            family: fam.to_string(),
            reason,
        };
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| bad("?", format!("malformed line `{line}`")))?;
            let value = value.trim();
            match key.trim() {
                "family" => family = Some(value.parse::<Family>()?),
                "poly" => {
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    let parsed = match parts.as_slice() {
                        [i, j, c] => i
                            .parse::<usize>()
                            .ok()
                            .zip(j.parse::<usize>().ok())
                            .zip(c.parse::<Integer>().ok()),
                        _ => None,
                    };
                    let ((i, j), c) = parsed.ok_or_else(|| bad("?", format!("bad poly line `{line}`")))?;
                    terms.push((i, j, Rational::from(c)));
                }
                "coeffs" => {
                    for tok in value.split_whitespace() {
                        coeffs.push(
                            tok.parse::<Integer>()
                                .map_err(|_| bad("?", format!("bad coefficient `{tok}`")))?,
                        );
                    }
                }
                "validated_to" => {
                    validated_to = value.parse().map_err(|_| bad("?", format!("bad stamp `{value}`")))?;
                }
                "oracle" => {
                    for tok in value.split_whitespace() {
                        oracle_counts.push(
                            tok.parse::<Integer>()
                                .map_err(|_| bad("?", format!("bad count `{tok}`")))?,
                        );
                    }
                }
                other => return Err(bad("?", format!("unknown key `{other}`"))),
            }
        }
        let family = family.ok_or_else(|| bad("?", "missing `family:` line".into()))?;
        let source = match (terms.is_empty(), coeffs.is_empty()) {
            (false, true) => FixtureSource::Algebraic(BiPoly::from_terms(terms)),
            (true, false) => FixtureSource::Coefficients(coeffs),
            _ => {
                return Err(bad(
                    family.name(),
                    "exactly one of `poly:` or `coeffs:` is required".into(),
                ))
            }
        };
        Ok(Fixture {
            family,
            source,
            validated_to,
            oracle_counts,
            digest: digest_hex(text),
        })
    }

    /// Loads an embedded fixture, refusing unstamped or inconsistent ones.
    pub fn load(family: Family) -> Result<Fixture> {
        let text = embedded_text(family)?;
        let fx = Fixture::parse(text)?;
        let bad = |reason: String| Error::FixtureInvalid {
            family: family.name().to_string(),
            reason,
        };
        if fx.validated_to < REQUIRED_DEPTH {
            return Err(bad(format!(
                "validated only to size {}; at least {REQUIRED_DEPTH} is required",
                fx.validated_to
            )));
        }
        if fx.oracle_counts.len() != fx.validated_to {
            return Err(bad("stamp does not list one oracle count per validated size".into()));
        }
        let s = fx.series(fx.validated_to)?;
        for (n, count) in fx.oracle_counts.iter().enumerate() {
            if *s.coeff(n + 1) != *count {
                return Err(bad(format!(
                    "size {}: descriptor gives {}, oracle gave {count}",
                    n + 1,
                    s.coeff(n + 1)
                )));
            }
        }
        Ok(fx)
    }

    /// Exact counting series to the given order, zero constant term.
    pub fn series(&self, order: usize) -> Result<Series<Rational>> {
        match &self.source {
            FixtureSource::Algebraic(p) => p.series_root(&Rational::new(), order),
            FixtureSource::Coefficients(c) => {
                if c.len() < order {
                    return Err(Error::FixtureInvalid {
                        family: self.family.name().to_string(),
                        reason: format!("only {} coefficients listed, order {order} requested", c.len()),
                    });
                }
                let mut v = vec![Rational::new()];
                v.extend(c[..order].iter().map(|x| Rational::from(x.clone())));
                Ok(Series::from_coeffs(v))
            }
        }
    }

    pub fn polynomial(&self) -> Option<&BiPoly> {
        match &self.source {
            FixtureSource::Algebraic(p) => Some(p),
            FixtureSource::Coefficients(_) => None,
        }
    }
}

pub fn embedded_text(family: Family) -> Result<&'static str> {
    EMBEDDED
        .iter()
        .find(|(f, _)| *f == family)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::UnknownFamily(format!("{family} has no fixture")))
}

/// Families that ship as fixtures.
pub fn fixture_families() -> impl Iterator<Item = Family> {
    EMBEDDED.iter().map(|(f, _)| *f)
}

/// Compares a fixture with the enumerator for sizes `1..=depth` and returns
/// the text with a fresh `validated_to:` / `oracle:` stamp.
pub fn stamp_fixture(text: &str, depth: usize) -> Result<String> {
    let fx = Fixture::parse(text)?;
    let s = fx.series(depth)?;
    let counts = oracle::census(fx.family, depth)?;
    for (n, count) in counts.iter().enumerate() {
        if *s.coeff(n + 1) != *count {
            return Err(Error::FixtureInvalid {
                family: fx.family.name().to_string(),
                reason: format!(
                    "size {}: descriptor gives {}, oracle gives {count}",
                    n + 1,
                    s.coeff(n + 1)
                ),
            });
        }
    }
    let mut out: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with("validated_to:") && !l.trim_start().starts_with("oracle:"))
        .map(|l| format!("{l}\n"))
        .collect();
    out.push_str(&format!("validated_to: {depth}\n"));
    let listed: Vec<String> = counts.iter().map(u64::to_string).collect();
    out.push_str(&format!("oracle: {}\n", listed.join(" ")));
    Ok(out)
}

fn digest_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
