use rand::Rng;

use super::DegreeLaw;
use crate::error::{Error, Result};
use crate::transition::Regime;

/// Largest free tree grown before giving up.
pub const FREE_TREE_CAP: usize = 10_000_000;

/// Depth-first degree sequence of a plane tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegreeSequence {
    pub degrees: Vec<usize>,
}

impl DegreeSequence {
    /// Validates the Lukasiewicz condition.
    pub fn new(degrees: Vec<usize>) -> Result<Self> {
        let seq = DegreeSequence { degrees };
        if !seq.is_valid() {
            return Err(Error::Sampler("not the degree sequence of a plane tree".into()));
        }
        Ok(seq)
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    /// Partial sums of `degree - 1` stay nonnegative until they hit `-1` at
    /// the last vertex.
    pub fn is_valid(&self) -> bool {
        let mut s: i64 = 0;
        for (i, &d) in self.degrees.iter().enumerate() {
            s += d as i64 - 1;
            if s < 0 {
                return s == -1 && i + 1 == self.degrees.len();
            }
        }
        false
    }

    /// Rotation of a sequence with `sum(d - 1) = -1` that starts just after
    /// the first minimum of its partial sums; the only valid rotation.
    pub fn from_cycle(mut degrees: Vec<usize>) -> Result<Self> {
        let n = degrees.len();
        let total: i64 = degrees.iter().map(|&d| d as i64 - 1).sum();
        if n == 0 || total != -1 {
            return Err(Error::Sampler(format!(
                "cycle lemma needs sum(d - 1) = -1, got {total}"
            )));
        }
        let (mut s, mut min, mut arg) = (0i64, i64::MAX, 0);
        for (i, &d) in degrees.iter().enumerate() {
            s += d as i64 - 1;
            if s < min {
                min = s;
                arg = i;
            }
        }
        degrees.rotate_left((arg + 1) % n);
        Ok(DegreeSequence { degrees })
    }

    /// Number of rotations that are valid degree sequences.
    pub fn valid_rotations(&self) -> usize {
        let n = self.n();
        let mut rotated = self.degrees.clone();
        let mut count = 0;
        for _ in 0..n {
            if (DegreeSequence {
                degrees: rotated.clone(),
            })
            .is_valid()
            {
                count += 1;
            }
            rotated.rotate_left(1);
        }
        count
    }
}

/// Unconditioned Galton-Watson tree, grown depth first.
pub fn sample_free_tree<R: Rng>(law: &DegreeLaw, rng: &mut R) -> Result<DegreeSequence> {
    sample_free_tree_capped(law, FREE_TREE_CAP, rng)
}

/// As [`sample_free_tree`], giving up beyond `cap` vertices.
pub fn sample_free_tree_capped<R: Rng>(law: &DegreeLaw, cap: usize, rng: &mut R) -> Result<DegreeSequence> {
    if law.regime == Regime::Supercritical && law.mean() > 1.0 + 1e-9 {
        return Err(Error::Sampler(
            "the law has mean above one; the tree survives with positive probability".into(),
        ));
    }
    let cumulative = law.cumulative();
    let mut degrees = Vec::new();
    let mut open: u64 = 1;
    while open > 0 {
        if degrees.len() >= cap {
            return Err(Error::Sampler(format!("free tree exceeded {cap} vertices")));
        }
        let d = law.stride * law.draw(rng, &cumulative);
        degrees.push(d);
        open = open - 1 + d as u64;
    }
    Ok(DegreeSequence { degrees })
}
