use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

use super::{DegreeLaw, DegreeSequence};
use crate::error::{Error, Result};
use crate::transition::Regime;

/// Largest block total handled by the exact sampler.
pub const EXACT_CAP: usize = 10_000;
/// Largest tolerated share of conditioned mass coming from the tail model.
pub const MAX_TAIL_FRACTION: f64 = 1e-3;
const MAX_ATTEMPTS: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Exact sampler below and at the critical weight, rejection above.
    Auto,
    /// Divide and conquer on convolution powers of the law.
    Exact,
    /// Multinomial degree counts, rejected until they sum to the target.
    Rejection,
}

#[derive(Clone, Debug)]
enum Tables {
    Trivial,
    /// Truncated convolution powers `P(S_a = s)`, `s <= m`, each scaled to
    /// a maximum of one.
    Exact(HashMap<usize, Vec<f64>>),
    /// Table probabilities renormalized and their suffix sums.
    Rejection {
        probs: Vec<f64>,
        suffix: Vec<f64>,
    },
}

/// Sampler for i.i.d. block indices conditioned on their sum, followed by the
/// cycle lemma.
#[derive(Clone, Debug)]
pub struct ConditionedSampler {
    stride: usize,
    n: usize,
    m: usize,
    strategy: Strategy,
    tables: Tables,
    tail_fraction: f64,
}

fn halves(a: usize) -> (usize, usize) {
    (a.div_ceil(2), a / 2)
}

fn normalize(v: &mut [f64]) {
    let max = v.iter().cloned().fold(0.0, f64::max);
    if max > 0.0 {
        v.iter_mut().for_each(|x| *x /= max);
    }
}

fn convolve(a: &[f64], b: &[f64], m: usize) -> Vec<f64> {
    let mut out = vec![0.0; m + 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (o, &y) in out[i..].iter_mut().zip(&b[..=m - i]) {
            *o += x * y;
        }
    }
    normalize(&mut out);
    out
}

fn power(cache: &mut HashMap<usize, Vec<f64>>, base: &[f64], a: usize, m: usize) -> Vec<f64> {
    if let Some(v) = cache.get(&a) {
        return v.clone();
    }
    let v = if a == 1 {
        let mut v = base.to_vec();
        normalize(&mut v);
        v
    } else {
        let (x, y) = halves(a);
        let px = power(cache, base, x, m);
        let py = power(cache, base, y, m);
        convolve(&px, &py, m)
    };
    cache.insert(a, v.clone());
    v
}

fn pick<R: Rng>(rng: &mut R, weights: &[f64]) -> Option<usize> {
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return None;
    }
    let mut x = rng.random::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if x < *w {
            return Some(i);
        }
        x -= w;
    }
    weights.iter().rposition(|w| *w > 0.0)
}

impl ConditionedSampler {
    /// Prepares to sample trees with `n` vertices.
    pub fn new(law: &DegreeLaw, n: usize, strategy: Strategy) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("trees have at least one vertex".into()));
        }
        if !(n - 1).is_multiple_of(law.stride) {
            return Err(Error::InvalidArgument(format!(
                "tree size {n} is incompatible with stride {}: need n = 1 mod {}",
                law.stride, law.stride
            )));
        }
        let m = (n - 1) / law.stride;
        let strategy = match (strategy, law.regime) {
            (Strategy::Auto, Regime::Supercritical) => Strategy::Rejection,
            (Strategy::Auto, _) => Strategy::Exact,
            (Strategy::Exact, Regime::Supercritical) => {
                return Err(Error::Sampler(
                    "the exact sampler is for laws at or below the critical weight".into(),
                ))
            }
            (Strategy::Rejection, Regime::Subcritical) => {
                return Err(Error::Sampler(
                    "rejection is infeasible under condensation; use the exact sampler".into(),
                ))
            }
            (s, _) => s,
        };
        let mut sampler = ConditionedSampler {
            stride: law.stride,
            n,
            m,
            strategy,
            tables: Tables::Trivial,
            tail_fraction: 0.0,
        };
        if n == 1 {
            return Ok(sampler);
        }
        match strategy {
            Strategy::Exact => sampler.build_exact(law)?,
            _ => sampler.build_rejection(law)?,
        }
        if sampler.tail_fraction > MAX_TAIL_FRACTION {
            return Err(Error::Sampler(format!(
                "tail model carries {:.3e} of the conditioned mass (limit {MAX_TAIL_FRACTION:e}); enlarge the table",
                sampler.tail_fraction
            )));
        }
        Ok(sampler)
    }

    fn build_exact(&mut self, law: &DegreeLaw) -> Result<()> {
        let (n, m) = (self.n, self.m);
        if m > EXACT_CAP {
            return Err(Error::Sampler(format!(
                "exact sampler is capped at {EXACT_CAP} blocks, got {m}"
            )));
        }
        let base: Vec<f64> = (0..=m).map(|k| law.prob(k)).collect();
        let mut cache = HashMap::new();
        power(&mut cache, &base, n, m);
        let total = cache[&n][m];
        if !(total > 0.0) {
            return Err(Error::Sampler(format!(
                "no tree with {n} vertices has positive probability"
            )));
        }
        let table = law.table_blocks();
        if m > table {
            let rest = power(&mut cache.clone(), &base, n - 1, m);
            let weight = |k: usize| base[k] * rest[m - k];
            let all: f64 = (0..=m).map(weight).sum();
            let tail: f64 = (table + 1..=m).map(weight).sum();
            self.tail_fraction = n as f64 * tail / all;
        }
        self.tables = Tables::Exact(cache);
        Ok(())
    }

    fn build_rejection(&mut self, law: &DegreeLaw) -> Result<()> {
        self.tail_fraction = law.tail_mass * self.n as f64;
        let total: f64 = law.probs.iter().sum();
        let probs: Vec<f64> = law.probs.iter().map(|p| p / total).collect();
        let mut suffix = vec![0.0; probs.len() + 1];
        for k in (0..probs.len()).rev() {
            suffix[k] = suffix[k + 1] + probs[k];
        }
        self.tables = Tables::Rejection { probs, suffix };
        Ok(())
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    /// Share of the conditioned mass drawn from the tail model (an upper
    /// bound for rejection).
    pub fn tail_fraction(&self) -> f64 {
        self.tail_fraction
    }

    /// Block indices `k_1, ..., k_n` with sum `m`, exchangeable.
    pub fn sample_blocks<R: Rng>(&self, rng: &mut R) -> Result<Vec<usize>> {
        match &self.tables {
            Tables::Trivial => Ok(vec![0]),
            Tables::Exact(cache) => self.sample_exact(cache, rng),
            Tables::Rejection { probs, suffix } => self.sample_rejection(probs, suffix, rng),
        }
    }

    fn sample_exact<R: Rng>(&self, cache: &HashMap<usize, Vec<f64>>, rng: &mut R) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(self.n);
        let mut stack = vec![(self.n, self.m)];
        let mut weights = Vec::new();
        while let Some((a, s)) = stack.pop() {
            if a == 1 {
                out.push(s);
                continue;
            }
            let (x, y) = halves(a);
            let (px, py) = (&cache[&x], &cache[&y]);
            weights.clear();
            weights.extend((0..=s).map(|j| px[j] * py[s - j]));
            let j = pick(rng, &weights)
                .ok_or_else(|| Error::Sampler(format!("underflow splitting {s} blocks over {a} vertices")))?;
            stack.push((y, s - j));
            stack.push((x, j));
        }
        Ok(out)
    }

    fn sample_rejection<R: Rng>(&self, probs: &[f64], suffix: &[f64], rng: &mut R) -> Result<Vec<usize>> {
        let mut counts = Vec::with_capacity(probs.len());
        for _ in 0..MAX_ATTEMPTS {
            counts.clear();
            let mut remaining = self.n as u64;
            let mut sum = 0usize;
            for (k, p) in probs.iter().enumerate() {
                if remaining == 0 {
                    break;
                }
                let q = if suffix[k] > 0.0 {
                    (p / suffix[k]).clamp(0.0, 1.0)
                } else {
                    1.0
                };
                let c = Binomial::new(remaining, q)
                    .map_err(|e| Error::Sampler(e.to_string()))?
                    .sample(rng);
                counts.push(c);
                remaining -= c;
                sum += k * c as usize;
                if sum > self.m {
                    break;
                }
            }
            if remaining == 0 && sum == self.m {
                let mut out = Vec::with_capacity(self.n);
                for (k, &c) in counts.iter().enumerate() {
                    out.extend(std::iter::repeat_n(k, c as usize));
                }
                out.shuffle(rng);
                return Ok(out);
            }
        }
        Err(Error::Sampler(format!("no acceptance in {MAX_ATTEMPTS} attempts")))
    }

    /// Conditioned tree with `n` vertices.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Result<DegreeSequence> {
        let blocks = self.sample_blocks(rng)?;
        DegreeSequence::from_cycle(blocks.into_iter().map(|k| k * self.stride).collect())
    }
}

/// Galton-Watson tree conditioned to have `n` vertices.
pub fn sample_conditioned<R: Rng>(law: &DegreeLaw, n: usize, rng: &mut R) -> Result<DegreeSequence> {
    ConditionedSampler::new(law, n, Strategy::Auto)?.sample(rng)
}
