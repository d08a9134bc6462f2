//! Free and size-conditioned Galton-Watson block trees, block decoration and
//! largest-block scaling experiments.
//!
//! Offspring degrees are handled in block units: a node of degree `stride * k`
//! carries block index `k`. Trees are encoded by their depth-first degree
//! sequence.

mod conditioned;
mod decorate;
mod scaling;
mod tree;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use conditioned::{sample_conditioned, ConditionedSampler, Strategy, EXACT_CAP, MAX_TAIL_FRACTION};
pub use decorate::{condensation_diagnostic, decorate_blocks, largest_blocks, BlockRecord, CondensationPoint};
pub use scaling::{
    scaling_experiment, OrderStatistic, ReplicateRow, ScalingFit, ScalingOptions, ScalingReport, SizeSummary,
    MIN_REPLICATES,
};
pub use tree::{sample_free_tree, sample_free_tree_capped, DegreeSequence, FREE_TREE_CAP};

use crate::error::{Error, Result};
use crate::transition::{OffspringLaw, Regime, SequenceTables, TailModel, Workbench, DEFAULT_ORDER};

/// Tolerance on the mean when classifying ad hoc laws.
const MEAN_TOL: f64 = 1e-9;

/// Offspring law in double precision, indexed by block index.
#[derive(Clone, Debug)]
pub struct DegreeLaw {
    pub stride: usize,
    /// `probs[k] = mu(stride * k)`
    pub probs: Vec<f64>,
    /// Mass beyond the table.
    pub tail_mass: f64,
    pub tail: Option<TailModel>,
    pub sequence: Option<SequenceTables>,
    pub regime: Regime,
}

impl DegreeLaw {
    /// Ad hoc law with no tail beyond the given table.
    pub fn new(stride: usize, probs: Vec<f64>) -> Result<Self> {
        if stride == 0 || probs.is_empty() {
            return Err(Error::InvalidArgument(
                "a law needs a positive stride and a nonempty table".into(),
            ));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidArgument(
                "probabilities must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("probabilities sum to {total}, not 1")));
        }
        let mean: f64 = probs.iter().enumerate().map(|(k, p)| (stride * k) as f64 * p).sum();
        let regime = if mean < 1.0 - MEAN_TOL {
            Regime::Subcritical
        } else if mean <= 1.0 + MEAN_TOL {
            Regime::Critical
        } else {
            Regime::Supercritical
        };
        Ok(DegreeLaw {
            stride,
            probs,
            tail_mass: 0.0,
            tail: None,
            sequence: None,
            regime,
        })
    }

    pub fn from_offspring(law: &OffspringLaw) -> Self {
        DegreeLaw {
            stride: law.support_stride,
            probs: law.block_probs(),
            tail_mass: law.tail_mass.to_f64().max(0.0),
            tail: Some(law.tail.clone()),
            sequence: law.sequence.clone(),
            regime: law.regime,
        }
    }

    /// Largest tabulated block index.
    pub fn table_blocks(&self) -> usize {
        self.probs.len() - 1
    }

    /// `mu(stride * k)`, from the tail model beyond the table.
    pub fn prob(&self, k: usize) -> f64 {
        match (self.probs.get(k), &self.tail) {
            (Some(p), _) => *p,
            (None, Some(t)) => t.prob(k).max(0.0),
            (None, None) => 0.0,
        }
    }

    /// Mean offspring count.
    pub fn mean(&self) -> f64 {
        let table: f64 = self.probs.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        let tail = self.tail.as_ref().map_or(0.0, |t| t.sums_from(self.probs.len()).1);
        self.stride as f64 * (table + tail)
    }

    /// Draws a block index from the table, walking the tail model with the
    /// remaining probability.
    fn draw<R: Rng>(&self, rng: &mut R, cumulative: &[f64]) -> usize {
        let x: f64 = rng.random::<f64>();
        let table_total = *cumulative.last().unwrap();
        if x < table_total || self.tail.is_none() {
            let k = cumulative.partition_point(|&c| c <= x);
            return k.min(self.probs.len() - 1);
        }
        let tail = self.tail.as_ref().unwrap();
        let mut acc = table_total;
        let mut k = self.probs.len();
        loop {
            acc += tail.prob(k).max(0.0);
            if acc > x || k > self.probs.len() + 1_000_000_000 {
                return k;
            }
            k += 1;
        }
    }

    fn cumulative(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect()
    }
}

/// Offspring law of a scheme with a table long enough for conditioning on
/// map sizes up to `max_map_size` (the default order above the critical
/// weight, where the tail is geometric).
pub fn scheme_law(scheme: u8, u: &rug::Rational, max_map_size: usize) -> Result<DegreeLaw> {
    let bench = Workbench::global();
    let point = bench.singular_point(scheme, u, DEFAULT_ORDER)?;
    let table = match point.regime {
        Regime::Supercritical => DEFAULT_ORDER,
        _ => max_map_size.max(DEFAULT_ORDER),
    };
    Ok(DegreeLaw::from_offspring(&bench.offspring_law_with(
        scheme,
        u,
        table,
        DEFAULT_ORDER,
    )?))
}

/// Generator for replicate `stream` under the given seed.
pub fn replicate_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
