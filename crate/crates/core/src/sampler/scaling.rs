use rayon::prelude::*;
use rug::Rational;
use serde::Serialize;

use super::{
    condensation_diagnostic, decorate_blocks, largest_blocks, replicate_rng, scheme_law, CondensationPoint,
    ConditionedSampler, Strategy,
};
use crate::error::{Error, Result};
use crate::schemes::{load_scheme, LagrangianRecipe};
use crate::transition::{Regime, Workbench, DEFAULT_ORDER};

pub const MIN_REPLICATES: usize = 30;

#[derive(Clone, Debug)]
pub struct ScalingOptions {
    /// Number of order statistics kept per replicate.
    pub j_max: usize,
    pub strategy: Strategy,
}

impl Default for ScalingOptions {
    fn default() -> Self {
        ScalingOptions {
            j_max: 3,
            strategy: Strategy::Auto,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReplicateRow {
    pub map_size: usize,
    pub tree_vertices: usize,
    pub rep: usize,
    /// `L_1 >= L_2 >= ...`
    pub largest: Vec<usize>,
    /// Sum of all block sizes.
    pub mass: usize,
    pub blocks_total: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderStatistic {
    pub j: usize,
    pub mean: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SizeSummary {
    pub map_size: usize,
    pub tree_vertices: usize,
    pub stats: Vec<OrderStatistic>,
    pub mean_blocks: f64,
    pub tail_fraction: f64,
    /// Top decile of sequence nodes in replicate 0; empty for stride recipes.
    pub condensation: Vec<CondensationPoint>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "regime", rename_all = "lowercase")]
pub enum ScalingFit {
    Subcritical {
        /// `(1 - E(u)) n` per size.
        center: Vec<f64>,
        /// Median `L_1 / n`.
        l1_ratio: Vec<f64>,
        /// Interquartile range of `L_1` over `n^(2/3)`.
        fluctuation: Vec<f64>,
        /// Median `L_1 - (1 - E(u)) n` over `n^(2/3)`.
        centered: Vec<f64>,
        /// Median `L_2 / n`.
        l2_ratio: Vec<f64>,
        /// Median `L_2 / n^(2/3)`.
        l2_scaled: Vec<f64>,
    },
    Critical {
        /// Median `L_j / n^(2/3)`, one row per size.
        scaled_medians: Vec<Vec<f64>>,
    },
    Supercritical {
        /// Least-squares slope of median `L_1` against `ln n`.
        slope: Option<f64>,
        intercept: Option<f64>,
        /// Growth of median `L_1` per e-fold between consecutive sizes.
        increments: Vec<f64>,
        /// Median `L_1 / n^0.1`.
        l1_over_n01: Vec<f64>,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingReport {
    pub scheme: u8,
    pub u: String,
    pub regime: Regime,
    pub mean: f64,
    /// Map sizes `n`.
    pub sizes: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
    pub j_max: usize,
    pub summaries: Vec<SizeSummary>,
    pub fit: ScalingFit,
    pub rows: Vec<ReplicateRow>,
}

/// Type-7 quantile of sorted data.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let (lo, hi) = (h.floor() as usize, h.ceil() as usize);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn summarize(values: &mut [f64], j: usize) -> OrderStatistic {
    values.sort_by(f64::total_cmp);
    OrderStatistic {
        j,
        mean: values.iter().sum::<f64>() / values.len() as f64,
        median: quantile(values, 0.5),
        q1: quantile(values, 0.25),
        q3: quantile(values, 0.75),
    }
}

/// Slope and intercept of the least-squares line through the points.
fn line_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    if xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Largest-block statistics over conditioned block trees for each map size.
pub fn scaling_experiment(
    scheme: u8,
    u: &Rational,
    sizes: &[usize],
    replicates: usize,
    seed: u64,
    options: &ScalingOptions,
) -> Result<ScalingReport> {
    if replicates < MIN_REPLICATES {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_REPLICATES} replicates, got {replicates}"
        )));
    }
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::InvalidArgument(
            "sizes must be a nonempty list of positive map sizes".into(),
        ));
    }
    if options.j_max == 0 {
        return Err(Error::InvalidArgument("j_max must be positive".into()));
    }
    let spec = load_scheme(scheme)?;
    let point = Workbench::global().singular_point(scheme, u, DEFAULT_ORDER)?;
    let law = scheme_law(scheme, u, *sizes.iter().max().unwrap())?;
    let samplers = sizes
        .iter()
        .map(|&m| ConditionedSampler::new(&law, spec.tree_vertices(m), options.strategy))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize)> = (0..sizes.len())
        .flat_map(|i| (0..replicates).map(move |r| (i, r)))
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(i, rep)| {
            let mut rng = replicate_rng(seed, ((i as u64) << 32) | rep as u64);
            let tree = samplers[i].sample(&mut rng)?;
            if !tree.is_valid() {
                return Err(Error::Sampler("cycle lemma produced an invalid tree".into()));
            }
            let records = decorate_blocks(spec, &law, &tree, &mut rng)?;
            let mass: usize = records.iter().flat_map(|r| &r.block_sizes).sum();
            if mass != sizes[i] {
                return Err(Error::Sampler(format!(
                    "blocks sum to {mass}, expected map size {}",
                    sizes[i]
                )));
            }
            let condensation = if rep == 0 && spec.recipe == LagrangianRecipe::Sequence {
                condensation_diagnostic(&records)
            } else {
                Vec::new()
            };
            let row = ReplicateRow {
                map_size: sizes[i],
                tree_vertices: tree.n(),
                rep,
                largest: largest_blocks(&records, options.j_max),
                mass,
                blocks_total: records.iter().map(|r| r.block_sizes.len()).sum(),
            };
            Ok((row, condensation))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(results.len());
    let mut condensation = vec![Vec::new(); sizes.len()];
    for ((row, cond), &(i, _)) in results.into_iter().zip(&jobs) {
        if !cond.is_empty() {
            condensation[i] = cond;
        }
        rows.push(row);
    }
    let mut summaries = Vec::with_capacity(sizes.len());
    for (i, &m) in sizes.iter().enumerate() {
        let chunk = &rows[i * replicates..(i + 1) * replicates];
        let stats = (0..options.j_max)
            .map(|j| {
                summarize(
                    &mut chunk.iter().map(|r| r.largest[j] as f64).collect::<Vec<_>>(),
                    j + 1,
                )
            })
            .collect();
        summaries.push(SizeSummary {
            map_size: m,
            tree_vertices: spec.tree_vertices(m),
            stats,
            mean_blocks: chunk.iter().map(|r| r.blocks_total as f64).sum::<f64>() / replicates as f64,
            tail_fraction: samplers[i].tail_fraction(),
            condensation: std::mem::take(&mut condensation[i]),
        });
    }
    let mean = point.mean.to_f64();
    let fit = fit(point.regime, mean, &summaries);
    Ok(ScalingReport {
        scheme,
        u: u.to_string(),
        regime: point.regime,
        mean,
        sizes: sizes.to_vec(),
        replicates,
        seed,
        j_max: options.j_max,
        summaries,
        fit,
        rows,
    })
}

fn fit(regime: Regime, mean: f64, summaries: &[SizeSummary]) -> ScalingFit {
    let n = |s: &SizeSummary| s.map_size as f64;
    let median = |s: &SizeSummary, j: usize| s.stats.get(j).map_or(0.0, |o| o.median);
    match regime {
        Regime::Subcritical => ScalingFit::Subcritical {
            center: summaries.iter().map(|s| (1.0 - mean) * n(s)).collect(),
            l1_ratio: summaries.iter().map(|s| median(s, 0) / n(s)).collect(),
            fluctuation: summaries
                .iter()
                .map(|s| (s.stats[0].q3 - s.stats[0].q1) / n(s).powf(2.0 / 3.0))
                .collect(),
            centered: summaries
                .iter()
                .map(|s| (median(s, 0) - (1.0 - mean) * n(s)) / n(s).powf(2.0 / 3.0))
                .collect(),
            l2_ratio: summaries.iter().map(|s| median(s, 1) / n(s)).collect(),
            l2_scaled: summaries.iter().map(|s| median(s, 1) / n(s).powf(2.0 / 3.0)).collect(),
        },
        Regime::Critical => ScalingFit::Critical {
            scaled_medians: summaries
                .iter()
                .map(|s| s.stats.iter().map(|o| o.median / n(s).powf(2.0 / 3.0)).collect())
                .collect(),
        },
        Regime::Supercritical => {
            let xs: Vec<f64> = summaries.iter().map(|s| n(s).ln()).collect();
            let ys: Vec<f64> = summaries.iter().map(|s| median(s, 0)).collect();
            let line = line_fit(&xs, &ys);
            ScalingFit::Supercritical {
                slope: line.map(|l| l.0),
                intercept: line.map(|l| l.1),
                increments: xs
                    .windows(2)
                    .zip(ys.windows(2))
                    .map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0]))
                    .collect(),
                l1_over_n01: summaries.iter().map(|s| median(s, 0) / n(s).powf(0.1)).collect(),
            }
        }
    }
}
