use rand::Rng;
use serde::Serialize;

use super::{DegreeLaw, DegreeSequence};
use crate::error::{Error, Result};
use crate::schemes::{LagrangianRecipe, SchemeSpec};

/// Blocks carried by one tree node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockRecord {
    pub node: usize,
    /// Block sizes in the size unit of the block family; one entry per block.
    pub block_sizes: Vec<usize>,
}

/// Assigns blocks to every node. Stride recipes carry one block of size
/// `degree / stride`; the sequence recipe splits the block index by
/// sequential peeling.
pub fn decorate_blocks<R: Rng>(
    spec: &SchemeSpec,
    law: &DegreeLaw,
    degs: &DegreeSequence,
    rng: &mut R,
) -> Result<Vec<BlockRecord>> {
    let stride = spec.stride();
    let mut records = Vec::with_capacity(degs.n());
    for (node, &d) in degs.degrees.iter().enumerate() {
        if d % stride != 0 {
            return Err(Error::Sampler(format!(
                "node {node} has degree {d}, not a multiple of {stride}"
            )));
        }
        let k = d / stride;
        let block_sizes = match spec.recipe {
            LagrangianRecipe::Sequence => peel(law, k, rng)?,
            _ if k == 0 => Vec::new(),
            _ => vec![k],
        };
        records.push(BlockRecord { node, block_sizes });
    }
    Ok(records)
}

/// Sequence of blocks with total size `k`, drawn with probability
/// `prod tau_(k_i) / q_k`.
fn peel<R: Rng>(law: &DegreeLaw, mut k: usize, rng: &mut R) -> Result<Vec<usize>> {
    let tables = law
        .sequence
        .as_ref()
        .ok_or_else(|| Error::Sampler("sequence decoration needs the q-table of the law".into()))?;
    if k >= tables.q.len() {
        return Err(Error::Sampler(format!(
            "block total {k} is beyond the q-table ({} entries)",
            tables.q.len()
        )));
    }
    let mut out = Vec::new();
    while k > 0 {
        if !(tables.q[k] > 0.0) {
            return Err(Error::Sampler(format!("impossible block total {k}: q_k = 0")));
        }
        let mut x = rng.random::<f64>() * tables.q[k];
        let mut chosen = None;
        for first in 1..=k {
            let w = tables.tau[first] * tables.q[k - first];
            if x < w {
                chosen = Some(first);
                break;
            }
            x -= w;
        }
        // Round-off can leave a sliver of mass after the last candidate.
        let first = chosen.unwrap_or_else(|| {
            (1..=k)
                .rev()
                .find(|&f| tables.tau[f] * tables.q[k - f] > 0.0)
                .unwrap_or(k)
        });
        out.push(first);
        k -= first;
    }
    Ok(out)
}

/// `L_1 >= ... >= L_j_max` over all blocks, padded with zeros.
pub fn largest_blocks(records: &[BlockRecord], j_max: usize) -> Vec<usize> {
    let mut sizes: Vec<usize> = records.iter().flat_map(|r| r.block_sizes.iter().copied()).collect();
    let j = j_max.min(sizes.len());
    if j > 0 && j < sizes.len() {
        sizes.select_nth_unstable_by(j - 1, |a, b| b.cmp(a));
    }
    sizes.truncate(j);
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes.resize(j_max, 0);
    sizes
}

/// Node total against the largest element of its sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CondensationPoint {
    pub total: usize,
    pub largest: usize,
}

/// Sequence nodes in the top decile of block totals.
pub fn condensation_diagnostic(records: &[BlockRecord]) -> Vec<CondensationPoint> {
    let mut points: Vec<CondensationPoint> = records
        .iter()
        .filter(|r| !r.block_sizes.is_empty())
        .map(|r| CondensationPoint {
            total: r.block_sizes.iter().sum(),
            largest: *r.block_sizes.iter().max().unwrap(),
        })
        .collect();
    points.sort_by(|a, b| b.total.cmp(&a.total).then(b.largest.cmp(&a.largest)));
    points.truncate(points.len().div_ceil(10));
    points
}
