use rug::{Float, Rational};

use super::numeric::hurwitz_zeta;
use super::singular::{fit_tail, Singularity};
use super::{Regime, TransitionPoint};
use crate::error::{Error, Result};
use crate::schemes::{LagrangianRecipe, SchemeSpec};
use crate::series::Series;

const ROUNDOFF: f64 = 1e-25;

/// Power-law tail `P(block index k) ~ sum_j c_j k^(-5/2 - j) r^k` beyond the
/// table; block index `k` corresponds to degree `stride * k`.
#[derive(Clone, Debug)]
pub struct TailModel {
    pub coefficients: Vec<f64>,
    pub ratio: f64,
    pub stride: usize,
    /// First block index not covered by the table.
    pub first_block: usize,
}

impl TailModel {
    /// Modeled probability of block index `k`.
    pub fn prob(&self, k: usize) -> f64 {
        let kf = k as f64;
        let mut inv = kf.powf(-2.5);
        let mut acc = 0.0;
        for c in &self.coefficients {
            acc += c * inv;
            inv /= kf;
        }
        acc * self.ratio.powf(kf)
    }

    /// `(sum_{k >= from} P(k), sum_{k >= from} k P(k))`.
    pub fn sums_from(&self, from: usize) -> (f64, f64) {
        if self.ratio >= 1.0 {
            let prec = 64;
            let a = Float::with_val(prec, from);
            let (mut mass, mut first) = (0.0, 0.0);
            for (j, c) in self.coefficients.iter().enumerate() {
                mass += c * hurwitz_zeta(&Float::with_val(prec, 2.5 + j as f64), &a).to_f64();
                first += c * hurwitz_zeta(&Float::with_val(prec, 1.5 + j as f64), &a).to_f64();
            }
            return (mass, first);
        }
        let (mut mass, mut first) = (0.0, 0.0);
        let mut k = from;
        loop {
            let p = self.prob(k);
            mass += p;
            first += p * k as f64;
            if p * (k as f64) < 1e-30 || k > from + 100_000_000 {
                break;
            }
            k += 1;
        }
        (mass, first)
    }
}

/// Scaled tables for decorating sequence nodes: `tau[k] = u t_k x^(2k)` and
/// `q[k] = [X^(2k)] Phi(X) x^(2k)`, so that `q = 1 / (1 - tau)`.
#[derive(Clone, Debug)]
pub struct SequenceTables {
    pub tau: Vec<f64>,
    pub q: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct OffspringLaw {
    pub scheme: u8,
    pub u: Rational,
    pub regime: Regime,
    /// `M(rho(u), u)`
    pub y: Float,
    /// Evaluation point of `Phi`.
    pub x: Float,
    pub phi: Float,
    /// `mu(k)` for degrees `0 ..= stride * table_blocks`.
    pub probabilities: Vec<Float>,
    /// `1 - sum(probabilities)`.
    pub tail_mass: Float,
    pub tail: TailModel,
    pub support_stride: usize,
    pub sequence: Option<SequenceTables>,
}

impl OffspringLaw {
    /// Largest block index in the table.
    pub fn table_blocks(&self) -> usize {
        (self.probabilities.len() - 1) / self.support_stride
    }

    /// `mu` on block indices as doubles: entry `k` is `mu(stride * k)`.
    pub fn block_probs(&self) -> Vec<f64> {
        self.probabilities
            .iter()
            .step_by(self.support_stride)
            .map(Float::to_f64)
            .collect()
    }

    /// Mean of the law including the modeled tail.
    pub fn mean(&self) -> f64 {
        let prec = self.probabilities[0].prec();
        let mut acc = Float::new(prec);
        for (k, p) in self.probabilities.iter().enumerate() {
            acc += Float::with_val(prec, p * k as u64);
        }
        let (_, first) = self.tail.sums_from(self.tail.first_block);
        acc.to_f64() + self.support_stride as f64 * first
    }

    /// Tail mass predicted by the tail model.
    pub fn modeled_tail_mass(&self) -> f64 {
        self.tail.sums_from(self.tail.first_block).0
    }
}

pub(super) fn build(
    spec: &SchemeSpec,
    point: &TransitionPoint,
    sing: &Singularity,
    blocks: &Series<Float>,
    prec: u32,
) -> Result<OffspringLaw> {
    let stride = spec.stride();
    let order = blocks.order();
    let u = Float::with_val(prec, &point.u);
    // tau_k = u b_k t^k
    let mut tau = Vec::with_capacity(order + 1);
    let mut power = Float::with_val(prec, 1);
    for k in 0..=order {
        tau.push(Float::with_val(prec, blocks.coeff(k) * &power) * &u);
        power *= &point.t;
    }
    let (block_weights, sequence) = match spec.recipe {
        LagrangianRecipe::Sequence => {
            let mut one_minus = tau.iter().map(|t| Float::with_val(prec, -t)).collect::<Vec<_>>();
            one_minus[0] = Float::with_val(prec, 1);
            let q = Series::from_coeffs(one_minus).inverse()?.into_coeffs();
            let tables = SequenceTables {
                tau: tau.iter().map(Float::to_f64).collect(),
                q: q.iter().map(Float::to_f64).collect(),
            };
            (q, Some(tables))
        }
        _ => {
            let mut w = tau;
            w[0] = Float::with_val(prec, 1);
            (w, None)
        }
    };
    let mut probabilities = vec![Float::new(prec); stride * order + 1];
    let mut total = Float::new(prec);
    for (k, w) in block_weights.iter().enumerate() {
        let mut p = Float::with_val(prec, w / &point.phi);
        if p.is_sign_negative() && p.to_f64().abs() < ROUNDOFF {
            p = Float::new(prec);
        }
        if p.is_sign_negative() {
            return Err(Error::Convention {
                scheme: spec.id,
                reason: format!("negative weight at degree {}", stride * k),
            });
        }
        total += &p;
        probabilities[stride * k] = p;
    }
    let tail_mass = Float::with_val(prec, 1 - total);
    let ratio_f = Float::with_val(prec, &point.t / &sing.radius).min(&Float::with_val(prec, 1));
    let coefficients = match spec.recipe {
        // The convolution 1 / (1 - tau) reshapes the correction terms, so the
        // tail is fitted on the table itself.
        LagrangianRecipe::Sequence => {
            let mut inv_power = Float::with_val(prec, 1);
            let inv_ratio = Float::with_val(prec, ratio_f.recip_ref());
            let mut scaled = Vec::with_capacity(order + 1);
            for k in 0..=order {
                scaled.push(Float::with_val(prec, &probabilities[stride * k] * &inv_power));
                inv_power *= &inv_ratio;
            }
            fit_tail(&scaled)?.iter().map(Float::to_f64).collect()
        }
        _ => {
            let factor = Float::with_val(prec, &u / &point.phi);
            sing.tail
                .iter()
                .map(|c| Float::with_val(prec, c * &factor).to_f64())
                .collect()
        }
    };
    let ratio = ratio_f.to_f64();
    let tail = TailModel {
        coefficients,
        ratio,
        stride,
        first_block: order + 1,
    };
    Ok(OffspringLaw {
        scheme: spec.id,
        u: point.u.clone(),
        regime: point.regime,
        y: point.y.clone(),
        x: point.x.clone(),
        phi: point.phi.clone(),
        probabilities,
        tail_mass,
        tail,
        support_stride: stride,
        sequence,
    })
}
