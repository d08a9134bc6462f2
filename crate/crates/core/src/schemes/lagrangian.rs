use rug::Rational;

use super::solve::extract_block_series;
use super::{LagrangianRecipe, SchemeSpec};
use crate::error::{Error, Result};
use crate::series::{lagrange_coefficient, Series};

/// How a tree node's degree translates into block sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockRule {
    /// Degree `d * k` carries one block of size `k`.
    Single { stride: usize },
    /// Degree `2 k` carries a sequence of blocks of total size `k`.
    Sequence,
}

impl BlockRule {
    pub fn stride(self) -> usize {
        match self {
            BlockRule::Single { stride } => stride,
            BlockRule::Sequence => 2,
        }
    }
}

/// `M^ = X Phi(M^, u)` form of a scheme at a fixed weight.
///
/// `M^(z) = z (1 + M(z^s, u))` where `s` is the stride, so a map of size `n`
/// is a tree with `s n + 1` vertices.
#[derive(Clone, Debug)]
pub struct LagrangianForm {
    pub scheme: u8,
    pub u: Rational,
    /// `Phi(X, u)` truncated in `X`.
    pub phi: Series<Rational>,
    pub recipe: LagrangianRecipe,
    pub block_rule: BlockRule,
    pub tree_size: (usize, usize),
}

impl LagrangianForm {
    pub fn stride(&self) -> usize {
        self.block_rule.stride()
    }

    pub fn tree_vertices(&self, map_size: usize) -> usize {
        self.tree_size.0 * map_size + self.tree_size.1
    }

    /// `M^` by fixed-point iteration of `M^ = X Phi(M^)`.
    pub fn tree_series(&self, order: usize) -> Result<Series<Rational>> {
        let phi = self.phi.clone();
        Series::solve_fixed_point(&Rational::new(), order, |m| {
            let k = m.order();
            let inner = m.truncate(k);
            Ok(phi.truncate(k).compose(&inner)?.mul_z_pow(1).truncate(k))
        })
    }

    /// `[z^n] M(z, u)` through Lagrange inversion on the tree series.
    pub fn map_coefficient(&self, map_size: usize) -> Result<Rational> {
        if map_size == 0 {
            return Ok(Rational::new());
        }
        lagrange_coefficient(&self.phi, self.tree_vertices(map_size))
    }
}

/// Builds `Phi` to order `order` in `X`.
pub fn lagrangian(spec: &SchemeSpec, u: &Rational, order: usize) -> Result<LagrangianForm> {
    if u.cmp0().is_le() {
        return Err(Error::InvalidArgument("u must be positive".into()));
    }
    let stride = spec.stride();
    let b = extract_block_series(spec, (order / stride).max(1))?;
    let ub = b.scale(u).substitute_power(stride);
    let ub = if ub.order() < order {
        Series::polynomial(ub.into_coeffs(), order)
    } else {
        ub.truncate(order)
    };
    let one = Rational::from(1);
    let (phi, block_rule) = match spec.recipe {
        LagrangianRecipe::DirectK | LagrangianRecipe::RootSubstitution => {
            (ub.add_constant(&one), BlockRule::Single { stride })
        }
        LagrangianRecipe::Sequence => (ub.neg().add_constant(&one).inverse()?, BlockRule::Sequence),
    };
    if let Some(k) = phi.coeffs().iter().position(|c| c.cmp0().is_lt()) {
        return Err(Error::Convention {
            scheme: spec.id,
            reason: format!("[X^{k}] Phi is negative"),
        });
    }
    Ok(LagrangianForm {
        scheme: spec.id,
        u: u.clone(),
        phi,
        recipe: spec.recipe,
        block_rule,
        tree_size: spec.tree_size,
    })
}
