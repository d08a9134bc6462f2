//! The eight map/block decomposition schemes.
//!
//! Every scheme relates a map family `M` to a block family `B` through
//! `M = u B(z (1 + M)^d)` (form [`EquationForm::Substitution`]) or
//! `M = (1 + M) u B(z (1 + M)^2)` (form [`EquationForm::Factored`]), with one
//! factor of `u` per block of positive size.

mod derived;
pub mod fixtures;
mod lagrangian;
mod solve;

pub use derived::{block_polynomial, map_polynomial, weighted_polynomial};
pub use fixtures::{Fixture, FixtureSource};
pub use lagrangian::{lagrangian, BlockRule, LagrangianForm};
pub use solve::{
    base_series, block_series_float, extract_block_series, map_series, solve_weighted, solve_weighted_bivariate,
    solve_weighted_float, solve_weighted_newton, BIVARIATE_CAP,
};

use std::fmt;

use crate::error::{Error, Result};
use crate::oracle::Family;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquationForm {
    /// `M = u B(H(z, M))`
    Substitution,
    /// `M = (1 + M) u B(H(z, M))`
    Factored,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LagrangianRecipe {
    /// `K = z (1 + M)` satisfies `K = z (1 + u B(K))`.
    DirectK,
    /// `M^ = z (1 + M(z^d))` satisfies `M^ = z (1 + u B(M^^d))`.
    RootSubstitution,
    /// `M^ = z (1 + M(z^2))` satisfies `M^ = z / (1 - u B(M^^2))`.
    Sequence,
}

/// How the map series of a scheme is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapSource {
    /// Solution of a shipped algebraic descriptor.
    Fixture(Family),
    /// Block series of another scheme, possibly shifted.
    BlocksOf { scheme: u8, shift: Shift },
}

/// Affine relation between a block series `B` and the map series built on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shift {
    /// maps = B
    Identity,
    /// maps = B - z
    MinusZ,
    /// maps = (B - z) / z
    MinusZOverZ,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeSpec {
    pub id: u8,
    pub map_family: Family,
    pub map_symbol: &'static str,
    pub block_family: Family,
    pub block_symbol: &'static str,
    /// Exponent in `H(z, M) = z (1 + M)^d`.
    pub d: usize,
    pub form: EquationForm,
    pub recipe: LagrangianRecipe,
    /// Tree vertices = `a * n + b` for a map of size `n`.
    pub tree_size: (usize, usize),
    pub map_source: MapSource,
    pub adjustments: &'static [&'static str],
}

impl SchemeSpec {
    /// Number of tree vertices for a map of the given size.
    pub fn tree_vertices(&self, map_size: usize) -> usize {
        self.tree_size.0 * map_size + self.tree_size.1
    }

    /// Inverse of [`SchemeSpec::tree_vertices`].
    pub fn map_size(&self, tree_vertices: usize) -> Result<usize> {
        let (a, b) = self.tree_size;
        if tree_vertices < b || !(tree_vertices - b).is_multiple_of(a) {
            return Err(Error::InvalidArgument(format!(
                "scheme {} trees have {a}n + {b} vertices; {tree_vertices} is not of that form",
                self.id
            )));
        }
        Ok((tree_vertices - b) / a)
    }

    /// Period of the offspring law support.
    pub fn stride(&self) -> usize {
        match self.recipe {
            LagrangianRecipe::Sequence => 2,
            _ => self.d,
        }
    }
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "scheme {}: {} ({}) -> blocks {} ({}), H = z(1+M)^{}, {:?}",
            self.id, self.map_symbol, self.map_family, self.block_symbol, self.block_family, self.d, self.form
        )
    }
}

const REGISTRY: [SchemeSpec; 8] = [
    SchemeSpec {
        id: 1,
        map_family: Family::Loopless,
        map_symbol: "M2",
        block_family: Family::Simple,
        block_symbol: "M3",
        d: 1,
        form: EquationForm::Substitution,
        recipe: LagrangianRecipe::DirectK,
        tree_size: (1, 1),
        map_source: MapSource::Fixture(Family::Loopless),
        adjustments: &[],
    },
    SchemeSpec {
        id: 2,
        map_family: Family::All,
        map_symbol: "M1",
        block_family: Family::TwoConnected,
        block_symbol: "M4",
        d: 2,
        form: EquationForm::Substitution,
        recipe: LagrangianRecipe::RootSubstitution,
        tree_size: (2, 1),
        map_source: MapSource::Fixture(Family::All),
        adjustments: &["blocks include the single edge and the single loop: M4 = 2z + z^2 + ..."],
    },
    SchemeSpec {
        id: 3,
        map_family: Family::TwoConnectedLoopless,
        map_symbol: "M4 - z",
        block_family: Family::TwoConnectedSimple,
        block_symbol: "M5",
        d: 1,
        form: EquationForm::Substitution,
        recipe: LagrangianRecipe::DirectK,
        tree_size: (1, 1),
        map_source: MapSource::BlocksOf { scheme: 2, shift: Shift::MinusZ },
        adjustments: &["maps = M4(z) - z (the single loop is removed)"],
    },
    SchemeSpec {
        id: 4,
        map_family: Family::Bipartite,
        map_symbol: "B1",
        block_family: Family::BipartiteSimple,
        block_symbol: "B2",
        d: 1,
        form: EquationForm::Substitution,
        recipe: LagrangianRecipe::DirectK,
        tree_size: (1, 1),
        map_source: MapSource::Fixture(Family::Bipartite),
        adjustments: &[],
    },
    SchemeSpec {
        id: 5,
        map_family: Family::Bipartite,
        map_symbol: "B1",
        block_family: Family::BipartiteTwoConnected,
        block_symbol: "B4",
        d: 2,
        form: EquationForm::Substitution,
        recipe: LagrangianRecipe::RootSubstitution,
        tree_size: (2, 1),
        map_source: MapSource::Fixture(Family::Bipartite),
        adjustments: &[],
    },
    SchemeSpec {
        id: 6,
        map_family: Family::BipartiteTwoConnected,
        map_symbol: "B4",
        block_family: Family::BipartiteTwoConnectedSimple,
        block_symbol: "B5",
        d: 1,
        form: EquationForm::Substitution,
        recipe: LagrangianRecipe::DirectK,
        tree_size: (1, 1),
        map_source: MapSource::BlocksOf { scheme: 5, shift: Shift::Identity },
        adjustments: &[],
    },
    SchemeSpec {
        id: 7,
        map_family: Family::LooplessTriangulation,
        map_symbol: "T1",
        block_family: Family::SimpleTriangulation,
        block_symbol: "z + zT2",
        d: 3,
        form: EquationForm::Substitution,
        recipe: LagrangianRecipe::RootSubstitution,
        tree_size: (3, 1),
        map_source: MapSource::Fixture(Family::LooplessTriangulation),
        adjustments: &[
            "T1 size n = n + 2 vertices; T2 size n = n + 3 vertices",
            "blocks = z + z T2(z): the size-1 block is the triangle, a block of size n + 1 is a simple triangulation of size n",
        ],
    },
    SchemeSpec {
        id: 8,
        map_family: Family::SimpleTriangulation,
        map_symbol: "T2",
        block_family: Family::IrreducibleTriangulation,
        block_symbol: "T3",
        d: 2,
        form: EquationForm::Factored,
        recipe: LagrangianRecipe::Sequence,
        tree_size: (2, 1),
        map_source: MapSource::BlocksOf { scheme: 7, shift: Shift::MinusZOverZ },
        adjustments: &[
            "maps = (B7(z) - z) / z, sizes counted as vertices - 3",
            "blocks = T3 in the same size unit, T3 = z + z^3 + ...",
            "tree node of degree 2k carries a sequence of blocks of total size k",
        ],
    },
];

pub fn load_scheme(id: u8) -> Result<&'static SchemeSpec> {
    REGISTRY.iter().find(|s| s.id == id).ok_or(Error::UnknownScheme(id))
}

pub fn all_schemes() -> &'static [SchemeSpec] {
    &REGISTRY
}
