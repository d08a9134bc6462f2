use std::fmt;
use std::str::FromStr;

use super::graph::{every_triangle_is_face, Multigraph};
use super::DartMap;
use crate::error::Error;

/// Map families known to the enumerator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    All,
    Loopless,
    Simple,
    TwoConnected,
    /// 2-connected maps other than the single loop.
    TwoConnectedLoopless,
    TwoConnectedSimple,
    Bipartite,
    BipartiteSimple,
    BipartiteTwoConnected,
    BipartiteTwoConnectedSimple,
    LooplessTriangulation,
    SimpleTriangulation,
    IrreducibleTriangulation,
}

impl Family {
    pub const ALL: [Family; 13] = [
        Family::All,
        Family::Loopless,
        Family::Simple,
        Family::TwoConnected,
        Family::TwoConnectedLoopless,
        Family::TwoConnectedSimple,
        Family::Bipartite,
        Family::BipartiteSimple,
        Family::BipartiteTwoConnected,
        Family::BipartiteTwoConnectedSimple,
        Family::LooplessTriangulation,
        Family::SimpleTriangulation,
        Family::IrreducibleTriangulation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::All => "all",
            Family::Loopless => "loopless",
            Family::Simple => "simple",
            Family::TwoConnected => "two-connected",
            Family::TwoConnectedLoopless => "two-connected-loopless",
            Family::TwoConnectedSimple => "two-connected-simple",
            Family::Bipartite => "bipartite",
            Family::BipartiteSimple => "bipartite-simple",
            Family::BipartiteTwoConnected => "bipartite-two-connected",
            Family::BipartiteTwoConnectedSimple => "bipartite-two-connected-simple",
            Family::LooplessTriangulation => "loopless-triangulation",
            Family::SimpleTriangulation => "simple-triangulation",
            Family::IrreducibleTriangulation => "irreducible-triangulation",
        }
    }

    pub fn is_triangulation(self) -> bool {
        matches!(
            self,
            Family::LooplessTriangulation | Family::SimpleTriangulation | Family::IrreducibleTriangulation
        )
    }

    /// Number of darts of a member of size `n`.
    ///
    /// Triangulations are sized by vertices: a loopless triangulation of size
    /// `n` has `n + 2` vertices and `3n` edges, a simple or irreducible one has
    /// `n + 3` vertices and `3n + 3` edges. Returns `None` for sizes with no
    /// members under that convention.
    pub fn dart_count(self, n: usize) -> Option<usize> {
        match self {
            Family::LooplessTriangulation if n == 0 => None,
            Family::LooplessTriangulation => Some(6 * n),
            Family::SimpleTriangulation | Family::IrreducibleTriangulation => Some(6 * n + 6),
            _ => Some(2 * n),
        }
    }

    /// Membership test. Triangulation predicates expect the triangulation
    /// itself; the enumerator builds them as duals of cubic maps.
    pub fn contains(self, map: &DartMap) -> bool {
        let g = Multigraph::of(map);
        let two_connected = || map.n_edges() >= 1 && g.block_count() == 1;
        match self {
            Family::All => true,
            Family::Loopless => !g.has_loop(),
            Family::Simple => g.is_simple(),
            Family::TwoConnected => two_connected(),
            Family::TwoConnectedLoopless => !g.has_loop() && two_connected(),
            Family::TwoConnectedSimple => g.is_simple() && two_connected(),
            Family::Bipartite => g.is_bipartite(),
            Family::BipartiteSimple => g.is_bipartite() && g.is_simple(),
            Family::BipartiteTwoConnected => g.is_bipartite() && two_connected(),
            Family::BipartiteTwoConnectedSimple => g.is_bipartite() && g.is_simple() && two_connected(),
            Family::LooplessTriangulation => is_triangulation(map) && !g.has_loop(),
            Family::SimpleTriangulation => is_triangulation(map) && g.is_simple(),
            Family::IrreducibleTriangulation => is_triangulation(map) && g.is_simple() && every_triangle_is_face(map),
        }
    }
}

fn is_triangulation(map: &DartMap) -> bool {
    let (face, n_faces) = map.faces();
    let mut degree = vec![0usize; n_faces];
    for f in face {
        degree[f] += 1;
    }
    map.n_darts() > 0 && degree.iter().all(|&d| d == 3)
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}
