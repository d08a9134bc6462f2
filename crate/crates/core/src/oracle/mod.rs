//! Brute-force enumeration of small rooted planar maps.
//!
//! Maps are generated directly in canonical form: darts are processed in
//! label order, and for each dart the generator chooses its `alpha` partner
//! and then its `sigma` image among the already labelled darts that are still
//! free, or gives it the next unused label. Every rooted map arises from
//! exactly one sequence of choices, so no isomorphism test is needed.
//! Triangulations are produced as duals of cubic maps.

mod dartmap;
mod family;
mod graph;

use std::collections::BTreeMap;

use rayon::prelude::*;

pub use dartmap::DartMap;
pub use family::Family;
pub use graph::Multigraph;

use crate::error::{Error, Result};

/// Largest edge count accepted for ordinary families.
pub const EDGE_CAP: usize = 5;
/// Largest size accepted for triangulation families.
pub const TRIANGULATION_CAP: usize = 4;
/// Largest size accepted by [`bivariate_census`].
pub const CENSUS_CAP: usize = 4;

const UNSET: usize = usize::MAX;

#[derive(Clone)]
struct Partial {
    n: usize,
    alpha: Vec<usize>,
    sigma: Vec<usize>,
    sigma_inv: Vec<usize>,
    labeled: usize,
    next: usize,
    cubic: bool,
}

impl Partial {
    fn new(n: usize, cubic: bool) -> Self {
        Partial {
            n,
            alpha: vec![UNSET; n],
            sigma: vec![UNSET; n],
            sigma_inv: vec![UNSET; n],
            labeled: 1,
            next: 0,
            cubic,
        }
    }

    fn is_complete(&self) -> bool {
        self.next == self.n && self.labeled == self.n
    }

    fn to_map(&self) -> DartMap {
        DartMap {
            sigma: self.sigma.clone(),
            alpha: self.alpha.clone(),
        }
    }

    /// Length of the open `sigma` chain ending at `d`, and its first dart.
    fn chain_back(&self, d: usize) -> (usize, usize) {
        let (mut len, mut start) = (1, d);
        while self.sigma_inv[start] != UNSET {
            start = self.sigma_inv[start];
            len += 1;
        }
        (len, start)
    }

    fn chain_forward(&self, e: usize) -> usize {
        let (mut len, mut end) = (1, e);
        while self.sigma[end] != UNSET {
            end = self.sigma[end];
            len += 1;
        }
        len
    }

    fn sigma_allowed(&self, d: usize, e: Option<usize>) -> bool {
        if !self.cubic {
            return true;
        }
        let (back, start) = self.chain_back(d);
        match e {
            None => back < 3,
            Some(e) if e == start => back == 3,
            Some(e) => back + self.chain_forward(e) <= 3,
        }
    }
}

/// Walks the generation tree, calling `visit` on complete maps and on
/// partial states whose next dart to process equals `frontier`.
fn walk(p: &mut Partial, frontier: usize, visit: &mut dyn FnMut(&Partial)) {
    if p.next == p.labeled {
        if p.labeled == p.n {
            visit(p);
        }
        return;
    }
    if p.next == frontier {
        visit(p);
        return;
    }
    let d = p.next;
    if p.alpha[d] != UNSET {
        sigma_step(p, d, frontier, visit);
        return;
    }
    for e in d + 1..p.labeled {
        if p.alpha[e] == UNSET {
            p.alpha[d] = e;
            p.alpha[e] = d;
            sigma_step(p, d, frontier, visit);
            p.alpha[e] = UNSET;
        }
    }
    if p.labeled < p.n {
        let e = p.labeled;
        p.labeled += 1;
        p.alpha[d] = e;
        p.alpha[e] = d;
        sigma_step(p, d, frontier, visit);
        p.alpha[e] = UNSET;
        p.labeled -= 1;
    }
    p.alpha[d] = UNSET;
}

fn sigma_step(p: &mut Partial, d: usize, frontier: usize, visit: &mut dyn FnMut(&Partial)) {
    for e in 0..p.labeled {
        if p.sigma_inv[e] == UNSET && p.sigma_allowed(d, Some(e)) {
            p.sigma[d] = e;
            p.sigma_inv[e] = d;
            p.next += 1;
            walk(p, frontier, visit);
            p.next -= 1;
            p.sigma_inv[e] = UNSET;
        }
    }
    if p.labeled < p.n && p.sigma_allowed(d, None) {
        let e = p.labeled;
        p.labeled += 1;
        p.sigma[d] = e;
        p.sigma_inv[e] = d;
        p.next += 1;
        walk(p, frontier, visit);
        p.next -= 1;
        p.sigma_inv[e] = UNSET;
        p.labeled -= 1;
    }
    p.sigma[d] = UNSET;
}

/// Folds over every rooted planar map with `n_darts` darts (every vertex of
/// degree 3 when `cubic`), in parallel over generation prefixes.
fn fold_planar<A, I, L, M>(n_darts: usize, cubic: bool, init: I, leaf: L, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    L: Fn(&mut A, &DartMap) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    if n_darts == 0 {
        let mut acc = init();
        leaf(&mut acc, &DartMap::vertex());
        return acc;
    }
    let mut prefixes = Vec::new();
    let mut root = Partial::new(n_darts, cubic);
    walk(&mut root, 3.min(n_darts), &mut |p| prefixes.push(p.clone()));
    prefixes
        .into_par_iter()
        .map(|mut p| {
            let mut acc = init();
            if p.is_complete() {
                let map = p.to_map();
                if map.is_planar() {
                    leaf(&mut acc, &map);
                }
            } else {
                walk(&mut p, UNSET, &mut |q| {
                    let map = q.to_map();
                    if map.is_planar() {
                        leaf(&mut acc, &map);
                    }
                });
            }
            acc
        })
        .reduce(&init, &merge)
}

fn check_cap(family: Family, n: usize, edge_cap: usize) -> Result<()> {
    let cap = if family.is_triangulation() {
        TRIANGULATION_CAP
    } else {
        edge_cap
    };
    if n > cap {
        return Err(Error::OracleCap { requested: n, cap });
    }
    Ok(())
}

/// Calls `f` on every rooted planar map of the family with the given size.
pub fn for_each_map<F>(n: usize, family: Family, f: F) -> Result<()>
where
    F: Fn(&DartMap) + Sync + Send,
{
    check_cap(family, n, EDGE_CAP)?;
    let Some(darts) = family.dart_count(n) else {
        return Ok(());
    };
    let tri = family.is_triangulation();
    fold_planar(
        darts,
        tri,
        || (),
        |_, m| {
            let m = if tri { m.dual() } else { m.clone() };
            if family.contains(&m) {
                f(&m);
            }
        },
        |_, _| (),
    );
    Ok(())
}

/// Number of rooted planar maps of size `n` in the family, with the default
/// caps.
pub fn enumerate_rooted_maps(n: usize, family: Family) -> Result<u64> {
    enumerate_rooted_maps_capped(n, family, EDGE_CAP)
}

/// As [`enumerate_rooted_maps`] with an explicit edge cap for ordinary
/// families (triangulations keep their own cap).
pub fn enumerate_rooted_maps_capped(n: usize, family: Family, edge_cap: usize) -> Result<u64> {
    check_cap(family, n, edge_cap)?;
    let Some(darts) = family.dart_count(n) else {
        return Ok(0);
    };
    let tri = family.is_triangulation();
    Ok(fold_planar(
        darts,
        tri,
        || 0u64,
        |acc, m| {
            let member = if tri {
                family.contains(&m.dual())
            } else {
                family.contains(m)
            };
            if member {
                *acc += 1;
            }
        },
        |a, b| a + b,
    ))
}

/// Counts for sizes `1..=max`, index 0 holding size 1.
pub fn census(family: Family, max: usize) -> Result<Vec<u64>> {
    (1..=max).map(|n| enumerate_rooted_maps(n, family)).collect()
}

/// Number of blocks of positive size in the decomposition of a map into
/// maximal 2-connected submaps.
pub fn count_blocks_2conn(map: &DartMap) -> usize {
    Multigraph::of(map).block_count()
}

/// Rooted planar maps counted by edges and blocks, for every size up to
/// `n_max`.
pub fn bivariate_census(n_max: usize) -> Result<BTreeMap<(usize, usize), u64>> {
    if n_max > CENSUS_CAP {
        return Err(Error::OracleCap {
            requested: n_max,
            cap: CENSUS_CAP,
        });
    }
    let mut table = BTreeMap::new();
    for n in 0..=n_max {
        let rows = fold_planar(
            2 * n,
            false,
            BTreeMap::<usize, u64>::new,
            |acc, m| *acc.entry(count_blocks_2conn(m)).or_default() += 1,
            |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_default() += v;
                }
                a
            },
        );
        for (k, v) in rows {
            table.insert((n, k), v);
        }
    }
    Ok(table)
}
