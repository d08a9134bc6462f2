use rand::seq::SliceRandom;
use rand::Rng;

/// A rooted map as a pair of permutations on darts `0..2n`.
///
/// `sigma` rotates darts around their vertex, `alpha` swaps the two darts of
/// an edge, and dart `0` is the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DartMap {
    pub sigma: Vec<usize>,
    pub alpha: Vec<usize>,
}

impl DartMap {
    /// The map with one vertex and no edges.
    pub fn vertex() -> Self {
        DartMap {
            sigma: Vec::new(),
            alpha: Vec::new(),
        }
    }

    pub fn n_darts(&self) -> usize {
        self.sigma.len()
    }

    pub fn n_edges(&self) -> usize {
        self.sigma.len() / 2
    }

    /// Cycles of `sigma`, i.e. vertex labels per dart and the vertex count.
    pub fn vertices(&self) -> (Vec<usize>, usize) {
        cycle_labels(|d| self.sigma[d], self.n_darts())
    }

    /// Face labels per dart: cycles of `sigma ∘ alpha`.
    pub fn faces(&self) -> (Vec<usize>, usize) {
        cycle_labels(|d| self.sigma[self.alpha[d]], self.n_darts())
    }

    /// Euler characteristic `V - E + F`; planar maps give 2.
    pub fn euler_characteristic(&self) -> i64 {
        if self.n_darts() == 0 {
            return 2;
        }
        let v = self.vertices().1 as i64;
        let f = self.faces().1 as i64;
        v - self.n_edges() as i64 + f
    }

    pub fn is_planar(&self) -> bool {
        self.euler_characteristic() == 2
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n_darts();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(d) = stack.pop() {
            for e in [self.sigma[d], self.alpha[d]] {
                if !seen[e] {
                    seen[e] = true;
                    count += 1;
                    stack.push(e);
                }
            }
        }
        count == n
    }

    /// Dual map: vertices become faces, same edges and root.
    pub fn dual(&self) -> DartMap {
        let sigma = (0..self.n_darts()).map(|d| self.sigma[self.alpha[d]]).collect();
        DartMap {
            sigma,
            alpha: self.alpha.clone(),
        }
    }

    /// Relabels darts in the canonical order: darts are visited in label
    /// order starting from the root, and the unlabelled images under `alpha`
    /// then `sigma` receive the next free labels.
    pub fn canonical(&self) -> DartMap {
        let n = self.n_darts();
        if n == 0 {
            return DartMap::vertex();
        }
        let mut label = vec![usize::MAX; n];
        let mut order = vec![0];
        label[0] = 0;
        let mut i = 0;
        while i < order.len() {
            let d = order[i];
            for e in [self.alpha[d], self.sigma[d]] {
                if label[e] == usize::MAX {
                    label[e] = order.len();
                    order.push(e);
                }
            }
            i += 1;
        }
        let mut sigma = vec![0; n];
        let mut alpha = vec![0; n];
        for d in 0..n {
            sigma[label[d]] = label[self.sigma[d]];
            alpha[label[d]] = label[self.alpha[d]];
        }
        DartMap { sigma, alpha }
    }

    /// Random relabelling that keeps the root at `0`.
    pub fn relabel_random<R: Rng + ?Sized>(&self, rng: &mut R) -> DartMap {
        let n = self.n_darts();
        if n == 0 {
            return self.clone();
        }
        let mut perm: Vec<usize> = (1..n).collect();
        perm.shuffle(rng);
        perm.insert(0, 0);
        let mut sigma = vec![0; n];
        let mut alpha = vec![0; n];
        for d in 0..n {
            sigma[perm[d]] = perm[self.sigma[d]];
            alpha[perm[d]] = perm[self.alpha[d]];
        }
        DartMap { sigma, alpha }
    }
}

fn cycle_labels(next: impl Fn(usize) -> usize, n: usize) -> (Vec<usize>, usize) {
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let mut d = start;
        while label[d] == usize::MAX {
            label[d] = count;
            d = next(d);
        }
        count += 1;
    }
    (label, count)
}
