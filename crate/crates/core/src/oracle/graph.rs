//! Graph-level properties of a map's underlying multigraph.

use std::collections::HashSet;

use super::DartMap;

/// Underlying multigraph: one `(u, v)` pair per edge.
pub struct Multigraph {
    pub n_vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn of(map: &DartMap) -> Self {
        if map.n_darts() == 0 {
            return Multigraph {
                n_vertices: 1,
                edges: Vec::new(),
            };
        }
        let (vertex, n_vertices) = map.vertices();
        let edges = (0..map.n_darts())
            .filter(|&d| d < map.alpha[d])
            .map(|d| (vertex[d], vertex[map.alpha[d]]))
            .collect();
        Multigraph { n_vertices, edges }
    }

    pub fn has_loop(&self) -> bool {
        self.edges.iter().any(|&(a, b)| a == b)
    }

    pub fn has_multi_edge(&self) -> bool {
        let mut seen = HashSet::new();
        self.edges.iter().any(|&(a, b)| !seen.insert((a.min(b), a.max(b))))
    }

    pub fn is_simple(&self) -> bool {
        !self.has_loop() && !self.has_multi_edge()
    }

    pub fn is_bipartite(&self) -> bool {
        let adj = self.adjacency();
        let mut colour = vec![u8::MAX; self.n_vertices];
        for s in 0..self.n_vertices {
            if colour[s] != u8::MAX {
                continue;
            }
            colour[s] = 0;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &(w, _) in &adj[v] {
                    if colour[w] == u8::MAX {
                        colour[w] = 1 - colour[v];
                        stack.push(w);
                    } else if colour[w] == colour[v] {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for (id, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push((b, id));
            if a != b {
                adj[b].push((a, id));
            }
        }
        adj
    }

    /// Number of blocks of positive size: each loop is a block of its own,
    /// and the remaining edges split into biconnected components (parallel
    /// edges stay together).
    pub fn block_count(&self) -> usize {
        let loops = self.edges.iter().filter(|&&(a, b)| a == b).count();
        loops + self.biconnected_components()
    }

    fn biconnected_components(&self) -> usize {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for (id, &(a, b)) in self.edges.iter().enumerate() {
            if a != b {
                adj[a].push((b, id));
                adj[b].push((a, id));
            }
        }
        let n = self.n_vertices;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut time = 0;
        let mut components = 0;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = time;
            low[root] = time;
            time += 1;
            // (vertex, edge id used to enter it, next adjacency index)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            while let Some(top) = stack.last_mut() {
                let (v, parent_edge) = (top.0, top.1);
                if top.2 < adj[v].len() {
                    let (w, id) = adj[v][top.2];
                    top.2 += 1;
                    if id == parent_edge {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        stack.push((w, id, 0));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[v]);
                        if low[v] >= disc[p] {
                            components += 1;
                        }
                    }
                }
            }
        }
        components
    }

    /// All vertex triples that are pairwise adjacent.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let n = self.n_vertices;
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in &self.edges {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if !adj[a][b] {
                    continue;
                }
                for c in b + 1..n {
                    if adj[a][c] && adj[b][c] {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }
}

/// True when every 3-cycle of a simple triangulation bounds a face.
pub fn every_triangle_is_face(map: &DartMap) -> bool {
    let graph = Multigraph::of(map);
    let (vertex, _) = map.vertices();
    let (face, n_faces) = map.faces();
    let mut face_vertices: Vec<Vec<usize>> = vec![Vec::new(); n_faces];
    for d in 0..map.n_darts() {
        face_vertices[face[d]].push(vertex[d]);
    }
    let faces: HashSet<Vec<usize>> = face_vertices
        .into_iter()
        .map(|mut v| {
            v.sort_unstable();
            v
        })
        .collect();
    graph.triangles().iter().all(|t| faces.contains(t.as_slice()))
}
