//! Uncharged ground truth over any graph that supports [`EdgeAudit`]:
//! full edge enumeration, plain BFS and chord detection.

use std::collections::VecDeque;

use crate::neighborhood::{EdgeAudit, NeighborhoodOracle, Vertex};
use crate::ElementId;

/// Out-adjacency indexed by [`Vertex::index`], built from single-edge tests.
#[derive(Clone, Debug)]
pub struct Adjacency {
    n: usize,
    out: Vec<Vec<Vertex>>,
}

impl Adjacency {
    pub fn enumerate<G: NeighborhoodOracle + EdgeAudit + ?Sized>(g: &G) -> Self {
        let n = g.element_count();
        let mut out = vec![Vec::new(); n + 2];
        let (left, right): (Vec<ElementId>, Vec<ElementId>) = (0..n).partition(|&e| g.in_base(e));
        for &v in &right {
            let vv = Vertex::Elem(v);
            if g.has_edge(Vertex::Source, vv) {
                out[n].push(vv);
            }
            if g.has_edge(vv, Vertex::Sink) {
                out[v].push(Vertex::Sink);
            }
            for &u in &left {
                let uu = Vertex::Elem(u);
                if g.has_edge(uu, vv) {
                    out[u].push(vv);
                }
                if g.has_edge(vv, uu) {
                    out[v].push(uu);
                }
            }
        }
        Self { n, out }
    }

    pub fn out(&self, v: Vertex) -> &[Vertex] {
        &self.out[v.index(self.n)]
    }

    pub fn has_edge(&self, from: Vertex, to: Vertex) -> bool {
        self.out(from).contains(&to)
    }

    /// Shortest path from any vertex in `sources` to any vertex satisfying
    /// `goal`, as a vertex sequence.
    pub fn bfs_path(
        &self,
        sources: &[Vertex],
        goal: impl Fn(Vertex) -> bool,
    ) -> Option<Vec<Vertex>> {
        let total = self.n + 2;
        let mut parent: Vec<Option<usize>> = vec![None; total];
        let mut seen = vec![false; total];
        let mut queue = VecDeque::new();
        for &s in sources {
            let i = s.index(self.n);
            if !seen[i] {
                seen[i] = true;
                queue.push_back(i);
            }
        }
        while let Some(i) = queue.pop_front() {
            let v = Vertex::from_index(i, self.n);
            if goal(v) {
                let mut path = vec![v];
                let mut cur = i;
                while let Some(p) = parent[cur] {
                    path.push(Vertex::from_index(p, self.n));
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for &w in &self.out[i] {
                let j = w.index(self.n);
                if !seen[j] {
                    seen[j] = true;
                    parent[j] = Some(i);
                    queue.push_back(j);
                }
            }
        }
        None
    }

    /// Shortest `s → t` path.
    pub fn shortest_st_path(&self) -> Option<Vec<Vertex>> {
        self.bfs_path(&[Vertex::Source], |v| v == Vertex::Sink)
    }

    /// `s → t` distance in edges.
    pub fn st_distance(&self) -> Option<usize> {
        self.shortest_st_path().map(|p| p.len() - 1)
    }
}

/// A pair `(p[i], p[j])` with `j > i + 1` that is an edge, if any.
pub fn find_chord(adj: &Adjacency, path: &[Vertex]) -> Option<(Vertex, Vertex)> {
    for i in 0..path.len() {
        for j in i + 2..path.len() {
            if adj.has_edge(path[i], path[j]) {
                return Some((path[i], path[j]));
            }
        }
    }
    None
}

/// Whether consecutive vertices of `path` are all edges.
pub fn is_walk(adj: &Adjacency, path: &[Vertex]) -> bool {
    path.windows(2).all(|w| adj.has_edge(w[0], w[1]))
}
