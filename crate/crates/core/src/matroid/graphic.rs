use std::sync::Arc;

use super::{Materialized, Matroid, MatroidKind, PreparedBase};
use crate::error::{Error, Result};
use crate::ElementId;

/// Disjoint-set forest with union by size and path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already connected.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Cycle matroid of a multigraph: element `i` is edge `edges[i]`, and a set
/// of edges is independent when it is a forest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphicMatroid {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphicMatroid {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= vertices || b >= vertices) {
            return Err(Error::InvalidInstance(format!(
                "edge ({a}, {b}) references a vertex outside 0..{vertices}"
            )));
        }
        Ok(Self { vertices, edges })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Rank = vertices − number of connected components.
    pub fn rank(&self) -> usize {
        let mut uf = UnionFind::new(self.vertices);
        self.edges.iter().filter(|&&(a, b)| uf.union(a, b)).count()
    }
}

impl Matroid for GraphicMatroid {
    fn ground_size(&self) -> usize {
        self.edges.len()
    }

    fn kind(&self) -> MatroidKind {
        MatroidKind::Graphic
    }

    fn is_independent(&self, set: &[ElementId]) -> bool {
        let mut uf = UnionFind::new(self.vertices);
        set.iter().all(|&e| {
            let (a, b) = self.edges[e];
            uf.union(a, b)
        })
    }

    fn prepare(self: Arc<Self>, base: &[ElementId]) -> Box<dyn PreparedBase> {
        let mut uf = UnionFind::new(self.vertices);
        let forest = base.iter().all(|&e| {
            let (a, b) = self.edges[e];
            uf.union(a, b)
        });
        let root = (0..self.vertices).map(|v| uf.find(v)).collect();
        Box::new(PreparedGraphic {
            root,
            forest,
            fallback: Materialized::new(self, base),
        })
    }
}

struct PreparedGraphic {
    root: Vec<usize>,
    forest: bool,
    fallback: Materialized<GraphicMatroid>,
}

impl PreparedBase for PreparedGraphic {
    fn is_independent_after(&self, removed: &[ElementId], added: &[ElementId]) -> bool {
        match (removed, added) {
            (_, _) if !self.forest && removed.is_empty() => false,
            ([], [a]) => {
                let (x, y) = self.fallback_edges()[*a];
                self.root[x] != self.root[y]
            }
            _ => self.fallback.is_independent_after(removed, added),
        }
    }
}

impl PreparedGraphic {
    fn fallback_edges(&self) -> &[(usize, usize)] {
        self.fallback.matroid.edges()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> GraphicMatroid {
        GraphicMatroid::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn triangle_is_dependent() {
        let m = triangle();
        assert!(m.is_independent(&[0, 1]));
        assert!(!m.is_independent(&[0, 1, 2]));
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn self_loop_and_parallel_edges() {
        let m = GraphicMatroid::new(2, vec![(0, 0), (0, 1), (1, 0)]).unwrap();
        assert!(!m.is_independent(&[0]));
        assert!(m.is_independent(&[1]));
        assert!(!m.is_independent(&[1, 2]));
    }

    #[test]
    fn rejects_bad_vertex() {
        assert!(GraphicMatroid::new(2, vec![(0, 2)]).is_err());
    }

    #[test]
    fn prepared_single_edge_uses_forest_roots() {
        let m = Arc::new(GraphicMatroid::new(4, vec![(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap());
        let p = m.clone().prepare(&[0, 1]);
        assert!(!p.is_independent_after(&[], &[2]));
        assert!(p.is_independent_after(&[], &[3]));
        assert!(p.is_independent_after(&[0], &[2]));
        let dependent_base = m.clone().prepare(&[0, 1, 2]);
        assert!(!dependent_base.is_independent_after(&[], &[3]));
        assert!(dependent_base.is_independent_after(&[2], &[3]));
    }
}
