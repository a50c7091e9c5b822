use std::sync::Arc;

use super::{Matroid, MatroidKind, PreparedBase};
use crate::ElementId;

/// U(k, n): every set of at most `k` elements is independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformMatroid {
    n: usize,
    k: usize,
}

impl UniformMatroid {
    pub fn new(n: usize, k: usize) -> Self {
        Self { n, k }
    }

    pub fn rank(&self) -> usize {
        self.k.min(self.n)
    }
}

impl Matroid for UniformMatroid {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn kind(&self) -> MatroidKind {
        MatroidKind::Uniform
    }

    fn is_independent(&self, set: &[ElementId]) -> bool {
        set.len() <= self.k
    }

    fn prepare(self: Arc<Self>, base: &[ElementId]) -> Box<dyn PreparedBase> {
        Box::new(PreparedUniform {
            base_len: base.len(),
            k: self.k,
        })
    }
}

struct PreparedUniform {
    base_len: usize,
    k: usize,
}

impl PreparedBase for PreparedUniform {
    fn is_independent_after(&self, removed: &[ElementId], added: &[ElementId]) -> bool {
        self.base_len - removed.len() + added.len() <= self.k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinality_bound() {
        let m = UniformMatroid::new(4, 2);
        assert!(m.is_independent(&[]));
        assert!(m.is_independent(&[0, 1]));
        assert!(!m.is_independent(&[0, 1, 3]));
    }

    #[test]
    fn prepared_matches_direct() {
        let m = Arc::new(UniformMatroid::new(6, 3));
        let p = m.clone().prepare(&[0, 1, 2]);
        assert!(!p.is_independent_after(&[], &[4]));
        assert!(p.is_independent_after(&[1], &[4]));
        assert!(p.is_independent_after(&[0, 1], &[4, 5]));
    }
}
