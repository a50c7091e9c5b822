use std::sync::Arc;

use super::{Matroid, MatroidKind, PreparedBase};
use crate::error::{Error, Result};
use crate::ElementId;

/// Ground set split into disjoint blocks; a set is independent when it
/// takes at most `caps[b]` elements from each block `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionMatroid {
    block_of: Arc<[u32]>,
    caps: Arc<[u32]>,
}

impl PartitionMatroid {
    /// `blocks` must cover `0..n` disjointly; `caps` has one entry per block.
    pub fn new(n: usize, blocks: &[Vec<ElementId>], caps: &[usize]) -> Result<Self> {
        if blocks.len() != caps.len() {
            return Err(Error::InvalidInstance(format!(
                "partition has {} blocks but {} caps",
                blocks.len(),
                caps.len()
            )));
        }
        let mut block_of = vec![u32::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &e in block {
                if e >= n {
                    return Err(Error::ElementOutOfRange { element: e, n });
                }
                if block_of[e] != u32::MAX {
                    return Err(Error::InvalidInstance(format!(
                        "element {e} appears in more than one partition block"
                    )));
                }
                block_of[e] = b as u32;
            }
        }
        if let Some(e) = block_of.iter().position(|&b| b == u32::MAX) {
            return Err(Error::InvalidInstance(format!(
                "element {e} is not covered by any partition block"
            )));
        }
        Ok(Self {
            block_of: block_of.into(),
            caps: caps.iter().map(|&c| c as u32).collect(),
        })
    }

    /// Build from a block label per element; `caps[label]` is that block's cap.
    pub fn from_labels(labels: &[usize], caps: &[usize]) -> Result<Self> {
        let mut blocks = vec![Vec::new(); caps.len()];
        for (e, &b) in labels.iter().enumerate() {
            if b >= caps.len() {
                return Err(Error::InvalidInstance(format!(
                    "element {e} labelled with block {b}, only {} caps given",
                    caps.len()
                )));
            }
            blocks[b].push(e);
        }
        Self::new(labels.len(), &blocks, caps)
    }

    pub fn blocks(&self) -> Vec<Vec<ElementId>> {
        let mut blocks = vec![Vec::new(); self.caps.len()];
        for (e, &b) in self.block_of.iter().enumerate() {
            blocks[b as usize].push(e);
        }
        blocks
    }

    pub fn caps(&self) -> Vec<usize> {
        self.caps.iter().map(|&c| c as usize).collect()
    }

    pub fn block_of(&self, e: ElementId) -> usize {
        self.block_of[e] as usize
    }

    /// Σ_b min(cap_b, |block_b|).
    pub fn rank(&self) -> usize {
        let mut sizes = vec![0usize; self.caps.len()];
        for &b in self.block_of.iter() {
            sizes[b as usize] += 1;
        }
        sizes
            .iter()
            .zip(self.caps.iter())
            .map(|(&s, &c)| s.min(c as usize))
            .sum()
    }
}

impl Matroid for PartitionMatroid {
    fn ground_size(&self) -> usize {
        self.block_of.len()
    }

    fn kind(&self) -> MatroidKind {
        MatroidKind::Partition
    }

    fn is_independent(&self, set: &[ElementId]) -> bool {
        let mut used = vec![0u32; self.caps.len()];
        for &e in set {
            let b = self.block_of[e] as usize;
            used[b] += 1;
            if used[b] > self.caps[b] {
                return false;
            }
        }
        true
    }

    fn prepare(self: Arc<Self>, base: &[ElementId]) -> Box<dyn PreparedBase> {
        let mut used = vec![0u32; self.caps.len()];
        for &e in base {
            used[self.block_of[e] as usize] += 1;
        }
        let base_ok = used.iter().zip(self.caps.iter()).all(|(u, c)| u <= c);
        Box::new(PreparedPartition {
            block_of: self.block_of.clone(),
            caps: self.caps.clone(),
            used,
            base_ok,
        })
    }
}

struct PreparedPartition {
    block_of: Arc<[u32]>,
    caps: Arc<[u32]>,
    used: Vec<u32>,
    base_ok: bool,
}

impl PreparedBase for PreparedPartition {
    fn is_independent_after(&self, removed: &[ElementId], added: &[ElementId]) -> bool {
        if let [a] = added {
            // Only the block of the single added element can overflow,
            // unless the base itself already does.
            let b = self.block_of[*a];
            if !self.base_ok {
                return self.fallback(removed, added);
            }
            let freed = removed.iter().filter(|&&r| self.block_of[r] == b).count() as u32;
            return self.used[b as usize] - freed < self.caps[b as usize];
        }
        self.fallback(removed, added)
    }
}

impl PreparedPartition {
    fn fallback(&self, removed: &[ElementId], added: &[ElementId]) -> bool {
        let mut used = self.used.clone();
        for &r in removed {
            used[self.block_of[r] as usize] -= 1;
        }
        for &a in added {
            used[self.block_of[a] as usize] += 1;
        }
        used.iter().zip(self.caps.iter()).all(|(u, c)| u <= c)
    }
}
