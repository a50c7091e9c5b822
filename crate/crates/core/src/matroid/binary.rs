use std::sync::Arc;

use super::{Materialized, Matroid, MatroidKind, PreparedBase};
use crate::error::{Error, Result};
use crate::ElementId;

/// A vector over GF(2) of fixed dimension, packed into 64-bit words.
/// Bit `i` of the vector is bit `i % 64` of word `i / 64`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitColumn {
    dim: usize,
    words: Vec<u64>,
}

impl BitColumn {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            words: vec![0; dim.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut c = Self::zero(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                c.set(i);
            }
        }
        c
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        assert!(i < self.dim, "bit {i} outside dimension {}", self.dim);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn xor_assign(&mut self, other: &BitColumn) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    fn highest_bit(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    /// Big-endian hex with exactly `ceil(dim / 4)` digits; bit 0 is the
    /// lowest bit of the last digit.
    pub fn to_hex(&self) -> String {
        let digits = self.dim.div_ceil(4);
        (0..digits)
            .rev()
            .map(|d| {
                let nibble = (0..4)
                    .filter(|&j| d * 4 + j < self.dim && self.get(d * 4 + j))
                    .fold(0u32, |acc, j| acc | 1 << j);
                char::from_digit(nibble, 16).unwrap()
            })
            .collect()
    }

    pub fn from_hex(s: &str, dim: usize) -> Result<Self> {
        let digits = dim.div_ceil(4);
        if s.len() != digits {
            return Err(Error::InvalidInstance(format!(
                "column `{s}` has {} hex digits, dimension {dim} needs {digits}",
                s.len()
            )));
        }
        let mut c = Self::zero(dim);
        for (pos, ch) in s.chars().enumerate() {
            let nibble = ch.to_digit(16).ok_or_else(|| {
                Error::InvalidInstance(format!("column `{s}` is not hexadecimal"))
            })?;
            let d = digits - 1 - pos;
            for j in 0..4 {
                if nibble >> j & 1 == 1 {
                    let bit = d * 4 + j;
                    if bit >= dim {
                        return Err(Error::InvalidInstance(format!(
                            "column `{s}` sets bit {bit} beyond dimension {dim}"
                        )));
                    }
                    c.set(bit);
                }
            }
        }
        Ok(c)
    }
}

/// Column matroid of a GF(2) matrix: elements are columns, independence is
/// linear independence over GF(2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryLinearMatroid {
    dim: usize,
    columns: Vec<BitColumn>,
}

impl BinaryLinearMatroid {
    pub fn new(dim: usize, columns: Vec<BitColumn>) -> Result<Self> {
        if let Some((i, c)) = columns.iter().enumerate().find(|(_, c)| c.dim() != dim) {
            return Err(Error::InvalidInstance(format!(
                "column {i} has dimension {}, expected {dim}",
                c.dim()
            )));
        }
        Ok(Self { dim, columns })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn columns(&self) -> &[BitColumn] {
        &self.columns
    }

    pub fn rank(&self) -> usize {
        let all: Vec<_> = (0..self.columns.len()).collect();
        self.rank_of(&all)
    }

    fn rank_of(&self, set: &[ElementId]) -> usize {
        let mut basis = XorBasis::new(self.dim);
        set.iter()
            .filter(|&&e| basis.insert(&self.columns[e]))
            .count()
    }
}

/// Row-echelon basis keyed by leading bit.
struct XorBasis {
    rows: Vec<Option<BitColumn>>,
}

impl XorBasis {
    fn new(dim: usize) -> Self {
        Self {
            rows: vec![None; dim],
        }
    }

    /// Returns false when `col` is already in the span.
    fn insert(&mut self, col: &BitColumn) -> bool {
        let mut v = col.clone();
        while let Some(top) = v.highest_bit() {
            match &self.rows[top] {
                Some(row) => v.xor_assign(row),
                None => {
                    self.rows[top] = Some(v);
                    return true;
                }
            }
        }
        false
    }
}

impl Matroid for BinaryLinearMatroid {
    fn ground_size(&self) -> usize {
        self.columns.len()
    }

    fn kind(&self) -> MatroidKind {
        MatroidKind::BinaryLinear
    }

    fn is_independent(&self, set: &[ElementId]) -> bool {
        if set.len() > self.dim {
            return false;
        }
        let mut basis = XorBasis::new(self.dim);
        set.iter().all(|&e| basis.insert(&self.columns[e]))
    }

    fn prepare(self: Arc<Self>, base: &[ElementId]) -> Box<dyn PreparedBase> {
        Box::new(Materialized::new(self, base))
    }
}
