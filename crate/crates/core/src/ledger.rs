//! Per-matroid, per-stage accounting of independence queries.
//!
//! Every oracle call increments exactly one counter. Counters are atomic so
//! an oracle can be shared between threads; they never decrease.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

/// Which algorithm stage issued a query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Greedy,
    BfsLayering,
    ClassicAugment,
    CategorizeRand,
    CategorizeDet,
    LightEdges,
    ReverseBfs,
    PathClosure,
    Postprocess,
    Other,
}

impl Stage {
    pub const ALL: [Stage; 10] = [
        Stage::Greedy,
        Stage::BfsLayering,
        Stage::ClassicAugment,
        Stage::CategorizeRand,
        Stage::CategorizeDet,
        Stage::LightEdges,
        Stage::ReverseBfs,
        Stage::PathClosure,
        Stage::Postprocess,
        Stage::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Greedy => "greedy",
            Stage::BfsLayering => "bfs_layering",
            Stage::ClassicAugment => "classic_augment",
            Stage::CategorizeRand => "categorize_rand",
            Stage::CategorizeDet => "categorize_det",
            Stage::LightEdges => "light_edges",
            Stage::ReverseBfs => "reverse_bfs",
            Stage::PathClosure => "path_closure",
            Stage::Postprocess => "postprocess",
            Stage::Other => "other",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The two matroids of an intersection instance. Hidden graphs reuse the
/// same split: in-neighbour probes count as `First`, out-neighbour probes
/// as `Second`, mirroring which matroid the exchange graph would ask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatroidId {
    First,
    Second,
}

impl MatroidId {
    fn index(self) -> usize {
        match self {
            MatroidId::First => 0,
            MatroidId::Second => 1,
        }
    }
}

const STAGES: usize = Stage::ALL.len();

#[derive(Debug, Default)]
pub struct QueryLedger {
    counts: [[AtomicU64; STAGES]; 2],
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&self, matroid: MatroidId, stage: Stage) {
        self.counts[matroid.index()][stage.index()].fetch_add(1, Ordering::Relaxed);
    }

    pub fn count(&self, matroid: MatroidId, stage: Stage) -> u64 {
        self.counts[matroid.index()][stage.index()].load(Ordering::Relaxed)
    }

    pub fn stage_total(&self, stage: Stage) -> u64 {
        self.count(MatroidId::First, stage) + self.count(MatroidId::Second, stage)
    }

    pub fn total(&self) -> u64 {
        Stage::ALL.iter().map(|&s| self.stage_total(s)).sum()
    }

    pub fn snapshot(&self) -> LedgerSnapshot {
        let mut counts = [[0u64; STAGES]; 2];
        for (m, row) in counts.iter_mut().enumerate() {
            for (s, c) in row.iter_mut().enumerate() {
                *c = self.counts[m][s].load(Ordering::Relaxed);
            }
        }
        LedgerSnapshot { counts }
    }
}

/// A frozen copy of a ledger. Subtracting two snapshots gives the queries
/// issued in between.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LedgerSnapshot {
    counts: [[u64; STAGES]; 2],
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCount {
    pub m1: u64,
    pub m2: u64,
}

impl StageCount {
    pub fn total(&self) -> u64 {
        self.m1 + self.m2
    }
}

impl LedgerSnapshot {
    pub fn count(&self, matroid: MatroidId, stage: Stage) -> u64 {
        self.counts[matroid.index()][stage.index()]
    }

    pub fn stage_total(&self, stage: Stage) -> u64 {
        self.counts[0][stage.index()] + self.counts[1][stage.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn since(&self, earlier: &LedgerSnapshot) -> LedgerSnapshot {
        let mut counts = self.counts;
        for (m, row) in counts.iter_mut().enumerate() {
            for (s, c) in row.iter_mut().enumerate() {
                *c -= earlier.counts[m][s];
            }
        }
        LedgerSnapshot { counts }
    }

    /// Stage name → per-matroid counts, stages with zero queries included.
    pub fn by_stage(&self) -> BTreeMap<String, StageCount> {
        Stage::ALL
            .iter()
            .map(|&s| {
                (
                    s.as_str().to_string(),
                    StageCount {
                        m1: self.count(MatroidId::First, s),
                        m2: self.count(MatroidId::Second, s),
                    },
                )
            })
            .collect()
    }
}
