//! End-to-end solver: a half-optimal start, distance-bounded shortest
//! augmenting paths, then phase-based augmentation until no path remains.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::classic::{bfs_layering, cunningham_until};
use crate::error::{Error, Result};
use crate::exchange::ExchangeGraph;
use crate::ledger::{Stage, StageCount};
use crate::matroid::IndependenceOracle;
use crate::reachability::{
    augmentation, default_s_reps, select_h, AuditOptions, AugmentStats, CategorizerConfig, Mode,
};
use crate::reference::greedy_maximal_common;
use crate::rng::split;
use crate::ElementId;

/// Where the starting common independent set comes from.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Bootstrap {
    /// Greedy maximal common independent set.
    #[default]
    Greedy,
    /// A caller-supplied set, expected to be at least half-optimal. It is
    /// checked with two queries and rejected if not common independent.
    External(Vec<ElementId>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineConfig {
    pub mode: Mode,
    pub d_override: Option<usize>,
    pub h_override: Option<usize>,
    /// Stop after the distance-bounded stage with this `d`.
    pub approx_only_d: Option<usize>,
    pub rng_seed: u64,
    pub bootstrap: Bootstrap,
    pub audit: AuditOptions,
    pub instance_id: String,
}

impl PipelineConfig {
    pub fn new(mode: Mode, rng_seed: u64) -> Self {
        Self {
            mode,
            d_override: None,
            h_override: None,
            approx_only_d: None,
            rng_seed,
            bootstrap: Bootstrap::Greedy,
            audit: AuditOptions::default(),
            instance_id: String::new(),
        }
    }
}

/// Half-approximation of the optimum: the size of a greedy maximal common
/// independent set. `r̄ ≤ r ≤ 2r̄`.
pub fn estimate_r(o1: &IndependenceOracle, o2: &IndependenceOracle) -> Result<usize> {
    Ok(greedy_maximal_common(o1, o2)?.len())
}

/// Distance bound for the shortest-path stage.
///
/// With `T` the cost of one augmentation call (`n√r̄ ln n` sampling,
/// `n r̄^{2/3} ln r̄` deterministic), `d = ⌈√(r̄T / (n ln r̄))⌉` clamped to
/// `[1, 2r̄ + 2]`. `ln r̄` is floored at 1, and `r̄ ≤ 1` gives `d = 1`.
pub fn select_d(r_bar: usize, n: usize, mode: Mode) -> usize {
    if r_bar <= 1 {
        return 1;
    }
    let r = r_bar as f64;
    let nf = n.max(2) as f64;
    let ln_r = r.ln().max(1.0);
    let t = match mode {
        Mode::Randomized => nf * r.sqrt() * nf.ln(),
        Mode::Deterministic => nf * r.powf(2.0 / 3.0) * ln_r,
    };
    let d = (r * t / (nf * ln_r)).sqrt().ceil() as usize;
    d.clamp(1, 2 * r_bar + 2)
}

/// `n^{1/5} r^{-2/5} ln^{-1/5} r`, the accuracy an external approximation
/// would be asked for. Reported for context only.
fn epsilon(n: usize, r_bar: usize) -> f64 {
    if r_bar == 0 {
        return 0.0;
    }
    let r = r_bar as f64;
    (n as f64).powf(0.2) * r.powf(-0.4) * r.ln().max(1.0).powf(-0.2)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub instance_id: String,
    pub mode: Mode,
    pub seed: u64,
    pub n: usize,
    pub r_bar: usize,
    pub d: usize,
    pub h: usize,
    pub stage_ledgers: BTreeMap<String, StageCount>,
    pub total_queries: u64,
    pub answer_size: usize,
    pub phases: usize,
    pub misclassification_events: usize,
    pub wall_time_ms: f64,
    pub epsilon: f64,
    pub approx_only: bool,
    pub stage2_augmentations: usize,
    pub stage3_augmentations: usize,
    /// `s → t` distances seen by the shortest-path stage.
    pub stage2_distances: Vec<usize>,
    pub max_reverse_bfs_queries: u64,
}

impl SolveReport {
    /// The report with wall time zeroed, for run-to-run comparisons.
    pub fn without_timing(&self) -> SolveReport {
        SolveReport {
            wall_time_ms: 0.0,
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveOutput {
    pub set: Vec<ElementId>,
    pub report: SolveReport,
    pub augment_stats: AugmentStats,
}

/// Maximum common independent set.
pub fn solve(
    o1: &IndependenceOracle,
    o2: &IndependenceOracle,
    cfg: &PipelineConfig,
) -> Result<SolveOutput> {
    run(o1, o2, cfg)
}

/// Stages one and two only: a set within `O(r/d)` of the optimum.
pub fn solve_approx(
    o1: &IndependenceOracle,
    o2: &IndependenceOracle,
    d: usize,
    cfg: &PipelineConfig,
) -> Result<SolveOutput> {
    if d == 0 {
        return Err(Error::contract("approximation distance must be at least 1"));
    }
    let cfg = PipelineConfig {
        approx_only_d: Some(d),
        ..cfg.clone()
    };
    run(o1, o2, &cfg)
}

fn run(
    o1: &IndependenceOracle,
    o2: &IndependenceOracle,
    cfg: &PipelineConfig,
) -> Result<SolveOutput> {
    for (name, v) in [
        ("d", cfg.d_override),
        ("h", cfg.h_override),
        ("approximation d", cfg.approx_only_d),
    ] {
        if v == Some(0) {
            return Err(Error::contract(format!(
                "{name} override must be at least 1"
            )));
        }
    }
    let clock = Instant::now();
    let ledger = o1.ledger().clone();
    let before = ledger.snapshot();
    let n = o1.n();

    let (mut g, r_bar) = match &cfg.bootstrap {
        Bootstrap::External(set) if !set.is_empty() => {
            let g = ExchangeGraph::checked(o1.clone(), o2.clone(), set.clone())?;
            let r_bar = set.len();
            (g, r_bar)
        }
        _ => {
            let start = greedy_maximal_common(o1, o2)?;
            let r_bar = start.len();
            (ExchangeGraph::new(o1.clone(), o2.clone(), start)?, r_bar)
        }
    };

    let d = cfg
        .approx_only_d
        .or(cfg.d_override)
        .unwrap_or_else(|| select_d(r_bar, n, cfg.mode));
    let h = cfg.h_override.unwrap_or_else(|| select_h(r_bar, cfg.mode));
    let mut report = SolveReport {
        instance_id: cfg.instance_id.clone(),
        mode: cfg.mode,
        seed: cfg.rng_seed,
        n,
        r_bar,
        d,
        h,
        stage_ledgers: BTreeMap::new(),
        total_queries: 0,
        answer_size: 0,
        phases: 0,
        misclassification_events: 0,
        wall_time_ms: 0.0,
        epsilon: epsilon(n, r_bar),
        approx_only: cfg.approx_only_d.is_some(),
        stage2_augmentations: 0,
        stage3_augmentations: 0,
        stage2_distances: Vec::new(),
        max_reverse_bfs_queries: 0,
    };
    let mut stats = AugmentStats::default();

    // A greedy set of size zero means no element is independent in both.
    if r_bar > 0 {
        let stage2 = cunningham_until(&mut g, d)?;
        report.stage2_augmentations = stage2.augmentations;
        report.stage2_distances = stage2.distances;
        if cfg.audit.invariants && !stage2.maximum {
            if let Some(dist) = bfs_layering(&g)?.st_distance() {
                if dist <= d {
                    return Err(Error::invariant(
                        "pipeline",
                        format!("stage two exited with s-t distance {dist} <= d = {d}"),
                    ));
                }
            }
        }
        if !stage2.maximum && cfg.approx_only_d.is_none() {
            let s_reps = default_s_reps(n);
            for call in 0.. {
                let cat = CategorizerConfig {
                    mode: cfg.mode,
                    h,
                    s_reps,
                    rng_seed: split(cfg.rng_seed, call).next_u64(),
                };
                let out = augmentation(&g, &cat, cfg.audit)?;
                stats.merge(&out.stats);
                match out.path {
                    Some(path) => {
                        g.apply_augmenting_path(&path)?;
                        report.stage3_augmentations += 1;
                    }
                    None => break,
                }
            }
        }
    }

    let spent = ledger.snapshot().since(&before);
    report.stage_ledgers = spent.by_stage();
    report.total_queries = spent.total();
    report.phases = stats.phases;
    report.misclassification_events = stats.misclassification_events;
    report.max_reverse_bfs_queries = stats.reverse_bfs_queries.iter().copied().max().unwrap_or(0);
    let set = g.into_base();
    report.answer_size = set.len();
    report.wall_time_ms = clock.elapsed().as_secs_f64() * 1e3;
    debug_assert_eq!(
        report
            .stage_ledgers
            .values()
            .map(StageCount::total)
            .sum::<u64>(),
        Stage::ALL
            .iter()
            .map(|&s| spent.stage_total(s))
            .sum::<u64>()
    );
    Ok(SolveOutput {
        set,
        report,
        augment_stats: stats,
    })
}
