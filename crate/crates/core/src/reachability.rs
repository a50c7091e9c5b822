//! Phase-based augmenting-path search over any [`NeighborhoodOracle`].
//!
//! Each phase labels the right vertices outside `F` heavy or light, runs a
//! reverse BFS from the heavy ones until it meets `F`, and grows `F` along
//! the path found. The search ends when `t` joins `F` or no heavy vertex is
//! reachable from `F`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exchange::{make_chordless, AugmentingPath};
use crate::ledger::Stage;
use crate::neighborhood::{in_edge, out_edge, EdgeAudit, NeighborhoodOracle, Vertex};
use crate::rng::{seeded, SolverRng};
use crate::ElementId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "rand")]
    Randomized,
    #[serde(rename = "det")]
    Deterministic,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Randomized => "rand",
            Mode::Deterministic => "det",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rand" | "randomized" => Ok(Mode::Randomized),
            "det" | "deterministic" => Ok(Mode::Deterministic),
            other => Err(Error::contract(format!(
                "unknown mode `{other}` (expected rand or det)"
            ))),
        }
    }
}

/// Smallest `h ≥ 1` with `h^k ≥ r`.
fn ceil_root(r: usize, k: u32) -> usize {
    if r <= 1 {
        return 1;
    }
    let mut h = (r as f64).powf(1.0 / k as f64).ceil() as usize;
    while h > 1 && (h - 1).checked_pow(k).is_some_and(|p| p >= r) {
        h -= 1;
    }
    while h.checked_pow(k).is_some_and(|p| p < r) {
        h += 1;
    }
    h.max(1)
}

/// Heavy threshold: `⌈√r⌉` when sampling, `⌈r^{1/3}⌉` when deterministic.
pub fn select_h(r_est: usize, mode: Mode) -> usize {
    match mode {
        Mode::Randomized => ceil_root(r_est, 2),
        Mode::Deterministic => ceil_root(r_est, 3),
    }
}

/// Default number of sampling experiments per vertex: `⌈80 ln max(n, 2)⌉`.
pub fn default_s_reps(n: usize) -> usize {
    (80.0 * (n.max(2) as f64).ln()).ceil() as usize
}

/// Sample size for one experiment: 0 when `|X| ≤ 10h`, otherwise the least
/// `k` with `(1 − 10h/|X|)^k ≤ 1/4`.
pub fn choose_k(h: usize, x_size: usize) -> usize {
    if x_size <= 10 * h {
        return 0;
    }
    let base = (x_size - 10 * h) as f64 / x_size as f64;
    let mut k = ((0.25f64).ln() / base.ln()).ceil().max(1.0) as usize;
    while base.powi(k as i32) > 0.25 {
        k += 1;
    }
    while k > 1 && base.powi(k as i32 - 1) <= 0.25 {
        k -= 1;
    }
    k
}

/// One sampling experiment: draw `k` elements of `xs` with replacement and
/// report success when `v` has no out-edge into the sample.
pub fn experiment_once<N: NeighborhoodOracle + ?Sized>(
    g: &N,
    v: ElementId,
    xs: &[ElementId],
    k: usize,
    rng: &mut SolverRng,
) -> Result<bool> {
    if k == 0 || xs.is_empty() {
        return Ok(true);
    }
    let mut sample: Vec<ElementId> = (0..k).map(|_| xs[rng.gen_range(0..xs.len())]).collect();
    sample.sort_unstable();
    sample.dedup();
    Ok(!g.exists_out_edge(v, &sample, false, Stage::CategorizeRand)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategorizerConfig {
    pub mode: Mode,
    pub h: usize,
    pub s_reps: usize,
    pub rng_seed: u64,
}

impl CategorizerConfig {
    pub fn new(mode: Mode, h: usize, n: usize, rng_seed: u64) -> Self {
        Self {
            mode,
            h,
            s_reps: default_s_reps(n),
            rng_seed,
        }
    }
}

/// Uncharged self-checks run during [`augmentation`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AuditOptions {
    /// Check the three phase invariants and the weight bound at every
    /// phase start. Costs `O(n²)` edge tests per phase.
    pub invariants: bool,
    /// Compare every label against the true out-degree after each
    /// categorization.
    pub labels: bool,
}

impl AuditOptions {
    pub fn all() -> Self {
        Self {
            invariants: true,
            labels: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Unknown,
    Heavy,
    Light,
}

/// Mutable state of one [`augmentation`] call.
#[derive(Clone, Debug)]
pub struct PhaseState {
    n: usize,
    h: usize,
    in_base: Vec<bool>,
    in_f: Vec<bool>,
    pred: Vec<Option<Vertex>>,
    labels: Vec<Label>,
    light_edges: Vec<Vec<ElementId>>,
    nv: Vec<Vec<ElementId>>,
    weight: Vec<usize>,
    by_weight: BTreeSet<(usize, ElementId)>,
    t_edge: Vec<Option<bool>>,
    sampled_heavy: Vec<bool>,
}

impl PhaseState {
    pub fn new<N: NeighborhoodOracle + ?Sized>(g: &N, h: usize) -> Self {
        let n = g.element_count();
        let in_base: Vec<bool> = (0..n).map(|e| g.in_base(e)).collect();
        let by_weight = (0..n).filter(|&e| in_base[e]).map(|e| (0, e)).collect();
        let mut state = Self {
            n,
            h,
            in_base,
            in_f: vec![false; n + 2],
            pred: vec![None; n + 2],
            labels: vec![Label::Unknown; n],
            light_edges: vec![Vec::new(); n],
            nv: vec![Vec::new(); n],
            weight: vec![0; n],
            by_weight,
            t_edge: vec![None; n],
            sampled_heavy: vec![false; n],
        };
        state.in_f[Vertex::Source.index(n)] = true;
        state
    }

    pub fn in_f(&self, v: Vertex) -> bool {
        self.in_f[v.index(self.n)]
    }

    pub fn label(&self, v: ElementId) -> Label {
        self.labels[v]
    }

    pub fn light_edges(&self, v: ElementId) -> &[ElementId] {
        &self.light_edges[v]
    }

    pub fn candidate_set(&self, v: ElementId) -> &[ElementId] {
        &self.nv[v]
    }

    pub fn weight(&self, u: ElementId) -> usize {
        self.weight[u]
    }

    pub fn weight_sum(&self) -> usize {
        self.weight.iter().sum()
    }

    /// Elements of `F`, in index order.
    pub fn found(&self) -> Vec<Vertex> {
        (0..self.n + 2)
            .filter(|&i| self.in_f[i])
            .map(|i| Vertex::from_index(i, self.n))
            .collect()
    }

    /// `S \ F_S`, ascending.
    fn open_left(&self) -> Vec<ElementId> {
        (0..self.n)
            .filter(|&e| self.in_base[e] && !self.in_f[e])
            .collect()
    }

    /// `S̄ \ F_S̄`, ascending.
    fn open_right(&self) -> Vec<ElementId> {
        (0..self.n)
            .filter(|&e| !self.in_base[e] && !self.in_f[e])
            .collect()
    }

    fn add(&mut self, v: Vertex, pred: Vertex) {
        let i = v.index(self.n);
        debug_assert!(!self.in_f[i]);
        self.in_f[i] = true;
        self.pred[i] = Some(pred);
        if let Vertex::Elem(u) = v {
            if self.in_base[u] {
                self.by_weight.remove(&(self.weight[u], u));
            }
        }
    }

    fn bump_weight(&mut self, u: ElementId) {
        self.by_weight.remove(&(self.weight[u], u));
        self.weight[u] += 1;
        self.by_weight.insert((self.weight[u], u));
    }

    /// Drop members of `F` from `N_v` and the light edge list of `v`.
    fn prune(&mut self, v: ElementId) {
        let in_f = &self.in_f;
        let weight = &mut self.weight;
        self.nv[v].retain(|&u| {
            let keep = !in_f[u];
            if !keep {
                weight[u] -= 1;
            }
            keep
        });
        self.light_edges[v].retain(|&u| !in_f[u]);
    }

    fn t_edge<N: NeighborhoodOracle + ?Sized>(
        &mut self,
        g: &N,
        v: ElementId,
        stage: Stage,
    ) -> Result<bool> {
        if let Some(known) = self.t_edge[v] {
            return Ok(known);
        }
        let found = g.exists_out_edge(v, &[], true, stage)?;
        self.t_edge[v] = Some(found);
        Ok(found)
    }

    /// Label every vertex of `S̄ \ F_S̄`. Light labels are final; heavy ones
    /// are recomputed each phase.
    pub fn categorize<N: NeighborhoodOracle + ?Sized>(
        &mut self,
        g: &N,
        cfg: &CategorizerConfig,
        rng: &mut SolverRng,
    ) -> Result<()> {
        let x = self.open_left();
        let k = choose_k(self.h, x.len());
        for v in self.open_right() {
            self.prune(v);
            if self.labels[v] == Label::Light {
                continue;
            }
            let stage = match cfg.mode {
                Mode::Randomized => Stage::CategorizeRand,
                Mode::Deterministic => Stage::CategorizeDet,
            };
            if self.t_edge(g, v, stage)? {
                self.labels[v] = Label::Heavy;
                continue;
            }
            self.labels[v] = match cfg.mode {
                Mode::Randomized => self.categorize_randomized(g, v, &x, k, cfg.s_reps, rng)?,
                Mode::Deterministic => self.categorize_deterministic(g, v)?,
            };
        }
        Ok(())
    }

    fn categorize_randomized<N: NeighborhoodOracle + ?Sized>(
        &mut self,
        g: &N,
        v: ElementId,
        x: &[ElementId],
        k: usize,
        s_reps: usize,
        rng: &mut SolverRng,
    ) -> Result<Label> {
        // Heavy iff fewer than s_reps/2 successes; stop once decided.
        let mut successes = 0;
        for done in 1..=s_reps {
            if experiment_once(g, v, x, k, rng)? {
                successes += 1;
            }
            if 2 * successes >= s_reps {
                break;
            }
            if 2 * (successes + s_reps - done) < s_reps {
                self.sampled_heavy[v] = true;
                return Ok(Label::Heavy);
            }
        }
        self.sampled_heavy[v] = false;
        let mut rest = x.to_vec();
        let mut found = Vec::new();
        while found.len() < self.h {
            match out_edge(g, v, &rest, false, Stage::LightEdges)? {
                Some(Vertex::Elem(u)) => {
                    found.push(u);
                    rest.retain(|&y| y != u);
                }
                _ => break,
            }
        }
        if found.len() >= self.h {
            Ok(Label::Heavy)
        } else {
            self.light_edges[v] = found;
            Ok(Label::Light)
        }
    }

    fn categorize_deterministic<N: NeighborhoodOracle + ?Sized>(
        &mut self,
        g: &N,
        v: ElementId,
    ) -> Result<Label> {
        while self.nv[v].len() < self.h {
            let have = &self.nv[v];
            let order: Vec<ElementId> = self
                .by_weight
                .iter()
                .map(|&(_, u)| u)
                .filter(|u| !have.contains(u))
                .collect();
            match out_edge(g, v, &order, false, Stage::CategorizeDet)? {
                Some(Vertex::Elem(u)) => {
                    self.nv[v].push(u);
                    self.bump_weight(u);
                }
                _ => break,
            }
        }
        if self.nv[v].len() >= self.h {
            Ok(Label::Heavy)
        } else {
            self.light_edges[v] = self.nv[v].clone();
            Ok(Label::Light)
        }
    }

    /// Predecessor chain from `s` to `v`.
    fn trace(&self, v: Vertex) -> Result<Vec<Vertex>> {
        let mut path = vec![v];
        let mut cur = v;
        while cur != Vertex::Source {
            cur = self.pred[cur.index(self.n)].ok_or_else(|| {
                Error::invariant("augmentation", format!("{cur:?} in F without predecessor"))
            })?;
            path.push(cur);
            if path.len() > self.n + 2 {
                return Err(Error::invariant("augmentation", "predecessor cycle"));
            }
        }
        path.reverse();
        Ok(path)
    }

    /// Checks the phase-start invariants against true edges.
    pub fn check_invariants<G: NeighborhoodOracle + EdgeAudit + ?Sized>(
        &self,
        g: &G,
    ) -> Result<()> {
        let fail = |detail: String| Err(Error::invariant("augmentation", detail));
        for v in self.found() {
            if v == Vertex::Source {
                continue;
            }
            let path = self.trace(v)?;
            if let Some(w) = path.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
                return fail(format!(
                    "recorded path to {v:?} uses non-edge {:?} -> {:?}",
                    w[0], w[1]
                ));
            }
        }
        let open_left = self.open_left();
        for v in 0..self.n {
            if self.in_base[v] {
                continue;
            }
            if self.in_f[v] {
                if let Some(&u) = open_left
                    .iter()
                    .find(|&&u| g.has_edge(Vertex::Elem(v), Vertex::Elem(u)))
                {
                    return fail(format!("edge from F vertex {v} to {u} outside F"));
                }
                if !self.in_f(Vertex::Sink) && g.has_edge(Vertex::Elem(v), Vertex::Sink) {
                    return fail(format!("edge from F vertex {v} to t"));
                }
            } else if self.labels[v] == Label::Light {
                if let Some(&u) = open_left.iter().find(|&&u| {
                    g.has_edge(Vertex::Elem(v), Vertex::Elem(u))
                        && !self.light_edges[v].contains(&u)
                }) {
                    return fail(format!("light vertex {v} is missing out-edge to {u}"));
                }
            }
        }
        let nv_sum: usize = self.nv.iter().map(Vec::len).sum();
        let w_sum = self.weight_sum();
        if nv_sum != w_sum || w_sum > self.n * self.h {
            return fail(format!(
                "weight sum {w_sum}, candidate sum {nv_sum}, bound {}",
                self.n * self.h
            ));
        }
        Ok(())
    }

    /// Number of labels that disagree with the true out-degree test.
    fn label_mismatches<G: NeighborhoodOracle + EdgeAudit + ?Sized>(&self, g: &G) -> (u64, u64) {
        let open_left = self.open_left();
        let mut checked = 0;
        let mut wrong = 0;
        for v in self.open_right() {
            let vv = Vertex::Elem(v);
            let degree = open_left
                .iter()
                .filter(|&&u| g.has_edge(vv, Vertex::Elem(u)))
                .count();
            let heavy = g.has_edge(vv, Vertex::Sink) || degree >= self.h;
            let expected = if heavy { Label::Heavy } else { Label::Light };
            checked += 1;
            if self.labels[v] != expected {
                wrong += 1;
            }
        }
        (checked, wrong)
    }
}

/// Result of one [`reverse_bfs`] call.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReverseBfsResult {
    /// Path from a vertex of `F` to a heavy vertex.
    pub path: Option<Vec<Vertex>>,
    pub in_edge_calls: usize,
}

/// Search backwards from all heavy vertices until a vertex of `F` turns up.
///
/// Right vertices discover in-neighbours with repeated [`in_edge`] calls;
/// left vertices reach light vertices through their recorded edge lists at
/// no cost.
pub fn reverse_bfs<N: NeighborhoodOracle + ?Sized>(
    g: &N,
    state: &PhaseState,
) -> Result<ReverseBfsResult> {
    let n = state.n;
    let mut visited = vec![false; n + 2];
    let mut parent: Vec<Option<Vertex>> = vec![None; n + 2];
    let mut queue = VecDeque::new();
    let mut light_in: Vec<Vec<ElementId>> = vec![Vec::new(); n];
    for v in state.open_right() {
        match state.labels[v] {
            Label::Heavy => {
                visited[v] = true;
                queue.push_back(Vertex::Elem(v));
            }
            Label::Light => {
                for &u in &state.light_edges[v] {
                    if !state.in_f[u] {
                        light_in[u].push(v);
                    }
                }
            }
            Label::Unknown => {}
        }
    }
    let mut left: Vec<ElementId> = (0..n).filter(|&e| state.in_base[e]).collect();
    let mut source_open = true;
    let mut calls = 0;
    let finish = |start: Vertex, parent: &[Option<Vertex>]| {
        let mut path = vec![start];
        let mut cur = start;
        while let Some(p) = parent[cur.index(n)] {
            path.push(p);
            cur = p;
        }
        path
    };
    while let Some(v) = queue.pop_front() {
        let Vertex::Elem(e) = v else { continue };
        if state.in_base[e] {
            for &w in &light_in[e] {
                if !visited[w] {
                    visited[w] = true;
                    parent[w] = Some(v);
                    queue.push_back(Vertex::Elem(w));
                }
            }
            continue;
        }
        loop {
            calls += 1;
            let Some(u) = in_edge(g, e, &left, source_open, Stage::ReverseBfs)? else {
                break;
            };
            let i = u.index(n);
            visited[i] = true;
            parent[i] = Some(v);
            match u {
                Vertex::Source => source_open = false,
                Vertex::Elem(x) => left.retain(|&y| y != x),
                Vertex::Sink => unreachable!("in_edge never returns t"),
            }
            if state.in_f[i] {
                return Ok(ReverseBfsResult {
                    path: Some(finish(u, &parent)),
                    in_edge_calls: calls,
                });
            }
            queue.push_back(u);
        }
    }
    Ok(ReverseBfsResult {
        path: None,
        in_edge_calls: calls,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentStats {
    pub phases: usize,
    /// Vertices declared heavy by sampling that had fewer than `h` new
    /// out-neighbours when reached.
    pub misclassification_events: usize,
    pub reverse_bfs_queries: Vec<u64>,
    pub reverse_bfs_in_edge_calls: Vec<usize>,
    pub labels_checked: u64,
    pub label_mismatches: u64,
    pub max_weight_sum: usize,
}

impl AugmentStats {
    pub fn merge(&mut self, other: &AugmentStats) {
        self.phases += other.phases;
        self.misclassification_events += other.misclassification_events;
        self.reverse_bfs_queries
            .extend_from_slice(&other.reverse_bfs_queries);
        self.reverse_bfs_in_edge_calls
            .extend_from_slice(&other.reverse_bfs_in_edge_calls);
        self.labels_checked += other.labels_checked;
        self.label_mismatches += other.label_mismatches;
        self.max_weight_sum = self.max_weight_sum.max(other.max_weight_sum);
    }
}

#[derive(Clone, Debug)]
pub struct AugmentOutcome {
    /// Chordless `s → t` path, or `None` when `t` is unreachable.
    pub path: Option<AugmentingPath>,
    pub stats: AugmentStats,
}

/// Find an augmenting path, or prove that none exists.
pub fn augmentation<N: NeighborhoodOracle + EdgeAudit + ?Sized>(
    g: &N,
    cfg: &CategorizerConfig,
    audit: AuditOptions,
) -> Result<AugmentOutcome> {
    if cfg.h == 0 || cfg.s_reps == 0 {
        return Err(Error::contract("categorizer needs h >= 1 and s_reps >= 1"));
    }
    let mut rng = seeded(cfg.rng_seed);
    let mut state = PhaseState::new(g, cfg.h);
    let mut stats = AugmentStats::default();
    while !state.in_f(Vertex::Sink) {
        stats.phases += 1;
        if audit.invariants {
            state.check_invariants(g)?;
        }
        state.categorize(g, cfg, &mut rng)?;
        stats.max_weight_sum = stats.max_weight_sum.max(state.weight_sum());
        if audit.labels {
            let (checked, wrong) = state.label_mismatches(g);
            stats.labels_checked += checked;
            stats.label_mismatches += wrong;
        }

        let before = g.ledger().stage_total(Stage::ReverseBfs);
        let found = reverse_bfs(g, &state)?;
        stats
            .reverse_bfs_queries
            .push(g.ledger().stage_total(Stage::ReverseBfs) - before);
        stats.reverse_bfs_in_edge_calls.push(found.in_edge_calls);
        let Some(path) = found.path else {
            return Ok(AugmentOutcome { path: None, stats });
        };

        let mut fresh_right = Vec::new();
        for w in path.windows(2) {
            state.add(w[1], w[0]);
            if let Vertex::Elem(e) = w[1] {
                if !state.in_base[e] {
                    fresh_right.push(e);
                }
            }
        }
        for v in fresh_right {
            close_out(g, &mut state, v, cfg.mode, &mut stats)?;
            if state.in_f(Vertex::Sink) {
                break;
            }
        }
    }
    let route = state.trace(Vertex::Sink)?;
    let path = make_chordless(g, route)?;
    Ok(AugmentOutcome {
        path: Some(path),
        stats,
    })
}

/// Add every out-neighbour of a newly found right vertex to `F`.
fn close_out<N: NeighborhoodOracle + ?Sized>(
    g: &N,
    state: &mut PhaseState,
    v: ElementId,
    mode: Mode,
    stats: &mut AugmentStats,
) -> Result<()> {
    let from = Vertex::Elem(v);
    if state.labels[v] == Label::Light {
        let targets: Vec<ElementId> = state.light_edges[v]
            .iter()
            .copied()
            .filter(|&u| !state.in_f[u])
            .collect();
        for u in targets {
            state.add(Vertex::Elem(u), from);
        }
        return Ok(());
    }
    if state.t_edge(g, v, Stage::PathClosure)? {
        state.add(Vertex::Sink, from);
        return Ok(());
    }
    let mut rest = state.open_left();
    let mut found = 0;
    while let Some(Vertex::Elem(u)) = out_edge(g, v, &rest, false, Stage::PathClosure)? {
        state.add(Vertex::Elem(u), from);
        rest.retain(|&y| y != u);
        found += 1;
    }
    if mode == Mode::Randomized && state.sampled_heavy[v] && found < state.h {
        stats.misclassification_events += 1;
    }
    Ok(())
}
