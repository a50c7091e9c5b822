//! Benchmark plumbing: solver runs with per-stage query ledgers, matrix
//! execution over a plan, verification against the exact baseline, and
//! log-log scaling fits.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use matint::classic::{cunningham_until, naive_exact};
use matint::instance::{generate_with, Family, GenOptions, InstancePair};
use matint::ledger::StageCount;
use matint::pipeline::{solve, PipelineConfig, SolveReport};
use matint::{ElementId, ExchangeGraph, Mode};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Naive,
    Cunningham,
    PipelineRand,
    PipelineDet,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Naive,
        Algorithm::Cunningham,
        Algorithm::PipelineRand,
        Algorithm::PipelineDet,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Naive => "naive",
            Algorithm::Cunningham => "cunningham",
            Algorithm::PipelineRand => "pipeline_rand",
            Algorithm::PipelineDet => "pipeline_det",
        }
    }

    pub fn pipeline_mode(self) -> Option<Mode> {
        match self {
            Algorithm::PipelineRand => Some(Mode::Randomized),
            Algorithm::PipelineDet => Some(Mode::Deterministic),
            _ => None,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .with_context(|| format!("unknown algorithm `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => bail!("unknown format `{s}` (expected json or csv)"),
        }
    }
}

/// A benchmark matrix: every family × size × seed, each solved by every
/// algorithm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchPlan {
    pub families: Vec<Family>,
    pub sizes: Vec<usize>,
    #[serde(default = "default_r_ratio")]
    pub r_ratio: f64,
    pub algorithms: Vec<Algorithm>,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

fn default_r_ratio() -> f64 {
    0.5
}

impl BenchPlan {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading plan {}", path.display()))?;
        let plan: BenchPlan = serde_json::from_str(&text)
            .with_context(|| format!("parsing plan {}", path.display()))?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if self.families.is_empty() || self.algorithms.is_empty() {
            bail!("plan needs at least one family and one algorithm");
        }
        if self.sizes.is_empty() || self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            bail!("plan sizes must be non-empty and strictly ascending");
        }
        if self.sizes[0] == 0 {
            bail!("plan sizes must be positive");
        }
        if self.seeds.is_empty() {
            bail!("plan needs at least one seed");
        }
        if !(self.r_ratio > 0.0 && self.r_ratio <= 1.0) {
            bail!("r_ratio must lie in (0, 1]");
        }
        Ok(())
    }
}

/// Raised when a solver's answer disagrees with the exact baseline.
#[derive(Debug)]
pub struct VerificationFailure {
    pub detail: String,
    pub dump: Option<PathBuf>,
}

impl fmt::Display for VerificationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "verification failed: {}", self.detail)?;
        if let Some(p) = &self.dump {
            write!(f, " (instance written to {})", p.display())?;
        }
        Ok(())
    }
}

impl std::error::Error for VerificationFailure {}

/// One algorithm run on one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub family: String,
    pub n: usize,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub answer_size: usize,
    pub total_queries: u64,
    pub stage_ledgers: BTreeMap<String, StageCount>,
    pub wall_time_ms: f64,
    /// Full pipeline report for the pipeline algorithms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<SolveReport>,
    #[serde(skip)]
    pub set: Vec<ElementId>,
}

/// Solve `pair` with `algorithm` on fresh oracles. Pipeline runs use `cfg`
/// with its mode replaced by the algorithm's.
pub fn run_algorithm(
    pair: &InstancePair,
    algorithm: Algorithm,
    cfg: &PipelineConfig,
) -> Result<RunRecord> {
    let (o1, o2) = pair.oracles()?;
    let ledger = o1.ledger().clone();
    let before = ledger.snapshot();
    let start = Instant::now();
    let (set, report) = match algorithm {
        Algorithm::Naive => (naive_exact(&o1, &o2)?.set, None),
        Algorithm::Cunningham => {
            let mut g = ExchangeGraph::new(o1, o2, Vec::new())?;
            cunningham_until(&mut g, pair.n + 2)?;
            (g.into_base(), None)
        }
        Algorithm::PipelineRand | Algorithm::PipelineDet => {
            let mut cfg = cfg.clone();
            cfg.mode = algorithm.pipeline_mode().expect("pipeline algorithm");
            let out = solve(&o1, &o2, &cfg)?;
            (out.set, Some(out.report))
        }
    };
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let spent = ledger.snapshot().since(&before);
    let (family, seed) = pair
        .meta
        .as_ref()
        .map(|m| (m.family.clone(), m.seed))
        .unwrap_or_default();
    Ok(RunRecord {
        family,
        n: pair.n,
        seed,
        algorithm,
        answer_size: set.len(),
        total_queries: spent.total(),
        stage_ledgers: spent.by_stage(),
        wall_time_ms,
        report,
        set,
    })
}

/// Order statistics of total queries for one (family, algorithm, n) group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeSummary {
    pub family: String,
    pub algorithm: Algorithm,
    pub n: usize,
    pub runs: usize,
    pub median_queries: f64,
    pub mean_queries: f64,
    pub max_queries: u64,
    /// Median queries per stage.
    pub stage_medians: BTreeMap<String, f64>,
}

/// Least-squares slope of `ln median` against `ln n` for one
/// (family, algorithm) sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub family: String,
    pub algorithm: Algorithm,
    pub sizes: Vec<usize>,
    /// `None` with fewer than four sizes.
    pub slope: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub summaries: Vec<SizeSummary>,
    pub slopes: Vec<SlopeFit>,
    pub runs: Vec<RunRecord>,
}

impl ScalingReport {
    pub fn slope(&self, family: &str, algorithm: Algorithm) -> Option<f64> {
        self.slopes
            .iter()
            .find(|s| s.family == family && s.algorithm == algorithm)
            .and_then(|s| s.slope)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One row per (family, algorithm, n) with its sweep slope and the
    /// per-stage medians.
    pub fn to_csv(&self) -> Result<String> {
        let stages: Vec<String> = self
            .summaries
            .first()
            .map(|s| s.stage_medians.keys().cloned().collect())
            .unwrap_or_default();
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<String> = [
            "family",
            "algorithm",
            "n",
            "runs",
            "median_queries",
            "mean_queries",
            "max_queries",
            "slope",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        header.extend(stages.iter().map(|s| format!("median_{s}")));
        w.write_record(&header)?;
        for s in &self.summaries {
            let slope = self
                .slope(&s.family, s.algorithm)
                .map(|x| format!("{x:.4}"))
                .unwrap_or_default();
            let mut row = vec![
                s.family.clone(),
                s.algorithm.to_string(),
                s.n.to_string(),
                s.runs.to_string(),
                s.median_queries.to_string(),
                s.mean_queries.to_string(),
                s.max_queries.to_string(),
                slope,
            ];
            row.extend(
                stages
                    .iter()
                    .map(|k| s.stage_medians.get(k).copied().unwrap_or(0.0).to_string()),
            );
            w.write_record(&row)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(self.to_json()),
            Format::Csv => self.to_csv(),
        }
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.is_empty() {
        f64::NAN
    } else if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

/// Least-squares slope of `ln y` on `ln x`, or `None` with fewer than four
/// points or a non-positive value.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 4 || points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Group runs into per-size summaries and per-sweep slopes.
pub fn summarize(runs: Vec<RunRecord>) -> ScalingReport {
    let mut groups: BTreeMap<(String, Algorithm, usize), Vec<&RunRecord>> = BTreeMap::new();
    for r in &runs {
        groups
            .entry((r.family.clone(), r.algorithm, r.n))
            .or_default()
            .push(r);
    }
    let mut summaries = Vec::new();
    for ((family, algorithm, n), rs) in &groups {
        let totals: Vec<f64> = rs.iter().map(|r| r.total_queries as f64).collect();
        let mut stage_medians = BTreeMap::new();
        for stage in rs[0].stage_ledgers.keys() {
            let vals: Vec<f64> = rs
                .iter()
                .map(|r| r.stage_ledgers.get(stage).map_or(0, |c| c.total()) as f64)
                .collect();
            stage_medians.insert(stage.clone(), median(&vals));
        }
        summaries.push(SizeSummary {
            family: family.clone(),
            algorithm: *algorithm,
            n: *n,
            runs: rs.len(),
            median_queries: median(&totals),
            mean_queries: totals.iter().sum::<f64>() / totals.len() as f64,
            max_queries: rs.iter().map(|r| r.total_queries).max().unwrap_or(0),
            stage_medians,
        });
    }
    let mut sweeps: BTreeMap<(String, Algorithm), Vec<&SizeSummary>> = BTreeMap::new();
    for s in &summaries {
        sweeps
            .entry((s.family.clone(), s.algorithm))
            .or_default()
            .push(s);
    }
    let slopes = sweeps
        .into_iter()
        .map(|((family, algorithm), ss)| {
            let points: Vec<(f64, f64)> =
                ss.iter().map(|s| (s.n as f64, s.median_queries)).collect();
            SlopeFit {
                family,
                algorithm,
                sizes: ss.iter().map(|s| s.n).collect(),
                slope: loglog_slope(&points),
            }
        })
        .collect();
    ScalingReport {
        summaries,
        slopes,
        runs,
    }
}

/// Options for [`run_plan`] beyond the plan itself.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub verify: bool,
    /// Directory for instances that fail verification.
    pub dump_dir: Option<PathBuf>,
    pub d_override: Option<usize>,
    pub h_override: Option<usize>,
}

/// Run every cell of `plan`. Cells run in parallel; each owns its oracles.
/// With verification on, any answer that differs from `naive_exact` aborts
/// with a [`VerificationFailure`] after writing the instance to disk.
pub fn run_plan(plan: &BenchPlan, opts: &RunOptions) -> Result<ScalingReport> {
    plan.validate()?;
    let gen = GenOptions {
        r_ratio: plan.r_ratio,
        ..GenOptions::default()
    };
    let mut cells = Vec::new();
    for &family in &plan.families {
        for &n in &plan.sizes {
            for &seed in &plan.seeds {
                cells.push((family, n, seed));
            }
        }
    }
    let per_cell: Vec<Vec<RunRecord>> = cells
        .par_iter()
        .map(|&(family, n, seed)| {
            let pair = generate_with(family, n, seed, &gen)?;
            run_cell(&pair, plan, opts, seed)
        })
        .collect::<Result<_>>()?;
    Ok(summarize(per_cell.into_iter().flatten().collect()))
}

fn run_cell(
    pair: &InstancePair,
    plan: &BenchPlan,
    opts: &RunOptions,
    seed: u64,
) -> Result<Vec<RunRecord>> {
    let mut cfg = PipelineConfig::new(Mode::Randomized, seed);
    cfg.d_override = opts.d_override;
    cfg.h_override = opts.h_override;
    let mut records = Vec::new();
    for &algorithm in &plan.algorithms {
        cfg.instance_id = instance_id(pair, algorithm);
        records.push(run_algorithm(pair, algorithm, &cfg)?);
    }
    if opts.verify {
        let expected = match records.iter().find(|r| r.algorithm == Algorithm::Naive) {
            Some(r) => r.answer_size,
            None => {
                let (o1, o2) = pair.oracles()?;
                naive_exact(&o1, &o2)?.set.len()
            }
        };
        if let Some(bad) = records.iter().find(|r| r.answer_size != expected) {
            let dump = dump_instance(pair, opts.dump_dir.as_deref())?;
            return Err(VerificationFailure {
                detail: format!(
                    "{} on {} returned {} elements, naive_exact returned {}",
                    bad.algorithm,
                    instance_id(pair, bad.algorithm),
                    bad.answer_size,
                    expected
                ),
                dump: Some(dump),
            }
            .into());
        }
    }
    Ok(records)
}

fn instance_id(pair: &InstancePair, algorithm: Algorithm) -> String {
    match &pair.meta {
        Some(m) => format!("{}/n={}/seed={}/{algorithm}", m.family, pair.n, m.seed),
        None => format!("n={}/{algorithm}", pair.n),
    }
}

/// Write `pair` as a JSON instance file and return its path.
pub fn dump_instance(pair: &InstancePair, dir: Option<&Path>) -> Result<PathBuf> {
    let dir = dir
        .map(Path::to_path_buf)
        .unwrap_or_else(std::env::temp_dir);
    std::fs::create_dir_all(&dir)?;
    let name = match &pair.meta {
        Some(m) => format!("failed-{}-n{}-seed{}.json", m.family, pair.n, m.seed),
        None => format!("failed-n{}.json", pair.n),
    };
    let path = dir.join(name);
    std::fs::write(&path, pair.to_json()).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_power_law() {
        let pts: Vec<(f64, f64)> = [64.0, 128.0, 256.0, 512.0]
            .iter()
            .map(|&n: &f64| (n, 3.0 * n.powf(1.7)))
            .collect();
        assert!((loglog_slope(&pts).unwrap() - 1.7).abs() < 1e-9);
        assert_eq!(loglog_slope(&pts[..3]), None);
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn plan_validation() {
        let mut plan = BenchPlan {
            families: vec![Family::BipartiteMatching],
            sizes: vec![8, 16],
            r_ratio: 0.5,
            algorithms: vec![Algorithm::Naive],
            seeds: vec![1],
            output: None,
            format: Format::Json,
        };
        assert!(plan.validate().is_ok());
        plan.sizes = vec![16, 8];
        assert!(plan.validate().is_err());
        plan.sizes = vec![8];
        plan.seeds.clear();
        assert!(plan.validate().is_err());
    }

    #[test]
    fn small_plan_verifies() {
        let plan = BenchPlan {
            families: vec![Family::BipartiteMatching, Family::PlantedRank],
            sizes: vec![8, 12, 16, 20],
            r_ratio: 0.5,
            algorithms: Algorithm::ALL.to_vec(),
            seeds: vec![1, 2],
            output: None,
            format: Format::Csv,
        };
        let opts = RunOptions {
            verify: true,
            ..RunOptions::default()
        };
        let report = run_plan(&plan, &opts).unwrap();
        assert_eq!(report.runs.len(), 2 * 4 * 2 * 4);
        assert_eq!(report.slopes.len(), 2 * 4);
        assert!(report.slopes.iter().all(|s| s.slope.is_some()));
        let csv = report.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 1 + 2 * 4 * 4);
    }
}
