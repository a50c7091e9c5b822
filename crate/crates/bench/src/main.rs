use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use matint::classic::naive_exact;
use matint::instance::{generate_with, Family, GenOptions, InstancePair};
use matint::ledger::StageCount;
use matint::pipeline::{solve, PipelineConfig, SolveReport};
use matint::reachability::AuditOptions;
use matint::reference::{brute_force_max_common, BruteForceMode, BRUTE_FORCE_LIMIT};
use matint::{ElementId, Mode};
use matint_bench::{
    run_algorithm, run_plan, Algorithm, BenchPlan, Format, RunOptions, VerificationFailure,
};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "matint",
    version,
    about = "Matroid intersection solver and benchmark runner"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Rand,
    Det,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Rand => Mode::Randomized,
            ModeArg::Det => Mode::Deterministic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Naive,
    Cunningham,
    Pipeline,
}

#[derive(clap::Args)]
struct SolverFlags {
    #[arg(long, value_enum, default_value = "rand")]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Distance bound for the shortest-path stage.
    #[arg(long)]
    d: Option<usize>,
    /// Heavy threshold.
    #[arg(long)]
    h: Option<usize>,
}

impl SolverFlags {
    fn config(&self, instance_id: String) -> PipelineConfig {
        let mut cfg = PipelineConfig::new(self.mode.into(), self.seed);
        cfg.d_override = self.d;
        cfg.h_override = self.h;
        cfg.instance_id = instance_id;
        cfg
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance as JSON.
    Gen {
        family: String,
        n: usize,
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        r_ratio: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve one instance file and print the answer with its query report.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "pipeline")]
        algorithm: AlgorithmArg,
        #[command(flatten)]
        solver: SolverFlags,
        /// Skip the cross-check against naive_exact.
        #[arg(long)]
        no_verify: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark plan and write the scaling report.
    Bench {
        plan: PathBuf,
        #[arg(long)]
        no_verify: bool,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        h: Option<usize>,
    },
    /// Solve with every audit on and compare against naive_exact and, for
    /// small n, brute force.
    Verify {
        instance: PathBuf,
        #[command(flatten)]
        solver: SolverFlags,
    },
}

#[derive(Serialize)]
struct SolveFile {
    algorithm: String,
    answer_size: usize,
    witness: Vec<ElementId>,
    total_queries: u64,
    stage_ledgers: BTreeMap<String, StageCount>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<SolveReport>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.downcast_ref::<VerificationFailure>().is_some() {
            return 2;
        }
        if let Some(err) = cause.downcast_ref::<matint::Error>() {
            if err.is_invariant_violation() {
                return 3;
            }
        }
    }
    1
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen {
            family,
            n,
            seed,
            r_ratio,
            out,
        } => {
            let family: Family = family.parse()?;
            let opts = GenOptions {
                r_ratio,
                ..GenOptions::default()
            };
            let pair = generate_with(family, n, seed, &opts)?;
            emit(out.as_deref(), &pair.to_json())
        }
        Command::Solve {
            instance,
            algorithm,
            solver,
            no_verify,
            format,
            out,
        } => {
            let pair = load_instance(&instance)?;
            let algorithm = match algorithm {
                AlgorithmArg::Naive => Algorithm::Naive,
                AlgorithmArg::Cunningham => Algorithm::Cunningham,
                AlgorithmArg::Pipeline => match Mode::from(solver.mode) {
                    Mode::Randomized => Algorithm::PipelineRand,
                    Mode::Deterministic => Algorithm::PipelineDet,
                },
            };
            let cfg = solver.config(instance.display().to_string());
            let rec = run_algorithm(&pair, algorithm, &cfg)?;
            if !no_verify {
                let (o1, o2) = pair.oracles()?;
                let expected = naive_exact(&o1, &o2)?.set.len();
                if expected != rec.answer_size {
                    return Err(VerificationFailure {
                        detail: format!(
                            "{algorithm} returned {} elements, naive_exact returned {expected}",
                            rec.answer_size
                        ),
                        dump: None,
                    }
                    .into());
                }
            }
            let file = SolveFile {
                algorithm: algorithm.to_string(),
                answer_size: rec.answer_size,
                witness: rec.set,
                total_queries: rec.total_queries,
                stage_ledgers: rec.stage_ledgers,
                report: rec.report,
            };
            let text = match Format::from(format) {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&file)?;
                    s.push('\n');
                    s
                }
                Format::Csv => solve_csv(&file)?,
            };
            emit(out.as_deref(), &text)
        }
        Command::Bench {
            plan,
            no_verify,
            format,
            out,
            d,
            h,
        } => {
            let plan = BenchPlan::load(&plan)?;
            let out = out.or_else(|| plan.output.clone());
            let format = format.map(Format::from).unwrap_or(plan.format);
            let opts = RunOptions {
                verify: !no_verify,
                dump_dir: out.as_deref().and_then(Path::parent).map(Path::to_path_buf),
                d_override: d,
                h_override: h,
            };
            let report = run_plan(&plan, &opts)?;
            for s in &report.slopes {
                let slope = s
                    .slope
                    .map(|x| format!("{x:.3}"))
                    .unwrap_or_else(|| "n/a".into());
                eprintln!("{} {}: slope {slope}", s.family, s.algorithm);
            }
            emit(out.as_deref(), &report.render(format)?)
        }
        Command::Verify { instance, solver } => {
            let pair = load_instance(&instance)?;
            let mut cfg = solver.config(instance.display().to_string());
            cfg.audit = AuditOptions::all();
            let (o1, o2) = pair.oracles()?;
            let got = solve(&o1, &o2, &cfg)?;
            let (o1, o2) = pair.oracles()?;
            let naive = naive_exact(&o1, &o2)?.set.len();
            let mut line = format!(
                "pipeline {} = {}, naive_exact = {naive}",
                cfg.mode,
                got.set.len()
            );
            let mut ok = naive == got.set.len();
            if pair.n <= BRUTE_FORCE_LIMIT {
                let (o1, o2) = pair.oracles()?;
                let brute = brute_force_max_common(&o1, &o2, BruteForceMode::Exhaustive)?.size;
                line.push_str(&format!(", brute force = {brute}"));
                ok &= brute == naive;
            }
            if !ok {
                return Err(VerificationFailure {
                    detail: line,
                    dump: None,
                }
                .into());
            }
            println!("ok: {line}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> Result<InstancePair> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    InstancePair::from_json(&text).with_context(|| format!("loading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn solve_csv(file: &SolveFile) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![
        "algorithm".to_string(),
        "answer_size".to_string(),
        "total_queries".to_string(),
        "witness".to_string(),
    ];
    header.extend(file.stage_ledgers.keys().cloned());
    w.write_record(&header)?;
    let witness: Vec<String> = file.witness.iter().map(|e| e.to_string()).collect();
    let mut row = vec![
        file.algorithm.clone(),
        file.answer_size.to_string(),
        file.total_queries.to_string(),
        witness.join(" "),
    ];
    row.extend(file.stage_ledgers.values().map(|c| c.total().to_string()));
    w.write_record(&row)?;
    Ok(String::from_utf8(w.into_inner()?)?)
}
