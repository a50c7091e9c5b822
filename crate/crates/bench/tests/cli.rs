use std::path::Path;
use std::process::{Command, Output};

use matint::instance::{Family, InstancePair};
use matint::reference::{brute_force_max_common, BruteForceMode};
use matint_bench::{run_plan, Algorithm, BenchPlan, Format, RunOptions};
use serde_json::Value;

fn matint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matint"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn gen(dir: &Path, family: &str, n: usize, seed: u64) -> String {
    let path = dir.join(format!("{family}-{n}-{seed}.json"));
    let p = path.to_str().unwrap().to_string();
    let out = matint(&[
        "gen",
        family,
        &n.to_string(),
        &seed.to_string(),
        "--out",
        &p,
    ]);
    assert!(out.status.success());
    p
}

#[test]
fn gen_writes_a_loadable_instance() {
    let dir = tempfile::tempdir().unwrap();
    let p = gen(dir.path(), "bipartite_matching", 8, 1);
    let pair = InstancePair::from_json(&std::fs::read_to_string(p).unwrap()).unwrap();
    assert_eq!(pair.n, 8);
}

#[test]
fn gen_planted_rank_is_confirmed_by_brute_force() {
    let dir = tempfile::tempdir().unwrap();
    let p = gen(dir.path(), "planted_rank", 16, 7);
    let pair = InstancePair::from_json(&std::fs::read_to_string(p).unwrap()).unwrap();
    let (o1, o2) = pair.oracles().unwrap();
    let r = brute_force_max_common(&o1, &o2, BruteForceMode::Exhaustive)
        .unwrap()
        .size;
    assert_eq!(Some(r), pair.planted_rank());
}

#[test]
fn gen_is_byte_identical_across_runs() {
    for family in Family::ALL {
        let a = matint(&["gen", family.as_str(), "40", "9"]);
        let b = matint(&["gen", family.as_str(), "40", "9"]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{family}");
        let text = String::from_utf8(a.stdout).unwrap();
        assert_eq!(InstancePair::from_json(&text).unwrap().to_json(), text);
    }
}

#[test]
fn solve_rank_zero_instance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.json");
    std::fs::write(
        &path,
        r#"{"n": 5, "matroid1": {"kind": "uniform", "k": 0}, "matroid2": {"kind": "uniform", "k": 3}}"#,
    )
    .unwrap();
    for mode in ["rand", "det"] {
        let v = stdout_json(&matint(&["solve", path.to_str().unwrap(), "--mode", mode]));
        assert_eq!(v["answer_size"], 0);
        assert_eq!(v["witness"], Value::Array(vec![]));
    }
}

#[test]
fn solve_matches_naive_and_repeats_exactly() {
    let dir = tempfile::tempdir().unwrap();
    for family in [
        "bipartite_matching",
        "random_binary_linear",
        "alternating_chains",
    ] {
        let p = gen(dir.path(), family, 48, 3);
        let naive = stdout_json(&matint(&["solve", &p, "--algorithm", "naive"]));
        for mode in ["rand", "det"] {
            let args = ["solve", &p, "--mode", mode, "--seed", "11"];
            let mut a = stdout_json(&matint(&args));
            let mut b = stdout_json(&matint(&args));
            assert_eq!(a["answer_size"], naive["answer_size"], "{family} {mode}");
            a["report"]["wall_time_ms"] = Value::Null;
            b["report"]["wall_time_ms"] = Value::Null;
            assert_eq!(a, b, "{family} {mode}");
            assert!(a["report"]["total_queries"].as_u64().unwrap() > 0);
        }
    }
}

#[test]
fn solve_csv_has_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let p = gen(dir.path(), "rainbow_spanning_tree", 20, 2);
    let out = matint(&["solve", &p, "--format", "csv", "--no-verify"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("algorithm,answer_size,total_queries,witness"));
}

#[test]
fn verify_passes_on_generated_instances() {
    let dir = tempfile::tempdir().unwrap();
    for family in Family::ALL {
        let p = gen(dir.path(), family.as_str(), 14, 5);
        for mode in ["rand", "det"] {
            let out = matint(&["verify", &p, "--mode", mode, "--seed", "2"]);
            assert!(
                out.status.success(),
                "{family}: {}",
                String::from_utf8_lossy(&out.stderr)
            );
        }
    }
}

#[test]
fn usage_and_input_errors_exit_with_one() {
    assert_eq!(matint(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        matint(&["gen", "no_such_family", "8", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        matint(&["solve", "/no/such/file.json"]).status.code(),
        Some(1)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"n": 3, "matroid1": {"kind": "uniform"}}"#).unwrap();
    assert_eq!(
        matint(&["solve", bad.to_str().unwrap()]).status.code(),
        Some(1)
    );
    assert_eq!(matint(&["--help"]).status.code(), Some(0));
}

#[test]
fn bench_writes_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.json");
    let out = dir.path().join("report.csv");
    std::fs::write(
        &plan,
        r#"{"families": ["bipartite_matching"], "sizes": [8, 12, 16, 24], "r_ratio": 0.5,
            "algorithms": ["naive", "pipeline_rand"], "seeds": [1, 2], "format": "csv"}"#,
    )
    .unwrap();
    let res = matint(&[
        "bench",
        plan.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 4);

    let json_out = dir.path().join("report.json");
    let res = matint(&[
        "bench",
        plan.to_str().unwrap(),
        "--format",
        "json",
        "--out",
        json_out.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(json_out).unwrap()).unwrap();
    assert_eq!(v["slopes"].as_array().unwrap().len(), 2);
}

/// The sweep from the plan example: naive's slope is close to 2 and the
/// report carries two fitted slopes.
#[test]
fn bipartite_sweep_slopes() {
    let plan = BenchPlan {
        families: vec![Family::BipartiteMatching],
        sizes: vec![64, 128, 256, 512],
        r_ratio: 0.5,
        algorithms: vec![Algorithm::Naive, Algorithm::PipelineRand],
        seeds: vec![1, 2, 3, 4, 5],
        output: None,
        format: Format::Json,
    };
    let opts = RunOptions {
        verify: true,
        ..RunOptions::default()
    };
    let report = run_plan(&plan, &opts).unwrap();
    let naive = report
        .slope("bipartite_matching", Algorithm::Naive)
        .unwrap();
    let rand = report
        .slope("bipartite_matching", Algorithm::PipelineRand)
        .unwrap();
    assert!((naive - 2.0).abs() <= 0.2, "naive slope {naive}");
    assert!(rand.is_finite());
    println!("bipartite_matching 64..512: naive {naive:.3}, pipeline_rand {rand:.3}");
}

#[test]
fn reports_repeat_exactly() {
    let plan = BenchPlan {
        families: vec![Family::RandomBinaryLinear, Family::AlternatingChains],
        sizes: vec![16, 24, 32, 40],
        r_ratio: 0.5,
        algorithms: Algorithm::ALL.to_vec(),
        seeds: vec![4, 5],
        output: None,
        format: Format::Json,
    };
    let opts = RunOptions::default();
    let strip = |r: matint_bench::ScalingReport| -> Vec<(String, usize, u64, Algorithm, u64)> {
        r.runs
            .into_iter()
            .map(|x| (x.family, x.n, x.seed, x.algorithm, x.total_queries))
            .collect()
    };
    let a = strip(run_plan(&plan, &opts).unwrap());
    let b = strip(run_plan(&plan, &opts).unwrap());
    assert_eq!(a, b);
}
