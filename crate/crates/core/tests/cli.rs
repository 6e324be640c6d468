use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use permcheck::cli::{
    cmd_check, cmd_lemmas, cmd_perm, cmd_search, cmd_selftest, cmd_trace, format_permanent, AnyTrace, CheckOptions,
    Form, LemmaOptions, Mutation, RunReport, TraceInput,
};
use permcheck::inequality::DEFAULT_TOL;
use permcheck::io::{parse_matrix_str, AnyMatrix, MatrixFile, Mode};
use permcheck::permanent::Engine;
use permcheck::proof4x4::{CaseLabel, Verdict};
use permcheck::search::SearchConfig;
use permcheck::{GaussRat, Scalar, SquareMatrix};
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_permcheck"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_matrix<S: Scalar>(dir: &Path, name: &str, m: &SquareMatrix<S>) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(&MatrixFile::from_matrix(m)).unwrap()).unwrap();
    path
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// Report with the wall-clock field removed.
fn stable(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wallTimeMs");
    v
}

fn check_opts(n: usize, trials: u64, seed: u64, form: Form) -> CheckOptions {
    CheckOptions {
        n,
        trials,
        seed,
        tol: DEFAULT_TOL,
        form,
        mode: Mode::Float,
    }
}

#[test]
fn perm_prints_exact_and_float_values() {
    let dir = TempDir::new().unwrap();
    let i4 = write_matrix(dir.path(), "i4.json", &SquareMatrix::<GaussRat>::identity(4));
    let j4 = write_matrix(dir.path(), "j4.json", &SquareMatrix::<num_complex::Complex64>::ones(4));
    let out = run(&["perm", i4.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1");
    let out = run(&["perm", j4.to_str().unwrap(), "--engine", "naive"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "24");
}

#[test]
fn perm_engines_print_identically_on_rational_files() {
    let dir = TempDir::new().unwrap();
    let m = permcheck::fixtures::random_exact_matrix(6, 4);
    let path = write_matrix(dir.path(), "m.json", &m);
    let outputs: Vec<_> = ["naive", "ryser", "auto"]
        .iter()
        .map(|e| run(&["perm", path.to_str().unwrap(), "--engine", e]).stdout)
        .collect();
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[1], outputs[2]);
    assert!(String::from_utf8_lossy(&outputs[0]).contains('/'));
}

#[test]
fn perm_rejects_bad_files() {
    let dir = TempDir::new().unwrap();
    let ragged = dir.path().join("ragged.json");
    std::fs::write(&ragged, r#"{"n":2,"mode":"float","entries":[[[1,0],[0,0]],[[0,0]]]}"#).unwrap();
    assert_eq!(run(&["perm", ragged.to_str().unwrap()]).status.code(), Some(2));
    let zero_den = dir.path().join("zero.json");
    std::fs::write(&zero_den, r#"{"n":1,"mode":"rational","entries":[[["1/0","0"]]]}"#).unwrap();
    assert_eq!(run(&["perm", zero_den.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["perm", "/nonexistent/file.json"]).status.code(), Some(2));
}

#[test]
fn float_permanent_formatting() {
    let m = parse_matrix_str(r#"{"n":2,"mode":"float","entries":[[[0.5,0],[0.25,0]],[[1,0],[0.5,0]]]}"#).unwrap();
    let v = cmd_perm(&m, Engine::Auto).unwrap();
    assert_eq!(format_permanent(&v), "0.5");
    let m = parse_matrix_str(r#"{"n":1,"mode":"float","entries":[[[0.1,-2]]]}"#).unwrap();
    assert_eq!(format_permanent(&cmd_perm(&m, Engine::Naive).unwrap()), "0.1 - 2i");
}

#[test]
fn check_theorem_region_exits_zero() {
    let out = run(&["check", "--n", "4", "--trials", "1000", "--seed", "7", "--form", "reduced"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
    assert_eq!(v["theoremRegion"], Value::Bool(true));
    assert_eq!(v["suites"][0]["checks"], 1000);

    let out = run(&["check", "--n", "2", "--trials", "1000"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn check_guards_dimension() {
    for n in ["1", "7", "9"] {
        assert_eq!(run(&["check", "--n", n]).status.code(), Some(2), "n = {n}");
    }
    assert_eq!(run(&["check", "--form", "triple"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--tol", "-1"]).status.code(), Some(2));
}

#[test]
fn check_pair_and_rational_modes() {
    for n in 2..=6 {
        let r = cmd_check(&check_opts(n, 60, 3, Form::Pair)).unwrap();
        assert_eq!(r.exit_code(), 0);
        assert_eq!(r.theorem_region, n <= 4);
    }
    let mut opts = check_opts(4, 40, 5, Form::Reduced);
    opts.mode = Mode::Rational;
    let r = cmd_check(&opts).unwrap();
    assert_eq!(r.tol, 0.0);
    assert_eq!(r.suite("chollet-reduced").unwrap().failures, 0);
    opts.form = Form::Pair;
    opts.n = 3;
    assert_eq!(cmd_check(&opts).unwrap().exit_code(), 0);
}

#[test]
fn check_min_margin_is_monotone_in_trial_count() {
    let short = cmd_check(&check_opts(5, 200, 11, Form::Reduced)).unwrap();
    let long = cmd_check(&check_opts(5, 600, 11, Form::Reduced)).unwrap();
    let a = short.suites[0].min_margin.unwrap();
    let b = long.suites[0].min_margin.unwrap();
    assert!(b <= a);
    if b == a {
        assert_eq!(short.suites[0].min_margin_trial, long.suites[0].min_margin_trial);
    }
}

#[test]
fn check_output_does_not_depend_on_thread_count() {
    let args = ["check", "--n", "5", "--trials", "300", "--seed", "19", "--form", "pair"];
    let one = bin().args(args).env("PERMCHECK_THREADS", "1").output().unwrap();
    let four = bin().args(args).env("PERMCHECK_THREADS", "4").output().unwrap();
    assert_eq!(stable(json(&one)), stable(json(&four)));
}

#[test]
fn out_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["check", "--n", "3", "--trials", "50", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["trials"], 50);
}

#[test]
fn trace_landmarks() {
    let i4 = AnyMatrix::Rational(SquareMatrix::identity(4));
    let r = cmd_trace(&TraceInput::Matrix(i4), DEFAULT_TOL).unwrap();
    let AnyTrace::Rational(t) = &r.trace else { panic!("rational input gives a rational trace") };
    assert_eq!(t.case_label, CaseLabel::Case1);
    assert_eq!(t.verdict, Verdict::Verified);
    assert_eq!(r.exit_code(), 0);

    let dir = TempDir::new().unwrap();
    let j4 = write_matrix(dir.path(), "j4.json", &SquareMatrix::<GaussRat>::ones(4));
    let out = run(&["trace", j4.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["caseLabel"], "Case1");
    assert_eq!(v["verdict"], "verified");
    let links = v["links"].as_array().unwrap();
    assert_eq!(links.last().unwrap()["margin"], "552");
}

#[test]
fn trace_sample_is_deterministic() {
    let a = run(&["trace", "--sample", "42"]);
    let b = run(&["trace", "--sample", "42"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let exact = run(&["trace", "--sample", "42", "--mode", "rational"]);
    assert_eq!(exact.status.code(), Some(0));
    assert_eq!(json(&exact)["verdict"], "verified");
}

#[test]
fn trace_rejects_invalid_input() {
    let dir = TempDir::new().unwrap();
    let mut not_psd = SquareMatrix::<GaussRat>::identity(4);
    not_psd.set(0, 1, GaussRat::from_ratios(2, 1, 0, 1));
    not_psd.set(1, 0, GaussRat::from_ratios(2, 1, 0, 1));
    let mut bad_diag = SquareMatrix::<GaussRat>::identity(4);
    bad_diag.set(2, 2, GaussRat::from_ratios(2, 1, 0, 1));
    for (name, m) in [("psd.json", not_psd), ("diag.json", bad_diag), ("i3.json", SquareMatrix::identity(3))] {
        let path = write_matrix(dir.path(), name, &m);
        assert_eq!(run(&["trace", path.to_str().unwrap()]).status.code(), Some(2), "{name}");
    }
    assert_eq!(run(&["trace"]).status.code(), Some(2));
}

#[test]
fn lemmas_suites_pass() {
    let r = cmd_lemmas(&LemmaOptions {
        n: 4,
        trials: 1000,
        seed: 0,
        tol: DEFAULT_TOL,
    })
    .unwrap();
    assert_eq!(r.exit_code(), 0);
    let names: Vec<_> = r.suites.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names, ["lieb", "grone-pierce", "lemma1", "lemma2", "lemma3"]);
    assert!(r.suites.iter().all(|s| s.failures == 0 && s.checks > 0));
    assert_eq!(r.suite("lieb").unwrap().checks, 6000);

    let out = run(&["lemmas", "--n", "6", "--trials", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let v: RunReportView = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.suites.len(), 2);

    assert_eq!(run(&["lemmas", "--n", "1"]).status.code(), Some(2));
}

#[derive(serde::Deserialize)]
struct RunReportView {
    suites: Vec<Value>,
}

#[test]
fn search_cli_is_reproducible() {
    let args = ["search", "--n", "4", "--iterations", "10000", "--seed", "1"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let ratio = json(&a)["bestRatio"].as_f64().unwrap();
    assert!(ratio <= 1.0 + 1e-9);

    let two = cmd_search(&SearchConfig::new(2, 2000, 2, 0)).unwrap();
    assert!(two.best_ratio > 0.999);
    assert_eq!(run(&["search", "--n", "7"]).status.code(), Some(2));
}

#[test]
fn selftest_passes_and_catches_mutation() {
    let out = run(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    let again = run(&["selftest"]);
    assert_eq!(out.stdout, again.stdout);
    assert!(String::from_utf8_lossy(&out.stdout).contains("expansions: 100/100"));

    let broken = cmd_selftest(Mutation::FlipY2Sign);
    assert!(!broken.all_passed());
    let expansions = &broken.suites[0];
    assert_eq!(expansions.name, "expansions");
    assert!(expansions.passed < expansions.total);
    assert!(broken.suites[1..].iter().all(|s| s.passed == s.total));
    assert_eq!(run(&["selftest", "--mutate", "flip-y2-sign"]).status.code(), Some(1));
}

#[test]
fn reports_serialize_round_trip() {
    let r: RunReport = cmd_check(&check_opts(3, 20, 1, Form::Reduced)).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    for key in ["command", "seed", "trials", "violations", "suites", "wallTimeMs"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert!(v["command"].as_str().unwrap().starts_with("check --n 3"));
}
