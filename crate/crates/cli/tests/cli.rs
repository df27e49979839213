use std::io::Write;
use std::process::{Command, Output};

use delta_kernels::kernels::{Anchor, Cutoff, Family, Kernel, KernelSpec};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_delta-kernels"));
    c.env_remove("DELTA_KERNELS_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn config(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const BESSEL: &str = "family = bessel\nnu = 0\ntest_function = exp_decay\nanchor = 1\ncutoffs = 25, 50, 100, 200\n";

#[test]
fn kernel_eval_matches_library() {
    let o = run(&["kernel-eval", "--family", "bessel", "--nu", "0", "--a", "1", "--x", "2.5", "--R", "20"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split('\t').collect();
    let printed: f64 = row[4].parse().unwrap();
    let spec = KernelSpec::new(Family::BesselHankel { nu: 0.0 }, Cutoff::R(20.0), Anchor::Point(1.0));
    let direct = Kernel::new(spec).unwrap().eval(2.5).unwrap().value;
    assert_eq!(printed, direct);
    assert_eq!(row[5], "false");
}

#[test]
fn legendre_order_zero() {
    let o = run(&["kernel-eval", "--family", "legendre", "--n", "0", "--x", "0.3", "--t", "-0.4", "--t", "0.9"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let values: Vec<f64> = text.lines().skip(1).map(|l| l.split('\t').nth(4).unwrap().parse().unwrap()).collect();
    assert_eq!(values, vec![0.5, 0.5]);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["kernel-eval", "--family", "bessel", "--nu", "0", "--x", "1", "--R", "10"],
        vec!["kernel-eval", "--family", "airy", "--nu", "1", "--a", "0", "--x", "1", "--R", "10"],
        vec!["kernel-eval", "--family", "nonsense", "--a", "0", "--x", "1", "--R", "10"],
        vec!["selftest", "medium"],
        vec!["converge", "/nonexistent/config.txt"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn bad_config_exits_two() {
    for text in [
        "family = bessel\nnu = 0\ntest_function = exp_decay\nanchor = 1\ncutoffs = ,\n",
        "family = bessel\nnu = 0\ntest_function = exp_decay\nanchor = 1\ncutoffs = 50, 25\n",
        "family = weber\ntest_function = gauss\nanchor = 0\ncutoffs = 10\n",
    ] {
        let f = config(text);
        let o = run(&["converge", f.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{text}");
    }
}

#[test]
fn converge_json_rows() {
    let f = config(&format!("{BESSEL}timing = false\n"));
    let o = run(&["converge", f.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows: Vec<Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 4);
    let keys: Vec<&str> = rows[0].as_object().unwrap().keys().map(String::as_str).collect();
    let mut want = [
        "kernel_family",
        "params",
        "test_function",
        "anchor",
        "cutoff",
        "computed",
        "target",
        "abs_error",
        "wall_time_ms",
    ];
    want.sort_unstable();
    let mut got = keys.clone();
    got.sort_unstable();
    assert_eq!(got, want);
    let errors: Vec<f64> = rows.iter().map(|r| r["abs_error"].as_f64().unwrap()).collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
    assert!(rows.iter().all(|r| r["wall_time_ms"] == 0.0));
    assert_eq!(rows[2]["cutoff"], 100.0);
    assert_eq!(rows[0]["kernel_family"], "bessel");
}

#[test]
fn json_is_reproducible() {
    let f = config(&format!("{BESSEL}timing = false\n"));
    let path = f.path().to_str().unwrap();
    let first = run(&["converge", path]);
    let second = bin().env("DELTA_KERNELS_THREADS", "1").args(["converge", path]).output().unwrap();
    assert!(first.status.success() && second.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn csv_header_and_rows() {
    let f = config(&format!("{BESSEL}output = csv\n"));
    let o = run(&["converge", f.path().to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "kernel_family,params,test_function,anchor,cutoff,computed,target,abs_error,wall_time_ms"
    );
    assert_eq!(lines.count(), 4);
}

#[test]
fn series_config() {
    let f = config("family = legendre\ntest_function = cubic\nanchor = 0.3\ncutoffs = 1, 3, 8\ntiming = false\n");
    let o = run(&["converge", f.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows: Vec<Value> = serde_json::from_str(&stdout(&o)).unwrap();
    let last = rows.last().unwrap()["abs_error"].as_f64().unwrap();
    assert!(last < 1e-12, "{last}");
}

#[test]
fn bad_thread_count_exits_two() {
    let o = bin().env("DELTA_KERNELS_THREADS", "0").args(["selftest", "fast"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_asymptotics_report() {
    let o = run(&["validate-asymptotics", "--family", "bessel", "--param", "1", "--t-lo", "20", "--t-hi", "200"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let slope = report["fitted_exponent"].as_f64().unwrap();
    assert!((slope + 1.0).abs() < 0.3, "{slope}");
}

#[test]
fn rl_check_decays() {
    let o = run(&["rl-check", "--psi", "ramp", "--wave", "sin", "--phase", "linear", "--R", "10,40,160"]);
    assert!(o.status.success());
    let rows: Vec<Value> = serde_json::from_str(&stdout(&o)).unwrap();
    let v: Vec<f64> = rows.iter().map(|r| r["value"].as_f64().unwrap().abs()).collect();
    assert!(v[2] < v[0], "{v:?}");
}

#[test]
fn selftest_fast_passes() {
    let o = run(&["selftest", "fast"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("suites passed"));
}

#[test]
fn perturbed_airy_is_caught() {
    let o = run(&["selftest", "fast", "--perturb-airy"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("FAIL") && l.contains("oracle")), "{text}");
}
