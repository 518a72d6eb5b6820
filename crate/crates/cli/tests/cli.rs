use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use boxproj_core::brute_force_project;
use tempfile::TempDir;

fn boxproj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boxproj"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_values(path: &Path) -> Vec<f64> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.parse().unwrap())
        .collect()
}

fn read_table(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn project_worked_example_matches_brute_force() {
    let dir = TempDir::new().unwrap();
    let v = write(&dir, "v.csv", "0.9\n0.5\n0.3\n");
    let b = write(&dir, "b.csv", "bound\n0.4\n0.4\n0.4\n");
    let out = dir.path().join("x.csv");
    let run = boxproj(&["project", "--input", s(&v), "--upper", s(&b), "--z", "1", "--nonnegative", "--out", s(&out)]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let x = read_values(&out);
    let expected = brute_force_project(&[0.9, 0.5, 0.3], &[0.4, 0.4, 0.4], 1.0).unwrap();
    for (a, e) in x.iter().zip(&expected) {
        assert!((a - e).abs() < 1e-12);
    }
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.contains("theta*"));
    assert!(stdout.contains("wall time"));
}

#[test]
fn inactive_budget_returns_clamped_input() {
    let dir = TempDir::new().unwrap();
    let v = write(&dir, "v.csv", "0.9\n-2\n0.3\n");
    let lo = write(&dir, "lo.csv", "-1\n-1\n-1\n");
    let hi = write(&dir, "hi.csv", "0.5\n0.5\n0.5\n");
    let out = dir.path().join("x.csv");
    let run = boxproj(&["project", "--input", s(&v), "--lower", s(&lo), "--upper", s(&hi), "--z", "5", "--out", s(&out)]);
    assert!(run.status.success());
    assert_eq!(read_values(&out), [0.5, -1.0, 0.3]);
}

#[test]
fn project_is_idempotent_on_its_own_output() {
    let dir = TempDir::new().unwrap();
    let v = write(&dir, "v.csv", "0.31\n-1.7\n0.02\n2.4\n-0.5\n1.1\n");
    let hi = write(&dir, "hi.csv", "1\n1\n1\n1\n1\n1\n");
    let first = dir.path().join("x1.csv");
    let second = dir.path().join("x2.csv");
    let args = |input: &Path, out: &Path| {
        boxproj(&["project", "--input", s(input), "--upper", s(&hi), "--z", "2.5", "--out", s(out)])
    };
    assert!(args(&v, &first).status.success());
    assert!(args(&first, &second).status.success());
    let (x1, x2) = (read_values(&first), read_values(&second));
    for (a, b) in x1.iter().zip(&x2) {
        assert!((a - b).abs() <= 1e-12, "{x1:?} vs {x2:?}");
    }
}

#[test]
fn error_exit_codes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.csv");
    let v = write(&dir, "v.csv", "1\n2\n");

    let bad = write(&dir, "bad.csv", "1\nabc\n3\n");
    let run = boxproj(&["project", "--input", s(&bad), "--z", "1", "--out", s(&out)]);
    assert_eq!(run.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&run.stderr).contains(":2:"));

    let short = write(&dir, "short.csv", "1\n");
    let run = boxproj(&["project", "--input", s(&v), "--upper", s(&short), "--z", "1", "--out", s(&out)]);
    assert_eq!(run.status.code(), Some(4));

    let lo = write(&dir, "lo.csv", "1\n1\n");
    let run = boxproj(&["project", "--input", s(&v), "--lower", s(&lo), "--z", "1", "--out", s(&out)]);
    assert_eq!(run.status.code(), Some(5));

    let missing = dir.path().join("missing.csv");
    let run = boxproj(&["project", "--input", s(&missing), "--z", "1", "--out", s(&out)]);
    assert_eq!(run.status.code(), Some(6));

    let run = boxproj(&["project", "--input", s(&v), "--out", s(&out)]);
    assert_eq!(run.status.code(), Some(2));
}

#[test]
fn bench_rejects_zero_reps_and_sorts_sizes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("bench.csv");
    let run = boxproj(&["bench", "--sizes", "100", "--reps", "0", "--out", s(&out)]);
    assert_eq!(run.status.code(), Some(2));

    let run = boxproj(&["bench", "--sizes", "500,10,100", "--reps", "3", "--seed", "1", "--out", s(&out)]);
    assert!(run.status.success());
    let (header, rows) = read_table(&out);
    assert_eq!(header, ["n", "method", "mean_time", "std_time"]);
    let sizes: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(sizes, ["10", "10", "100", "100", "500", "500"]);
    assert!(rows.iter().all(|r| r[2].parse::<f64>().unwrap() >= 0.0));
}

#[test]
fn logistic_demo_writes_trace_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |out: &Path| {
        boxproj(&["demo-logistic", "--n", "10", "--m", "60", "--iters", "20", "--seed", "3", "--out", s(out)])
    };
    assert!(args(&a).status.success());
    assert!(args(&b).status.success());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let (header, rows) = read_table(&a);
    assert_eq!(header, ["iter", "f_L1", "f_UBL1"]);
    assert_eq!(rows.len(), 21);
}

#[test]
fn logistic_demo_zero_budget_is_flat() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("trace.csv");
    let run = boxproj(&["demo-logistic", "--n", "6", "--m", "40", "--iters", "5", "--z-fraction", "0", "--out", s(&out)]);
    assert!(run.status.success());
    let (_, rows) = read_table(&out);
    for row in rows {
        for f in &row[1..] {
            assert!((f.parse::<f64>().unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
        }
    }
}

fn allocation(dir: &TempDir, v: &str, prior: &str, ratio: &str) -> (Output, PathBuf) {
    let pv = write(dir, "v.csv", v);
    let pp = write(dir, "p.csv", prior);
    let out = dir.path().join("alloc.csv");
    let run = boxproj(&["demo-allocation", "--production", s(&pv), "--prior", s(&pp), "--ratio", ratio, "--out", s(&out)]);
    (run, out)
}

fn columns(path: &Path) -> Vec<[f64; 4]> {
    let (header, rows) = read_table(path);
    assert_eq!(header, ["unit", "v", "b", "x_L1", "x_UBL1"]);
    rows.iter()
        .map(|r| [1, 2, 3, 4].map(|k| r[k].parse().unwrap()))
        .collect()
}

#[test]
fn allocation_with_proportional_prior_agrees_up_to_clipping() {
    let dir = TempDir::new().unwrap();
    let (run, out) = allocation(&dir, "5\n3\n1\n8\n", "10\n6\n2\n16\n", "60");
    assert!(run.status.success());
    for [v, b, l1, ub] in columns(&out) {
        assert!((b - v).abs() < 1e-12);
        assert!((ub - l1.min(b)).abs() < 1e-12);
    }
}

#[test]
fn allocation_at_full_ratio_with_slack_returns_the_bounds() {
    let dir = TempDir::new().unwrap();
    let (run, out) = allocation(&dir, "4\n1\n", "1\n10\n", "100");
    assert!(run.status.success());
    for [v, b, _, ub] in columns(&out) {
        assert_eq!(ub, v.min(b));
    }
}

#[test]
fn allocation_rejects_bad_input() {
    let dir = TempDir::new().unwrap();
    assert_eq!(allocation(&dir, "1\n-2\n", "1\n1\n", "50").0.status.code(), Some(4));
    assert_eq!(allocation(&dir, "1\n2\n", "1\n", "50").0.status.code(), Some(4));
    assert_eq!(allocation(&dir, "1\n2\n", "1\n1\n", "0").0.status.code(), Some(4));
    assert_eq!(allocation(&dir, "1\n2\n", "1\n1\n", "101").0.status.code(), Some(4));
}

#[test]
fn shipped_allocation_instance_shows_the_contrast() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("alloc.csv");
    let run = boxproj(&[
        "demo-allocation",
        "--production",
        s(&data.join("production.csv")),
        "--prior",
        s(&data.join("prior.csv")),
        "--ratio",
        "50",
        "--out",
        s(&out),
    ]);
    assert!(run.status.success());
    let rows = columns(&out);
    assert_eq!(rows.len(), 40);
    // Unit 18: small production, large prior.
    let [v, _, l1, ub] = rows[17];
    assert_eq!(v, 16.0);
    assert_eq!(l1, 0.0);
    assert!(ub > 0.0);
}
