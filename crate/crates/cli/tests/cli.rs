use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn hsbar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsbar")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn product() -> String {
    fixture("three_antecedent_product.json").display().to_string()
}

#[test]
fn flat_inference_prints_exact_values() {
    let o = hsbar(&["infer", &product(), "--method", "flat"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("s = 10/63"), "{s}");
    assert!(s.contains("S_F(A'_1,A_1) = 5/9"));
    for y in ["y1", "y2", "y3", "y4"] {
        assert!(s.contains(&format!("  {y}: 1\n")));
    }
    assert!(s.contains("differs: sup A: reference [0.324], recomputed [0.36]"));
}

#[test]
fn hierarchical_counts_are_itemized() {
    let o = hsbar(&["infer", &product(), "--method", "hier1", "--count"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let rows: Vec<&str> = s
        .lines()
        .skip_while(|l| *l != "operation counts:")
        .skip(1)
        .take(10)
        .collect();
    let counts: Vec<u64> = rows.iter().map(|l| l.rsplit(": ").next().unwrap().parse().unwrap()).collect();
    assert_eq!(counts, [15, 19, 11, 3, 4, 2, 8, 8, 8, 78]);
    assert!(s.contains("reference 68, recomputed 78"));
}

#[test]
fn output_is_deterministic() {
    let a = hsbar(&["--json", "infer", &product(), "--count", "--verbose"]);
    let b = hsbar(&["--json", "infer", &product(), "--count", "--verbose"]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["similarity"], "10/63");
    assert_eq!(v["counts"]["total"], 194);
}

#[test]
fn mismatched_sizes_exit_one_naming_the_set() {
    let o = hsbar(&["infer", &fixture("mismatched_sizes.json").display().to_string()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("'A1''"));
}

#[test]
fn syntax_errors_report_the_line() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{{\n  \"universes\": [\n  }}").unwrap();
    let o = hsbar(&["infer", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn semantic_and_explosion_exit_codes() {
    let o = hsbar(&["infer", &product(), "--method", "hier2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hsbar(&["--cap", "10", "infer", &product()]);
    assert_eq!(o.status.code(), Some(3));
    let text = std::fs::read_to_string(product()).unwrap().replace("\"goguen\"", "\"lukasiewicz\"");
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    let o = hsbar(&["infer", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn normalized_dump_round_trips() {
    let o = hsbar(&["infer", &product(), "--dump-normalized"]);
    assert!(o.status.success());
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(&o.stdout).unwrap();
    let again = hsbar(&["infer", f.path().to_str().unwrap(), "--dump-normalized"]);
    assert_eq!(o.stdout, again.stdout);
    let orig = hsbar(&["infer", &product()]);
    let reparsed = hsbar(&["infer", f.path().to_str().unwrap()]);
    assert_eq!(orig.stdout, reparsed.stdout);
}

#[test]
fn validate_ref_reports_each_axiom() {
    let o = hsbar(&["validate-ref", "--ref", "catalog:F2", "--step", "0.05"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("verdict: pass"));
    let o = hsbar(&["--json", "validate-ref", "--ref", "composed:product:goguen"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["is_ref"], false);
    let o = hsbar(&["validate-ref", "--ref", "composed:nonsense"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn check_eq_prints_counterexample() {
    let o = hsbar(&["check-eq", "--eq", "eq3", "--tnorm", "nilpotent-minimum", "--step", "0.1"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("counterexample ("), "{s}");
    assert!(s.contains("verdict: fails"));
    let o = hsbar(&[
        "--json", "check-eq", "--eq", "distributivity", "--tnorm", "lukasiewicz", "--a1", "0.9,0.6,0.7", "--a2",
        "0.4,0.6,0.5,0.3", "--a1-prime", "1,0.5,0.8", "--a2-prime", "0.5,0.3,0.4,0.2",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["relation"], "greater");
}

#[test]
fn bench_emits_csv() {
    let o = hsbar(&["bench", "--sweep", "n=1..3", "u=3", "m=4", "--trials", "1"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("arm,n,u,m,ops,wall_ns\nflat,1,3,4,43,"), "{s}");
    assert_eq!(s.lines().count(), 1 + 3 * 4);
    let o = hsbar(&["bench", "--sweep", "u=3"]);
    assert_eq!(o.status.code(), Some(1));
}
