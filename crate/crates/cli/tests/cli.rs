use std::path::Path;
use std::process::{Command, Output};

use alnrepair_core::fixtures::{f1, f1_m1};
use alnrepair_core::io::{write_alignment, write_ontology};
use alnrepair_core::Alignment;
use serde_json::Value;
use tempfile::TempDir;

fn alnrepair(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alnrepair"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

fn f1_files() -> TempDir {
    let dir = TempDir::new().unwrap();
    let (o1, o2, al) = f1();
    std::fs::write(dir.path().join("o1.txt"), write_ontology(&o1)).unwrap();
    std::fs::write(dir.path().join("o2.txt"), write_ontology(&o2)).unwrap();
    std::fs::write(dir.path().join("al.tsv"), write_alignment(&al)).unwrap();
    dir
}

fn inputs(dir: &TempDir) -> Vec<String> {
    [
        "--onto1",
        &p(dir, "o1.txt"),
        "--onto2",
        &p(dir, "o2.txt"),
        "--align",
        &p(dir, "al.tsv"),
    ]
    .map(String::from)
    .to_vec()
}

fn run_with(cmd: &str, dir: &TempDir, extra: &[&str]) -> Output {
    let mut args = vec![cmd.to_owned()];
    args.extend(inputs(dir));
    args.extend(extra.iter().map(|s| s.to_string()));
    alnrepair(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

#[test]
fn repair_f1_keeps_only_the_equivalence() {
    let dir = f1_files();
    let (out, report) = (p(&dir, "out.tsv"), p(&dir, "report.json"));
    stdout(&run_with("repair", &dir, &["--out", &out, "--report", &report]));
    let kept = std::fs::read_to_string(&out).unwrap();
    assert_eq!(kept, write_alignment(&Alignment::new(vec![f1_m1()]).unwrap()));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["repair"]["removed"], 1);
    assert_eq!(r["incoherent_before"], 2);
    assert_eq!(r["incoherent_after"], 0);
    assert_eq!(r["repair"]["removed_mappings"][0]["cause"], "greedy");
    assert!(r.get("timings").is_none());
}

#[test]
fn repair_prints_report_and_timings_on_request() {
    let dir = f1_files();
    let text = stdout(&run_with("repair", &dir, &["--out", &p(&dir, "out.tsv"), "--timings"]));
    let r: Value = serde_json::from_str(&text).unwrap();
    assert!(r["timings"]["total_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn repair_with_filter_tags_filtered_removals() {
    let dir = f1_files();
    let text = stdout(&run_with(
        "repair",
        &dir,
        &["--out", &p(&dir, "out.tsv"), "--epsilon", "0.1"],
    ));
    let r: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(r["repair"]["removed_filtered"], 1);
    assert_eq!(r["repair"]["config"]["epsilon"], 0.1);
}

#[test]
fn check_f1_prints_two() {
    let dir = f1_files();
    let text = stdout(&run_with("check", &dir, &[]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, ["2", "A1", "A2"]);
}

#[test]
fn fragments_and_conflicts_emit_json() {
    let dir = f1_files();
    let f: Value = serde_json::from_str(&stdout(&run_with("fragments", &dir, &[]))).unwrap();
    assert_eq!(f["fragments"]["core_classes"], 4);
    assert_eq!(f["fragments"]["core_percent"], 66.7);
    let c: Value = serde_json::from_str(&stdout(&run_with("conflicts", &dir, &[]))).unwrap();
    assert_eq!(c["conflicts"]["conflict_sets"], 1);
    assert_eq!(c["conflicts"]["clusters"], 1);
    assert_eq!(c["sets"][0]["mappings"], serde_json::json!(["A1 = A2", "C1 > A2"]));
}

#[test]
fn eval_against_itself_is_perfect() {
    let dir = f1_files();
    let al = p(&dir, "al.tsv");
    let text = stdout(&alnrepair(&["eval", "--produced", &al, "--reference", &al]));
    let r: Value = serde_json::from_str(&text).unwrap();
    for key in ["precision", "recall", "f_measure"] {
        assert_eq!(r[key], 1.0);
    }
    assert!(r["incoherent_count"].is_null());
}

#[test]
fn eval_with_ontologies_counts_incoherence_and_removals() {
    let dir = f1_files();
    let out = p(&dir, "out.tsv");
    stdout(&run_with(
        "repair",
        &dir,
        &["--out", &out, "--report", &p(&dir, "r.json")],
    ));
    let (al, o1, o2) = (p(&dir, "al.tsv"), p(&dir, "o1.txt"), p(&dir, "o2.txt"));
    let text = stdout(&alnrepair(&[
        "eval",
        "--produced",
        &out,
        "--reference",
        &al,
        "--onto1",
        &o1,
        "--onto2",
        &o2,
        "--input",
        &al,
    ]));
    let r: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(r["precision"], 1.0);
    assert_eq!(r["recall"], 0.5);
    assert_eq!(r["incoherent_count"], 0);
    assert_eq!(r["removed_count"], 1);
}

#[test]
fn generated_instance_repairs_to_coherence() {
    let dir = TempDir::new().unwrap();
    let gen = p(&dir, "inst");
    stdout(&alnrepair(&[
        "gen",
        "--classes",
        "30",
        "--mappings",
        "10",
        "--disjoints",
        "4",
        "--noise",
        "0.3",
        "--seed",
        "3",
        "--out-dir",
        &gen,
    ]));
    for f in ["onto1.txt", "onto2.txt", "align.tsv", "reference.tsv"] {
        assert!(Path::new(&gen).join(f).exists());
    }
    let file = |f: &str| format!("{gen}/{f}");
    let out = p(&dir, "out.tsv");
    let report = stdout(&alnrepair(&[
        "repair",
        "--onto1",
        &file("onto1.txt"),
        "--onto2",
        &file("onto2.txt"),
        "--align",
        &file("align.tsv"),
        "--out",
        &out,
    ]));
    let r: Value = serde_json::from_str(&report).unwrap();
    assert!(r["repair"]["removed"].as_u64().unwrap() >= 1);
    let check = stdout(&alnrepair(&[
        "check",
        "--onto1",
        &file("onto1.txt"),
        "--onto2",
        &file("onto2.txt"),
        "--align",
        &out,
    ]));
    assert_eq!(check, "0\n");
}

#[test]
fn errors_exit_nonzero_with_a_diagnostic() {
    let dir = f1_files();
    let missing = alnrepair(&["check", "--onto1", "/nonexistent", "--onto2", "x", "--align", "y"]);
    assert!(!missing.status.success());
    assert!(String::from_utf8_lossy(&missing.stderr).contains("/nonexistent"));

    let unknown = run_with("check", &dir, &["--bogus"]);
    assert!(!unknown.status.success());

    std::fs::write(dir.path().join("bad.txt"), "CLASS a\nDISJOINT a a\n").unwrap();
    let bad = alnrepair(&[
        "check",
        "--onto1",
        &p(&dir, "bad.txt"),
        "--onto2",
        &p(&dir, "o2.txt"),
        "--align",
        &p(&dir, "al.tsv"),
    ]);
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error:"));

    std::fs::write(dir.path().join("bad.tsv"), "A1\tA2\t=\t1.5\n").unwrap();
    let out = p(&dir, "o.tsv");
    let bad = alnrepair(&[
        "repair",
        "--onto1",
        &p(&dir, "o1.txt"),
        "--onto2",
        &p(&dir, "o2.txt"),
        "--align",
        &p(&dir, "bad.tsv"),
        "--out",
        &out,
    ]);
    assert!(!bad.status.success());
    assert!(!Path::new(&out).exists());
}
