use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ivmap_core::branch::DEFAULT_BRANCH_CAP;
use ivmap_core::{verify_type, MapDocument};
use serde_json::Value;

fn ivmap(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ivmap"))
        .args(args)
        .current_dir(dir)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .env_remove("IVMAP_BRANCH_CAP")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn construct(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut all = vec!["construct"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", name]);
    let o = ivmap(dir, &all);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    path
}

fn json_stdout(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn construct_writes_canonical_documents() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct(dir.path(), "f52.json", &["--p", "5", "--lambda", "2"]);
    let text = std::fs::read_to_string(&path).unwrap();
    let doc = MapDocument::from_json(&text).unwrap();
    assert_eq!(doc.format, "interval-map/1");
    assert_eq!(doc.map.breakpoints.len(), 7);
    assert_eq!(doc.to_json(), text);
    assert_eq!(doc.provenance.created_unix, 1_700_000_000);

    let g = construct(dir.path(), "g.json", &["--p", "3", "--d", "1", "--lambda", "2"]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(g).unwrap()).unwrap();
    assert_eq!(v["claims"]["type"], "6");
    assert_eq!(v["claims"]["entropy"], "(log 2)/2");

    // same input, same bytes
    let again = construct(dir.path(), "again.json", &["--p", "5", "--lambda", "2"]);
    assert_eq!(std::fs::read(again).unwrap(), text.as_bytes());
}

#[test]
fn construct_rejects_bad_lambdas() {
    let dir = tempfile::tempdir().unwrap();
    let o = ivmap(dir.path(), &["construct", "--p", "3", "--lambda", "1"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("1.618033988749"), "{}", stderr(&o));

    let o = ivmap(dir.path(), &["construct", "--p", "3", "--lambda", "1.7"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("floating mode"));

    let o = ivmap(dir.path(), &["construct", "--p", "3", "--lambda", "1.7", "--mode", "float"]);
    assert_eq!(code(&o), 0);
    let doc = MapDocument::from_json(&String::from_utf8_lossy(&o.stdout)).unwrap();
    assert_eq!(doc.params.mode, "float");

    let o = ivmap(dir.path(), &["construct", "--p", "4", "--lambda", "2"]);
    assert_eq!(code(&o), 1);
    let o = ivmap(dir.path(), &["construct", "--lambda", "2"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn lambda_p_keyword() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct(dir.path(), "l5.json", &["--p", "5", "--lambda", "lambda_p"]);
    let doc = MapDocument::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(doc.params.mode, "float");
    assert!((doc.params.lambda.to_f64() - 1.5128).abs() < 1e-3);
}

#[test]
fn analyze_type_matches_in_memory_results() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct(dir.path(), "f52.json", &["--p", "5", "--lambda", "2"]);
    let o = ivmap(dir.path(), &["analyze", "f52.json", "--type", "13"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json_stdout(&o);
    assert_eq!(r["status"], "consistent");
    assert_eq!(r["type"]["verdict"], "consistent");
    assert_eq!(r["type"]["absent"], serde_json::json!([3]));

    let doc = MapDocument::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
    let f = doc.to_plmap().unwrap();
    let mem = verify_type(&f, doc.claimed_type(), 13, doc.partition(), DEFAULT_BRANCH_CAP).unwrap();
    assert_eq!(r["type"], serde_json::to_value(&mem).unwrap());
}

#[test]
fn analyze_entropy_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    construct(dir.path(), "f32.json", &["--p", "3", "--lambda", "2"]);
    let o = ivmap(dir.path(), &["analyze", "f32.json", "--entropy", "14", "--csv", "laps.csv"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json_stdout(&o);
    assert!(r["entropy"]["gap"].as_f64().unwrap() < 0.02);
    assert_eq!(r["entropy"]["pass"], true);
    let csv = std::fs::read_to_string(dir.path().join("laps.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,lap_count,log_ratio");
    assert_eq!(lines[1], "1,4,");
    assert_eq!(lines.len(), 15);

    let o = ivmap(dir.path(), &["analyze", "f32.json", "--csv", "laps.csv", "--type", "3"]);
    assert_eq!(code(&o), 1);
    let o = ivmap(dir.path(), &["analyze", "f32.json"]);
    assert_eq!(code(&o), 1);
    let o = ivmap(dir.path(), &["analyze", "missing.json", "--type", "3"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn analyze_graph_and_mixing() {
    let dir = tempfile::tempdir().unwrap();
    construct(dir.path(), "f52.json", &["--p", "5", "--lambda", "2"]);
    let o = ivmap(dir.path(), &["analyze", "f52.json", "--graph", "f52.dot", "--mixing", "1/1024", "64", "200"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let dot = std::fs::read_to_string(dir.path().join("f52.dot")).unwrap();
    assert_eq!(dot.matches("[label=").count(), 6);
    assert_eq!(dot.matches("style=solid").count(), 9);
    assert_eq!(dot.matches("style=dashed").count(), 1);
    let r = json_stdout(&o);
    assert_eq!(r["graph"]["partial"], 1);
    assert_eq!(r["graph"]["census"]["3"], 0);
    assert_eq!(r["mixing"]["all_mixed"], true);

    construct(dir.path(), "g.json", &["--p", "3", "--d", "1", "--lambda", "2"]);
    let o = ivmap(dir.path(), &["analyze", "g.json", "--graph", "g.dot"]);
    assert_eq!(code(&o), 1);
    // a square root swaps its two outer blocks, so it is not mixing
    let o = ivmap(dir.path(), &["analyze", "g.json", "--mixing", "1/64", "4", "50"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn refuted_and_inconclusive_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct(dir.path(), "f32.json", &["--p", "3", "--lambda", "2"]);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["claims"]["type"] = "5".into();
    std::fs::write(dir.path().join("wrong.json"), v.to_string()).unwrap();
    let o = ivmap(dir.path(), &["analyze", "wrong.json", "--type", "7"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("witness"), "{}", stderr(&o));
    assert_eq!(json_stdout(&o)["status"], "refuted");

    let o = Command::new(env!("CARGO_BIN_EXE_ivmap"))
        .args(["analyze", "f32.json", "--type", "13"])
        .current_dir(dir.path())
        .env("IVMAP_BRANCH_CAP", "50")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    assert_eq!(json_stdout(&o)["status"], "inconclusive");
    let o = ivmap(dir.path(), &["analyze", "f32.json", "--entropy", "14", "--cap", "50"]);
    assert_eq!(code(&o), 3);
}

fn read_rows(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        ["p", "d", "lambda", "h_target", "h_estimate", "type_verdict", "mixing_max_n"]
    );
    r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect()
}

#[test]
fn sweep_grid_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str, workers: &'static str| {
        vec!["sweep", "--p", "3,5,7", "--d", "0", "--lambda", "2", "--type", "11", "--entropy", "12", "--out-dir", out, "--workers", workers]
    };
    let o = ivmap(dir.path(), &args("seq", "1"));
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = ivmap(dir.path(), &args("par", "3"));
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let seq = std::fs::read(dir.path().join("seq/summary.csv")).unwrap();
    let par = std::fs::read(dir.path().join("par/summary.csv")).unwrap();
    assert_eq!(seq, par);
    let rows = read_rows(&dir.path().join("seq/summary.csv"));
    assert_eq!(rows.len(), 3);
    assert_eq!(rows.iter().map(|r| r[0].as_str()).collect::<Vec<_>>(), ["3", "5", "7"]);
    assert!(rows.iter().all(|r| r[5] == "consistent" && !r[6].is_empty()));
    for i in 0..3 {
        let doc = std::fs::read_to_string(dir.path().join(format!("seq/cell-00{i}.json"))).unwrap();
        MapDocument::from_json(&doc).unwrap();
    }
}

#[test]
fn sweep_target_entropy() {
    let dir = tempfile::tempdir().unwrap();
    let o = ivmap(dir.path(), &["sweep", "--target-h", "0.3", "--out-dir", "out"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = read_rows(&dir.path().join("out/summary.csv"));
    assert_eq!(rows.len(), 1);
    let (d, target, estimate) = (&rows[0][1], rows[0][3].parse::<f64>().unwrap(), rows[0][4].parse::<f64>().unwrap());
    assert_eq!(d, "1");
    assert_eq!(target, 0.3);
    assert!((estimate - 0.3).abs() < 0.05, "{estimate}");
    assert_eq!(rows[0][5], "consistent");
}

#[test]
fn sweep_failures_are_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let o = ivmap(dir.path(), &["sweep", "--out-dir", "empty"]);
    assert_eq!(code(&o), 1);
    let o = ivmap(dir.path(), &["sweep", "--p", "3", "--lambda", "", "--out-dir", "empty"]);
    assert_eq!(code(&o), 1);

    let o = ivmap(dir.path(), &["sweep", "--p", "3", "--lambda", "1,2", "--type", "7", "--entropy", "10", "--out-dir", "mixed"]);
    assert_eq!(code(&o), 1);
    let rows = read_rows(&dir.path().join("mixed/summary.csv"));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][5], "error");
    assert_eq!(rows[1][5], "consistent");
    let report = std::fs::read_to_string(dir.path().join("mixed/cell-000.report.json")).unwrap();
    assert!(report.contains("1.618033988749"));
}

fn polyline_points(svg: &str) -> usize {
    let start = svg.find("<polyline class=\"map\" points=\"").unwrap() + 30;
    let end = start + svg[start..].find('"').unwrap();
    svg[start..end].split_whitespace().count()
}

#[test]
fn plot_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    construct(dir.path(), "f52.json", &["--p", "5", "--lambda", "2"]);
    assert_eq!(code(&ivmap(dir.path(), &["plot", "f52.json", "--out", "a.svg"])), 0);
    assert_eq!(code(&ivmap(dir.path(), &["plot", "f52.json", "--out", "b.svg"])), 0);
    let a = std::fs::read_to_string(dir.path().join("a.svg")).unwrap();
    assert_eq!(a, std::fs::read_to_string(dir.path().join("b.svg")).unwrap());
    assert!(a.starts_with("<svg") && a.ends_with("</svg>\n"));
    assert_eq!(polyline_points(&a), 7);
    assert_eq!(a.matches("class=\"orbit\"").count(), 5);
    assert_eq!(a.matches("class=\"t\"").count(), 1);

    // raw square root on [0, 3]: f + 2 on [0, 1], a bridge, then x - 2
    construct(dir.path(), "raw.json", &["--p", "3", "--d", "1", "--lambda", "2", "--raw"]);
    assert_eq!(code(&ivmap(dir.path(), &["plot", "raw.json", "--out", "raw.svg"])), 0);
    let raw = std::fs::read_to_string(dir.path().join("raw.svg")).unwrap();
    assert_eq!(polyline_points(&raw), 7);

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("f52.json")).unwrap()).unwrap();
    v["map"]["breakpoints"] = serde_json::json!(["0/1", "1/1"]);
    v["map"]["values"] = serde_json::json!(["1/1", "0/1"]);
    std::fs::write(dir.path().join("flip.json"), v.to_string()).unwrap();
    assert_eq!(code(&ivmap(dir.path(), &["plot", "flip.json", "--out", "flip.svg"])), 0);
    let flip = std::fs::read_to_string(dir.path().join("flip.svg")).unwrap();
    assert_eq!(polyline_points(&flip), 2);
}
