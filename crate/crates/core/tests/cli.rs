use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elastica"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "disk.json", r#"{"a0": 1.0, "cos": [], "sin": []}"#);
    write(dir.path(), "wobble.json", r#"{"a0": 1.0, "cos": [0.1, 0.02, 0.01], "sin": [0.0, -0.01, 0.0]}"#);
    write(dir.path(), "notch.json", r#"{"polyline": [[0,0],[2,0],[1,0.2],[2,2],[0,2]]}"#);
    write(dir.path(), "square.json", r#"{"polyline": [[0,0],[2,0],[2,2],[0,2]]}"#);
    write(dir.path(), "broken.json", r#"{"a0": "#);
    dir
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn eval_exit_codes() {
    let dir = setup();
    let d = dir.path();
    let out = run(d, &["eval", "disk.json", "--p", "1", "--lambda", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let total = json(&out)["total"].as_f64().unwrap();
    assert!((total - 7.3304).abs() < 1e-3);
    assert_eq!(run(d, &["eval", "disk.json", "--p", "0.5"]).status.code(), Some(2));
    assert_eq!(run(d, &["eval", "notch.json"]).status.code(), Some(3));
    assert_eq!(run(d, &["eval", "broken.json"]).status.code(), Some(2));
    assert_eq!(run(d, &["eval", "missing.json"]).status.code(), Some(2));
    assert_eq!(run(d, &["eval", "square.json"]).status.code(), Some(0));
}

#[test]
fn outputs_are_reproducible() {
    let dir = setup();
    let d = dir.path();
    for out in ["a.json", "b.json"] {
        assert!(run(d, &["eval", "wobble.json", "--out", out]).status.success());
    }
    let (a, b) = (fs::read(d.join("a.json")).unwrap(), fs::read(d.join("b.json")).unwrap());
    let strip = |v: &[u8]| {
        let mut j: serde_json::Value = serde_json::from_slice(v).unwrap();
        j.as_object_mut().unwrap().remove("manifest");
        j
    };
    assert_eq!(strip(&a), strip(&b));
    let m: serde_json::Value = serde_json::from_slice(&fs::read(d.join("a.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "eval");
    assert_eq!(m["seed"], 42);

    for prefix in ["r1", "r2"] {
        assert!(run(d, &["optimize", "--init", "wobble.json", "--max-iters", "5", "--out", prefix]).status.success());
    }
    assert_eq!(fs::read(d.join("r1.csv")).unwrap(), fs::read(d.join("r2.csv")).unwrap());
    assert_eq!(fs::read(d.join("r1.json")).unwrap(), fs::read(d.join("r2.json")).unwrap());
}

#[test]
fn optimize_variants() {
    let dir = setup();
    let d = dir.path();
    let out = run(d, &["optimize", "--max-iters", "0", "--init", "disk(1)"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["converged"], false);
    assert_eq!(v["final_energy"], v["initial_energy"]);
    let out = run(d, &["optimize", "--p", "1", "--lambda", "0.5", "--init", "disk(1)", "--max-iters", "20"]);
    let v = json(&out);
    assert!((v["final_shape"]["a0"].as_f64().unwrap() - 1.0).abs() <= 1e-3);
    assert_eq!(run(d, &["optimize", "--init", "disk(0)"]).status.code(), Some(2));
}

#[test]
fn bounds_table_and_json() {
    let dir = setup();
    let d = dir.path();
    let out = run(d, &["bounds", "disk.json", "--out", "b.json"]);
    assert!(out.status.success());
    let table = String::from_utf8(out.stdout).unwrap();
    assert_eq!(table.lines().filter(|l| l.contains("PASS")).count(), 9);
    assert!(!table.contains("FAIL"));
    let v: serde_json::Value = serde_json::from_slice(&fs::read(d.join("b.json")).unwrap()).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 9);
    assert_eq!(run(d, &["bounds", "broken.json"]).status.code(), Some(2));
}

#[test]
fn competitor_with_svg() {
    let dir = setup();
    let d = dir.path();
    let out = run(d, &["competitor", "disk.json", "--eps-list", "0.5,0.02,0.01,0.005,0.0025", "--svg", "c.svg"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for r in &rows[1..] {
        assert_eq!(r["checks"]["average_distance"], true);
        assert!(r["f_rhs"].as_f64().unwrap() >= r["delta_avg"].as_f64().unwrap());
    }
    let text = fs::read_to_string(d.join("c.svg")).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    assert_eq!(doc.descendants().filter(|n| n.has_tag_name("path")).count(), 2);

    let out = run(d, &["competitor", "disk.json", "--eps-list", "2.0,1.9,1.8,1.7"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn plot_outputs() {
    let dir = setup();
    let d = dir.path();
    assert!(run(d, &["plot", "wobble.json", "--svg", "one.svg"]).status.success());
    assert!(run(d, &["plot", "disk.json", "wobble.json", "--svg", "two.svg"]).status.success());
    assert!(run(d, &["optimize", "--init", "wobble.json", "--max-iters", "3", "--out", "t"]).status.success());
    assert!(run(d, &["plot", "t.csv", "--svg", "trace.svg"]).status.success());
    let parse = |name: &str| fs::read_to_string(d.join(name)).unwrap();
    let one = parse("one.svg");
    let one = roxmltree::Document::parse(&one).unwrap();
    let path = one.descendants().find(|n| n.has_tag_name("path")).unwrap();
    assert!(path.attribute("d").unwrap().ends_with('Z'));
    let two = parse("two.svg");
    let two = roxmltree::Document::parse(&two).unwrap();
    assert_eq!(two.descendants().filter(|n| n.has_tag_name("path")).count(), 2);
    assert!(two.descendants().any(|n| n.attribute("id") == Some("legend")));
    let trace = parse("trace.svg");
    let trace = roxmltree::Document::parse(&trace).unwrap();
    assert!(trace.descendants().any(|n| n.has_tag_name("polyline")));
    assert_eq!(run(d, &["plot", "broken.json", "--svg", "x.svg"]).status.code(), Some(2));
}
