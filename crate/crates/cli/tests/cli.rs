use std::fs;
use std::process::{Command, Output};

use cograph::render::{parse_pgm, BLACK, WHITE};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cograph")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn count_tables() {
    let labeled = stdout(&["count", "--class", "labeled", "--n", "6"]);
    let trees: Vec<&str> = labeled.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(trees, ["1", "1", "4", "26", "236", "2752"]);
    let unlabeled = stdout(&["count", "--class", "unlabeled", "--n", "4"]);
    assert_eq!(unlabeled.lines().last().unwrap(), "4,5,10");
    assert_eq!(stdout(&["count", "--n", "0"]), "n,trees,cographs\n");
    let too_big = run(&["count", "--n", "100000"]);
    assert!(!too_big.status.success());
}

#[test]
fn series_dump() {
    let csv = stdout(&["series", "--name", "l", "--n", "4"]);
    assert_eq!(csv.lines().nth(4).unwrap(), "3,2,3");
    let marked = stdout(&["series", "--name", "mt0", "--n", "3", "--tree", "(1 1 2)", "--format", "json"]);
    assert!(marked.contains("\"coefficients\""));
    assert!(!run(&["series", "--name", "mt0", "--n", "3"]).status.success());
}

#[test]
fn sample_single_leaf_and_determinism() {
    assert_eq!(stdout(&["sample", "--n", "1"]), "1\n");
    for kind in ["labeled", "unlabeled", "boltzmann", "binary"] {
        let args = ["sample", "--n", "60", "--seed", "17", "--kind", kind];
        assert_eq!(run(&args).stdout, run(&args).stdout, "{kind}");
    }
    let edges = stdout(&["sample", "--n", "5", "--seed", "2", "--format", "edges"]);
    assert_eq!(edges.lines().next().unwrap(), "5");
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&["sample", "--n", "5", "--seed", "2", "--format", "json"])).unwrap();
    assert_eq!(json["size"], 5);
    assert!(!run(&["sample", "--n", "0"]).status.success());
}

#[test]
fn boltzmann_at_figure_size() {
    let json: serde_json::Value = serde_json::from_str(&stdout(&[
        "sample", "--n", "4482", "--seed", "3", "--kind", "boltzmann", "--format", "json",
    ]))
    .unwrap();
    let size = json["size"].as_u64().unwrap();
    assert!((4034..=4930).contains(&size), "{size}");
}

#[test]
fn render_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("k2.txt");
    let img = dir.path().join("k2.pgm");
    fs::write(&tree, "(1 1 2)\n").unwrap();
    stdout(&["render", "--input", tree.to_str().unwrap(), "--out", img.to_str().unwrap()]);
    let g = parse_pgm(&fs::read(&img).unwrap()).unwrap();
    assert_eq!(g.pixels, vec![WHITE, BLACK, BLACK, WHITE]);

    let out = run(&["render", "--n", "300", "--seed", "5", "--kind", "labeled"]);
    let g = parse_pgm(&out.stdout).unwrap();
    assert_eq!(g.width, 300);
    assert!(g.is_symmetric());
    assert!(!run(&["render", "--n", "20000", "--kind", "binary"]).status.success());
}

#[test]
fn stats_outputs() {
    let csv = stdout(&["stats", "--n", "30", "--trials", "200", "--metric", "induced", "--k", "2"]);
    assert!(csv.starts_with("key,count,probability,stderr\n"));
    let total: u64 = csv.lines().skip(1).map(|l| l.rsplit(',').nth(2).unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 200);
    let json: serde_json::Value = serde_json::from_str(&stdout(&[
        "stats", "--n", "200", "--trials", "300", "--metric", "kappa", "--kind", "unlabeled", "--format", "json",
    ]))
    .unwrap();
    assert!(json["summary"]["value"].as_f64().unwrap() < 0.2);
    let degrees = stdout(&["stats", "--n", "50", "--trials", "20", "--seed", "4"]);
    assert_eq!(degrees.lines().count(), 21);
    assert_eq!(degrees, stdout(&["stats", "--n", "50", "--trials", "20", "--seed", "4"]));
}

#[test]
fn check_suites() {
    let out = run(&["check", "series-identities"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], true);
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS series-identities"));

    let out = run(&["check", "uniformity-small-n", "--trials-divisor", "10"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let bad = run(&["check", "no-such-suite"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("unknown suite"));
}

#[test]
fn experiment_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    let out = dir.path().join("tree.txt");
    fs::write(
        &spec,
        format!(
            r#"{{"command": "sample", "sample": {{"n": 40, "seed": 8, "kind": "unlabeled-exact"}}, "outputs": [{:?}]}}"#,
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    stdout(&["--spec", spec.to_str().unwrap()]);
    let first = fs::read_to_string(&out).unwrap();
    stdout(&["--spec", spec.to_str().unwrap()]);
    assert_eq!(first, fs::read_to_string(&out).unwrap());
    assert_eq!(first.trim(), stdout(&["sample", "--n", "40", "--seed", "8", "--kind", "unlabeled"]).trim());
}
