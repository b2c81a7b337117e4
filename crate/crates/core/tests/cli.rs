use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sturmian::cli::{export_plot_data, ExperimentManifest};
use sturmian::Error;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sturmian"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).expect("json on stderr")
}

#[test]
fn stutter_manifest_matches_golden() {
    let m = data("stutter_fibonacci.json");
    let o = run(&["--json", "--manifest", m.to_str().unwrap()]);
    let golden = std::fs::read_to_string(data("stutter_fibonacci.golden.json")).unwrap();
    assert_eq!(String::from_utf8(o.stdout.clone()).unwrap(), golden);

    let v = stdout_json(&o);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "stutter");
    let recs = v["report"]["records"].as_array().unwrap();
    assert_eq!(recs.iter().map(|r| r["n"].as_u64().unwrap()).collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
    // shifts are the Fibonacci numbers F_{2n+2}
    let (mut a, mut b) = (1u64, 2u64);
    for r in recs {
        assert_eq!(r["r"], Value::String(a.to_string()));
        (a, b) = (a + b, a + 2 * b);
        assert_eq!(r["s1_holds"], true);
        assert_eq!(r["s2_pairs_ok"], true);
        assert_eq!(r["s4_holds"], true);
        assert_eq!(r["unexplained"], 0);
    }
}

#[test]
fn manifests_are_deterministic() {
    for name in ["stutter_fibonacci.json", "rotor_staircase.json", "cf_golden_ratio.json", "rotor_attractor.json"] {
        let m = data(name);
        let a = run(&["--json", "--manifest", m.to_str().unwrap()]);
        let b = run(&["--json", "--manifest", m.to_str().unwrap()]);
        assert!(a.status.success(), "{}: {}", name, String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{}", name);
    }
}

#[test]
fn manifest_errors_have_distinct_exit_codes() {
    let o = run(&["--manifest", data("bad_literal.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr_json(&o);
    assert_eq!(e["error"], "ParseError");
    assert_eq!(e["exit_code"], 2);

    let o = run(&["--manifest", data("empty.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["error"], "ValidationError");

    let o = run(&["--manifest", data("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(5));

    assert!(matches!(ExperimentManifest::parse("  \n"), Err(Error::Validation(_))));
    assert!(matches!(ExperimentManifest::parse("{"), Err(Error::Parse(_))));
    let unknown = ExperimentManifest::parse(r#"{"command": "cf", "inputs": {"theta": "1/3", "bogus": 1}}"#).unwrap();
    assert!(matches!(unknown.command(), Err(Error::Validation(_))));
    let no_cmd = ExperimentManifest::parse(r#"{"inputs": {}}"#).unwrap();
    assert!(matches!(no_cmd.command(), Err(Error::Validation(_))));
}

#[test]
fn module_errors_reach_the_exit_status() {
    let o = run(&["rotor", "decompose", "--lambda", "1/2", "--theta", "quad:(3-sqrt(5))/2", "--y", "1/2"]);
    assert_eq!(o.status.code(), Some(14));
    assert_eq!(stderr_json(&o)["error"], "NotOnAttractor");

    let o = run(&["rotor", "rotnum", "--lambda", "1/2", "--delta", "1/4"]);
    assert_eq!(o.status.code(), Some(3));

    let o = run(&["cf", "--theta", "rat:1/0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn manifest_writes_json_and_csv_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("out.json");
    let csv = dir.path().join("out.csv");
    let manifest = serde_json::json!({
        "command": "rotor attractor",
        "inputs": {"lambda": "1/2", "delta": "3/4", "burn_in": 10, "n": 4},
        "outputs": {"json": json, "csv": csv},
    });
    let mpath = dir.path().join("m.json");
    std::fs::write(&mpath, manifest.to_string()).unwrap();
    let o = run(&["--json", "--manifest", mpath.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(std::fs::read(&json).unwrap(), o.stdout);
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,point");
    assert_eq!(lines.len(), 5);
    // period two orbit {1/6, 5/6} reached from 0 after 10 steps
    let pts: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    for (p, q) in pts.iter().zip(pts.iter().skip(2)) {
        assert!((p - q).abs() < 1e-3);
    }
}

#[test]
fn stutter_chain_feeds_keyineq() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("witness.json");
    let o = run(&["--json", "stutter", "--n-max", "4", "--prefix", "5000"]);
    std::fs::write(&w, &o.stdout).unwrap();
    for base in ["2", "alg:2,-2,1@[1,1]x[1,1]"] {
        let v = stdout_json(&run(&["--json", "keyineq", "--witness", w.to_str().unwrap(), "--base", base]));
        assert!(v["report"]["holding"].as_u64().unwrap() >= 3, "base {}", base);
    }
}

#[test]
fn export_projects_fields() {
    let report: Value = serde_json::from_str(&std::fs::read_to_string(data("stutter_fibonacci.golden.json")).unwrap()).unwrap();
    let csv = export_plot_data(&report, "stutter").unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,r_n,s_n,spread,log_r_n");
    assert_eq!(lines.len(), 6);
    for (line, rec) in lines[1..].iter().zip(report["report"]["records"].as_array().unwrap()) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[0], rec["n"].to_string());
        assert_eq!(cols[1], rec["r"].as_str().unwrap());
        assert_eq!(cols[2], rec["s"].to_string());
        let r: f64 = cols[1].parse().unwrap();
        let log_r: f64 = cols[4].parse().unwrap();
        assert!((log_r - r.ln()).abs() < 1e-12);
    }
    assert!(matches!(export_plot_data(&report, "histogram"), Err(Error::UnknownKind(_))));
    assert!(matches!(export_plot_data(&report, "attractor"), Err(Error::Validation(_))));

    let o = run(&["export", "--report", data("stutter_fibonacci.golden.json").to_str().unwrap(), "--kind", "stutter"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), csv);
    let o = run(&["export", "--report", data("stutter_fibonacci.golden.json").to_str().unwrap(), "--kind", "nope"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn cf_subcommand_reports_exact_strings() {
    let v = stdout_json(&run(&["--json", "--manifest", data("cf_golden_ratio.json").to_str().unwrap()]));
    let r = &v["report"];
    assert_eq!(r["quotients"], serde_json::json!(vec!["1"; 12]));
    assert_eq!(r["positive_side"], serde_json::json!(["1", "2", "5", "13", "34"]));
    assert_eq!(r["best_approximations"], serde_json::json!([1, 2, 3, 5, 8, 13, 21, 34, 55, 89]));
    assert_eq!(v["inputs"]["n"], 12);
}
