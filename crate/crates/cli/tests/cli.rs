use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use wavespin_cli::output::{verify_manifest, Table};

fn wavespin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavespin")).args(args).output().expect("binary runs")
}

fn with_threads(n: usize, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavespin"))
        .env("WAVESPIN_THREADS", n.to_string())
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_out(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn info_reports_derived_parameters() {
    let v = json_out(&wavespin(&["info", "--state", "2,2", "--well", "10e-9,10e-9"]));
    assert!((v["eta"].as_f64().unwrap() - 1.7156604e-4).abs() < 1e-10);
    assert!((v["kinetic_ev"].as_f64().unwrap() * 1e3 - 7.5206).abs() < 1e-3);
    let v = json_out(&wavespin(&["info", "--state", "1,1", "--well", "10e-9,10e-9"]));
    assert!((v["kinetic_ev"].as_f64().unwrap() * 1e3 - 1.8802).abs() < 1e-3);
}

#[test]
fn exit_codes() {
    let o = wavespin(&["info", "--state", "0,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nx"));

    let o = wavespin(&["info", "--well", "10e-9,-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ly"));

    assert_eq!(wavespin(&["info", "--state", "two,2"]).status.code(), Some(2));
    assert_eq!(wavespin(&["field", "spin"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let o = wavespin(&["field", "charge", "--grid", "9,9", "--out", s(&blocker.join("sub"))]);
    assert_eq!(o.status.code(), Some(3));

    let o = wavespin(&["info", "--config", s(&dir.path().join("missing.json"))]);
    assert_eq!(o.status.code(), Some(3));

    let o = with_threads(1, &["scan", "--grid", "3,3", "--patch-half", "8e-9,5e-9", "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("patch_center"));
    let o = with_threads(1, &["scan", "--grid", "3,3", "--patch-half", "8e-9,5e-9", "--clip", "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(0));

    let o = Command::new(env!("CARGO_BIN_EXE_wavespin"))
        .env("WAVESPIN_THREADS", "zero")
        .args(["info"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_passes_and_sabotage_fails() {
    for state in ["1,1", "2,2"] {
        let o = wavespin(&["check", "--state", state]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
        let text = String::from_utf8_lossy(&o.stdout);
        assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 10);
        assert!(!text.contains("FAIL"));
    }
    let o = wavespin(&["check", "--sabotage", "n-squared", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let norm = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "normalization").unwrap();
    assert_eq!(norm["pass"], false);
    assert!((norm["measured"].as_f64().unwrap() - 0.5).abs() < 1e-10);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"state": [3, 2], "well": [20e-9, 10e-9], "b_field": 2.0, "spin": "down"}"#).unwrap();
    let v = json_out(&wavespin(&["info", "--config", s(&cfg)]));
    assert_eq!((v["nx"].as_u64(), v["ny"].as_u64()), (Some(3), Some(2)));

    let out = dir.path().join("out");
    let v = json_out(&wavespin(&["zeeman", "--config", s(&cfg), "--state", "2,2", "--out", s(&out)]));
    assert_eq!(v["b_field"].as_f64(), Some(2.0));
    let m: Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["config"]["state"]["nx"], 2);
    assert_eq!(m["config"]["state"]["spin"], "down");
    assert_eq!(m["config"]["well"]["lx"].as_f64(), Some(20e-9));
    assert_eq!(m["constants_vintage"], "CODATA 2018");
    assert!(verify_manifest(&out).unwrap().is_empty());

    fs::write(&cfg, r#"{"stat": [3, 2]}"#).unwrap();
    assert_eq!(wavespin(&["info", "--config", s(&cfg)]).status.code(), Some(2));
}

#[test]
fn zeeman_examples() {
    let v = json_out(&wavespin(&["zeeman", "--state", "2,2", "--B", "1"]));
    let split = v["splitting_mu_b_units"].as_f64().unwrap();
    assert!((2.0 - split - 2.0 * 1.47175e-8).abs() < 1e-12);
    let v0 = json_out(&wavespin(&["zeeman", "--state", "2,2", "--B", "0"]));
    assert_eq!(v0["splitting_ev"].as_f64(), Some(0.0));
    let v4 = json_out(&wavespin(&["zeeman", "--state", "4,4", "--B", "1"]));
    assert!(v4["splitting_mu_b_units"].as_f64().unwrap() < split);
}

#[test]
fn field_outputs_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let o = wavespin(&["field", "charge", "--state", "2,2", "--out", s(out)]);
    assert!(o.status.success());
    let csv = fs::read_to_string(out.join("charge.csv")).unwrap();
    let t = Table::parse_csv(&csv).unwrap();
    assert_eq!(t.header, ["x_m", "y_m", "rho_over_e"]);
    assert_eq!(t.rows.len(), 129 * 129);
    let center = &t.rows[64 * 129 + 64];
    assert_eq!((center[0], center[1]), (Some(0.0), Some(0.0)));
    assert!(center[2].unwrap().abs() < 1e-30);
    assert_eq!(t.to_csv(), csv);
    assert!(verify_manifest(out).unwrap().is_empty());

    fs::write(out.join("charge.csv"), csv.replacen("0.0", "0.1", 1)).unwrap();
    assert_eq!(verify_manifest(out).unwrap(), ["charge.csv"]);

    let o = wavespin(&["field", "velocity", "--state", "2,2", "--formats", "csv", "--out", s(out)]);
    assert!(o.status.success());
    let csv = fs::read_to_string(out.join("velocity.csv")).unwrap();
    let t = Table::parse_csv(&csv).unwrap();
    let undefined = t.rows.iter().filter(|r| r[2].is_none()).count();
    assert!(undefined >= 4);
    assert!(t.rows.iter().all(|r| r[2].is_none() == r[3].is_none()));
    assert!(csv.contains(",,\n") || csv.lines().any(|l| l.ends_with(",,")));
    assert_eq!(t.to_csv(), csv);
    assert!(!out.join("velocity.svg").exists());
    assert!(verify_manifest(out).unwrap().is_empty());
}

#[test]
fn every_command_writes_a_verifiable_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 5] = [
        &["info"],
        &["zeeman"],
        &["check", "--state", "2,2"],
        &["scan", "--grid", "3,3"],
        &["field", "momentum", "--grid", "17,17"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let out = dir.path().join(format!("run{i}"));
        let mut a = args.to_vec();
        a.extend(["--out", s(&out)]);
        let o = wavespin(&a);
        assert!(o.status.success(), "{args:?}");
        let m: Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
        assert!(!m["files"].as_array().unwrap().is_empty(), "{args:?}");
        assert!(m["derived"]["eta"].as_f64().unwrap() > 0.0);
        assert!(m["duration_s"].as_f64().unwrap() >= 0.0);
        assert!(verify_manifest(&out).unwrap().is_empty());
    }
}

#[test]
fn scan_corners_and_center() {
    let dir = tempfile::tempdir().unwrap();
    let o = wavespin(&["scan", "--state", "2,2", "--grid", "3,3", "--out", s(dir.path())]);
    assert!(o.status.success());
    let t = Table::parse_csv(&fs::read_to_string(dir.path().join("scan.csv")).unwrap()).unwrap();
    assert_eq!(t.header, ["a_m", "b_m", "shift_mu_b_units"]);
    let gamma = (1.0f64 + 1.7156604e-4f64.powi(2)).sqrt();
    for k in [0, 2, 6, 8] {
        assert!((t.rows[k][2].unwrap() - 0.25 / gamma).abs() < 1e-11);
    }
    assert!((t.rows[4][2].unwrap() + 0.25 / gamma).abs() < 1e-11);
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 2] = [
        &["scan", "--state", "2,2", "--grid", "9,9"],
        &["field", "current", "--state", "3,2", "--grid", "65,65"],
    ];
    for args in runs {
        let mut files = Vec::new();
        for n in [1, 4] {
            let out = dir.path().join(format!("{}-{n}", args[0]));
            let mut a = args.to_vec();
            a.extend(["--out", s(&out)]);
            assert!(with_threads(n, &a).status.success());
            files.push(out);
        }
        for entry in fs::read_dir(&files[0]).unwrap() {
            let name = entry.unwrap().file_name();
            if name == "manifest.json" {
                continue;
            }
            assert_eq!(fs::read(files[0].join(&name)).unwrap(), fs::read(files[1].join(&name)).unwrap(), "{name:?}");
        }
    }
}

#[test]
fn current_quiver_matches_golden() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/current_2_2.svg");
    let dir = tempfile::tempdir().unwrap();
    let o = wavespin(&["field", "current", "--state", "2,2", "--grid", "33,33", "--formats", "svg", "--out", s(dir.path())]);
    assert!(o.status.success());
    let svg = fs::read_to_string(dir.path().join("current.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    assert!(svg.contains(r#"width="960" height="800""#));
    if !golden.exists() && std::env::var_os("WAVESPIN_BLESS").is_some() {
        fs::create_dir_all(golden.parent().unwrap()).unwrap();
        fs::write(&golden, &svg).unwrap();
    }
    assert_eq!(svg, fs::read_to_string(&golden).expect("golden file present"));
}
