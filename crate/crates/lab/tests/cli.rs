use std::fs;

use assert_cmd::Command;
use serde_json::Value;

fn emden() -> Command {
    Command::cargo_bin("emden").unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = emden().args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&full)).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

/// Column `name` of the first section's table.
fn column(v: &Value, section: usize, name: &str) -> Vec<Value> {
    let s = &v["sections"][section];
    let cols: Vec<&str> = s["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    let j = cols.iter().position(|c| *c == name).unwrap_or_else(|| panic!("no column {name}"));
    s["rows"].as_array().unwrap().iter().map(|r| r[j].clone()).collect()
}

#[test]
fn table2_matches_golden_file() {
    let golden = include_str!("golden/table2.csv");
    emden().arg("table2").assert().success().stdout(golden);
}

#[test]
fn table2_special_entries() {
    let v = json(&["table2"]);
    let n = column(&v, 0, "n");
    let at = |x: f64| n.iter().position(|c| num(c) == x).unwrap();
    assert_eq!(column(&v, 0, "omega_tilde")[at(1.0)], "inf");
    assert_eq!(column(&v, 0, "omega0")[at(1.0)], "undefined");
    assert_eq!(column(&v, 0, "xi1")[at(5.0)], "inf");
    assert_eq!(column(&v, 0, "omega_tilde")[at(4.5)], "4/7");
    assert_eq!(num(&column(&v, 0, "xi1")[at(3.0)]), 6.897);
}

#[test]
fn output_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["profile", "--n", "1.5,3"][..], &["orbit", "--n", "1", "--t-end", "20"], &["noether", "--n", "3"]] {
        let mut files = Vec::new();
        for k in 0..2 {
            let path = dir.path().join(format!("run{k}"));
            emden().args(args).arg("--out").arg(&path).assert().success().stdout("");
            files.push(fs::read(&path).unwrap());
        }
        assert!(!files[0].is_empty());
        assert_eq!(files[0], files[1], "{args:?}");
    }
}

#[test]
fn json_outputs_follow_the_schema() {
    let schema: Value = serde_json::from_str(include_str!("../schemas/report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let runs: [&[&str]; 11] = [
        &["table2"],
        &["profile", "--n", "0,5"],
        &["invariants", "--n", "0,3,5"],
        &["reconstruct", "--n", "2"],
        &["approx"],
        &["noether", "--n", "3,5"],
        &["wd"],
        &["zams", "--mass", "1,10"],
        &["orbit", "--n", "1", "--t-end", "10"],
        &["orbit", "--n", "0", "--t-end", "2"],
        &["orbit", "--sweep"],
    ];
    for args in runs {
        let v = json(args);
        let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
    let bad = serde_json::json!({"command": "table2", "sections": [{"summary": {}, "columns": ["a"]}]});
    assert!(!validator.is_valid(&bad));
}

#[test]
fn profile_density_at_the_core_radius() {
    let v = json(&["profile", "--n", "3"]);
    let core = num(&v["sections"][0]["summary"]["r_core_frac"]);
    let r = column(&v, 0, "r_frac");
    let rho = column(&v, 0, "rho_frac");
    let i = r.iter().position(|x| (num(x) - core).abs() < 1e-5).expect("core row");
    let d = num(&rho[i]);
    assert!((0.35..=0.45).contains(&d), "{d}");
}

#[test]
fn profile_uniform_sphere() {
    let v = json(&["profile", "--n", "0"]);
    assert!(column(&v, 0, "rho_frac").iter().all(|x| num(x) == 1.0));
    assert!(column(&v, 0, "u").iter().all(|x| (num(x) - 3.0).abs() < 1e-5));
}

#[test]
fn profile_n5_w_tracks_u() {
    let v = json(&["profile", "--n", "5"]);
    for (u, w) in column(&v, 0, "u").iter().zip(column(&v, 0, "w")) {
        // u carries 6 significant digits, so about 5e-6 absolute near 3.
        let expect = 5.0 / 3.0 * (3.0 - num(u));
        assert!((num(&w) - expect).abs() <= 1e-5 * expect.max(1.0), "{u} {w}");
    }
}

#[test]
fn profile_csv_columns() {
    let out = stdout(&["profile", "--n", "2", "--k", "1e14", "--rho-c", "10"]);
    assert_eq!(
        out.lines().next().unwrap(),
        "n,xi,theta,dtheta,u,v,w,z,r_frac,m_frac,rho_frac,r,m,rho"
    );
    assert!(out.lines().skip(1).all(|l| l.split(',').count() == 14));
}

#[test]
fn white_dwarf_mass() {
    let v = json(&["wd"]);
    let m = num(&v["sections"][0]["summary"]["m_ch_msun"]);
    assert!((m / 1.456 - 1.0).abs() < 0.01, "{m}");
    let v = json(&["wd", "--mu-e", "1"]);
    assert!((num(&v["sections"][0]["summary"]["m_ch_msun"]) / (4.0 * m) - 1.0).abs() < 1e-5);
}

#[test]
fn approximant_errors_for_n3() {
    let v = json(&["approx"]);
    let kinds: Vec<&str> = v["sections"].as_array().unwrap().iter().map(|s| s["summary"]["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["picard", "poly10", "pade3"]);
    let pade = &v["sections"][2]["summary"];
    assert!((num(&pade["first_zero"]) - 6.921).abs() < 1e-3);
    assert_eq!(v["sections"][0]["summary"]["first_zero"], "undefined");
    let out = stdout(&["approx", "--kind", "taylor6", "--xi-max", "2", "--samples", "5"]);
    assert_eq!(out.lines().count(), 6);
    assert_eq!(out.lines().next().unwrap(), "n,kind,xi,exact,approx,error");
}

#[test]
fn noether_charge_balance() {
    let v = json(&["noether"]);
    for s in v["sections"].as_array().unwrap() {
        let sum = &s["summary"];
        assert!(num(&sum["relative_residual"]) < 1e-6, "{sum}");
    }
}

#[test]
fn zams_batch_file() {
    let out = stdout(&["zams", "--batch", "tests/fixtures/zams_batch.csv", "--format", "csv"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0].starts_with("m_msun,mu,kappa_p,beta"));
    assert!(lines[4].starts_with("60,1,0.34,"));
}

#[test]
fn orbit_trajectory_and_sweep() {
    let out = stdout(&["orbit", "--n", "-2", "--vr", "-0.2", "--t-end", "5"]);
    assert_eq!(out.lines().next().unwrap(), "t,r,theta,K,V,A");
    let v = json(&["orbit", "--n", "-1", "--t-end", "40"]);
    let sum = &v["sections"][0]["summary"];
    assert!(num(&sum["virial_residual"]) < 1e-6);
    assert!(num(&sum["energy_drift"]).abs() < 1e-8);
    let v = json(&["orbit", "--sweep", "--n", "1"]);
    let slope = num(&v["sections"][0]["summary"]["slope"]);
    assert!((slope - 1.5).abs() < 0.01, "{slope}");
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "n = [1.5, 2]\nformat = \"json\"\n").unwrap();
    let from_file: Value = serde_json::from_str(&stdout(&["table2", "--config", cfg.to_str().unwrap()])).unwrap();
    assert_eq!(from_file["sections"][0]["rows"].as_array().unwrap().len(), 2);
    let out = stdout(&["table2", "--config", cfg.to_str().unwrap(), "--format", "csv", "--n", "3"]);
    assert_eq!(out.lines().count(), 2);
    fs::write(&cfg, "n = 3\nspeed = 2\n").unwrap();
    emden().args(["table2", "--config", cfg.to_str().unwrap()]).assert().code(2);
}

#[test]
fn exit_codes() {
    emden().args(["table2", "--n", "6"]).assert().code(2);
    emden().args(["profile", "--k", "1e14"]).assert().code(2);
    emden().args(["wd", "--mu-e", "-1"]).assert().code(2);
    emden().args(["frobnicate"]).assert().code(2);
    emden().args(["approx", "--kind", "pade3", "--n", "2"]).assert().code(2);
    emden().args(["noether", "--n", "1"]).assert().code(3);
    emden().args(["orbit", "--sweep", "--n", "0"]).assert().code(3);
    emden().args(["zams", "--batch", "no/such/file.csv"]).assert().code(1);
}
