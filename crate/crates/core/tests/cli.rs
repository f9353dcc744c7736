mod common;

use std::process::{Command, Output};

use common::data_path;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stefan-thaw"))
        .args(args)
        .env_remove("STEFAN_THAW_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn solve_prints_front_coefficient() {
    let o = bin(&["solve", &data_path("water_ice.cfg")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let xi: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("xi = "))
        .expect("xi line")
        .trim()
        .parse()
        .unwrap();
    assert!((xi - 0.113_502_457_877_682_57).abs() < 1e-12);
    assert!(out.contains("roots found: 1"));
}

#[test]
fn solve_below_threshold_exits_2() {
    let o = bin(&["solve", &data_path("below_critical.cfg")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no phase change"));
}

#[test]
fn temperature_mode_solves_omega() {
    let o = bin(&[
        "solve",
        "--mode",
        "temperature",
        &data_path("wall_temperature.cfg"),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("omega = "));
}

#[test]
fn missing_file_exits_1() {
    let o = bin(&["solve", "/nonexistent/stefan.cfg"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn malformed_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    let text = std::fs::read_to_string(data_path("water_ice.cfg"))
        .unwrap()
        .replace("k_f = 0.006", "k_f = fast");
    std::fs::write(&path, text).unwrap();
    let o = bin(&["solve", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("k_f"), "{err}");
    assert!(err.contains("line"), "{err}");
}

#[test]
fn out_of_range_parameter_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    let text = std::fs::read_to_string(data_path("water_ice.cfg"))
        .unwrap()
        .replace("epsilon = 0.4", "epsilon = 1.4");
    std::fs::write(&path, text).unwrap();
    let o = bin(&["classify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("epsilon"));
}

#[test]
fn unknown_subcommand_exits_1() {
    let o = bin(&["melt"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn classify_reports_critical_h0() {
    let o = bin(&["classify", &data_path("water_ice.cfg")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("critical"));
}

#[test]
fn profile_csv_has_header_and_rows() {
    let o = bin(&["profile", &data_path("water_ice.cfg"), "--points", "200"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "t,x,region,value");
    assert_eq!(lines.len(), 201);
    for l in &lines[1..] {
        let cols: Vec<&str> = l.split(',').collect();
        assert_eq!(cols.len(), 4);
        assert!(["U", "F", "front"].contains(&cols[2]));
        cols[3].parse::<f64>().unwrap();
    }
}

#[test]
fn profile_is_byte_identical_across_runs() {
    let args = ["profile", &data_path("water_ice.cfg"), "--times", "0.5,1,2"];
    let a = bin(&args);
    let b = bin(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn profile_writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.csv");
    let o = bin(&[
        "profile",
        &data_path("water_ice.cfg"),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("t,x,region,value\n"));
}

#[test]
fn sweep_reports_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let o = bin(&[
        "sweep",
        &data_path("water_ice.cfg"),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("monotone: PASS"));
    let text = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 32);
    assert!(rows.windows(2).all(|w| w[1].0 > w[0].0 && w[1].1 > w[0].1));
}

#[test]
fn sweep_is_deterministic_with_thread_cap() {
    let cfg = data_path("water_ice.cfg");
    let a = bin(&["sweep", &cfg]);
    let b = Command::new(env!("CARGO_BIN_EXE_stefan-thaw"))
        .args(["sweep", &cfg])
        .env("STEFAN_THAW_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn equiv_csv_round_trips() {
    let o = bin(&["equiv", &data_path("water_ice.cfg")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("h0,xi,b0,omega,roundtrip_h0,max_profile_gap")
    );
    let mut n = 0;
    for l in lines {
        let v: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
        assert!((v[1] - v[3]).abs() <= 1e-10);
        assert!((v[4] / v[0] - 1.0).abs() <= 1e-8);
        n += 1;
    }
    assert_eq!(n, 8);
}

#[test]
fn verify_emits_json_report() {
    let o = bin(&["verify", &data_path("water_ice.cfg")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in [
        "pde_u_residual",
        "pde_v_residual",
        "refinement_orders",
        "interface_temp_gap",
        "stefan_balance_gap",
        "convective_bc_gap",
        "farfield_gap",
        "failures",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!(v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn verify_rejects_perturbed_front() {
    let o = bin(&[
        "verify",
        &data_path("water_ice.cfg"),
        "--perturb-xi",
        "1.01",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("stefan"));
}
