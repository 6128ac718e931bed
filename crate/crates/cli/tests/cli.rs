use std::process::{Command, Output};

use willmore_cli::args::Resolution;
use willmore_cli::input::subsample;
use willmore_core::catalogue::{realize, SurfaceKind, SurfaceSpec};
use willmore_core::immersion::{build_frames, willmore_energy};

fn wrl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wrl"))
        .args(args)
        .env_remove("WRL_THREADS")
        .output()
        .expect("run wrl")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

const SPHERE: &str = r#"{"kind": "sphere", "resolution": [128, 64]}"#;
const CATENOID: &str = r#"{"kind": "catenoid", "resolution": [128, 128]}"#;

#[test]
fn energy_report_carries_schema_and_errors() {
    let out = wrl(&["energy", "--surface", SPHERE]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["schema"], "1");
    assert_eq!(r["signs"], willmore_core::immersion::SIGN_CONVENTION);
    assert_eq!(r["resolution"], serde_json::json!([128, 64]));
    let w = r["willmore"]["value"].as_f64().unwrap();
    let e = r["willmore"]["error"].as_f64().unwrap();
    assert!((w - 4.0 * std::f64::consts::PI).abs() < e);
    assert_eq!(r["target"]["name"], "4π");
}

#[test]
fn resolution_override() {
    let r = json(&wrl(&["energy", "--surface", SPHERE, "--resolution", "64x32"]));
    assert_eq!(r["resolution"], serde_json::json!([64, 32]));
    assert_eq!(r["coarse_resolution"], serde_json::json!([32, 16]));
    assert_eq!("96".parse::<Resolution>().unwrap(), Resolution([96, 96]));
    assert!("ax3".parse::<Resolution>().is_err());
}

#[test]
fn sweep_csv_columns() {
    let out = wrl(&["sweep", "--surface", CATENOID, "--radii", "0.3,0.5,0.7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "radius,c_1,c_2,c_3,c0,c1_12,c1_13,c1_23,quad_error,error,deviation"
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), vec![0.3, 0.5, 0.7]);
    assert!(rows.iter().all(|r| r[10] < 1e-6));
}

#[test]
fn malformed_configs_exit_one() {
    for args in [
        vec!["energy", "--surface", "/nonexistent/spec.json"],
        vec!["energy", "--surface", r#"{"kind": "torus", "resolution": [64, 64]}"#],
        vec!["energy", "--surface", r#"{"kind": "sphere", "resolution": [4, 4]}"#],
        vec![
            "energy",
            "--surface",
            r#"{"kind": "sphere", "params": {"bogus": 1}, "resolution": [64, 64]}"#,
        ],
        vec!["sweep", "--surface", CATENOID],
        vec!["collar", "--l", "-1"],
        vec!["energy", "--surface", SPHERE, "--threads", "0"],
        vec!["frobnicate"],
    ] {
        assert_eq!(wrl(&args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn guards_exit_two() {
    let bump = r#"{"kind": "graph-bump", "resolution": [128, 128]}"#;
    let out = wrl(&["residues", "--surface", bump, "--potentials"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("curl defect"));
    let ok = wrl(&["residues", "--surface", CATENOID, "--potentials", "--radius", "1"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(json(&ok)["potentials"]["curl_defect"]["l"].as_f64().unwrap() < 1e-3);
}

#[test]
fn reports_do_not_depend_on_threads() {
    let a = wrl(&["sweep", "--surface", CATENOID, "--radii", "0.5,1,2", "--threads", "1"]);
    let b = wrl(&["sweep", "--surface", CATENOID, "--radii", "0.5,1,2", "--threads", "3"]);
    let c = Command::new(env!("CARGO_BIN_EXE_wrl"))
        .args(["sweep", "--surface", CATENOID, "--radii", "0.5,1,2"])
        .env("WRL_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn sampled_grids_are_accepted() {
    let g = realize(&SurfaceSpec::new(SurfaceKind::CliffordTorusR4, 64, 64)).unwrap();
    let doc = serde_json::to_string(&g.to_document()).unwrap();
    let dir = std::env::temp_dir().join(format!("wrl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("torus.json");
    std::fs::write(&path, doc).unwrap();
    let r = json(&wrl(&["energy", "--surface", path.to_str().unwrap()]));
    std::fs::remove_dir_all(&dir).unwrap();
    let w = r["willmore"]["value"].as_f64().unwrap();
    assert!((w / (2.0 * std::f64::consts::PI.powi(2)) - 1.0).abs() < 1e-5);
    assert_eq!(r["coarse_resolution"], serde_json::json!([32, 32]));
    assert_eq!(r["surface"]["kind"], "grid");
}

#[test]
fn subsampling_keeps_the_chart() {
    let g = realize(&SurfaceSpec::new(SurfaceKind::CliffordTorusR4, 64, 64)).unwrap();
    let c = subsample(&g).unwrap();
    assert_eq!((c.domain.nu, c.domain.nv), (32, 32));
    assert_eq!(c.point(3, 5), g.point(6, 10));
    let direct = realize(&SurfaceSpec::new(SurfaceKind::CliffordTorusR4, 32, 32)).unwrap();
    assert!(c.points.iter().zip(&direct.points).all(|(a, b)| (a - b).abs() < 1e-15));
    let w = |g| willmore_energy(g, &build_frames(g).unwrap());
    assert!((w(&c) - w(&direct)).abs() < 1e-12);
    // an even bounded direction cannot be halved onto the same nodes
    let band = realize(&SurfaceSpec::new(SurfaceKind::Catenoid, 64, 64)).unwrap();
    assert!(subsample(&band).is_none());
}

#[test]
fn elastica_and_lorentz_reports() {
    let e = json(&wrl(&["elastica", "--k0", "0.5", "--dk0", "-0.1", "--length", "2"]));
    assert!(e["first_integral_drift"].as_f64().unwrap() < 1e-8);
    assert!(e["k_error"].as_f64().unwrap() < 1e-8);
    assert_eq!(e["solution"]["k"][0].as_f64(), Some(0.5));
    let l = json(&wrl(&[
        "lorentz",
        "--p",
        "2",
        "--q",
        "2",
        "--sample",
        r#"{"values": [1, 2], "weights": [1, 1]}"#,
    ]));
    let norm = l["norm"]["value"].as_f64().unwrap();
    assert!((norm - 5f64.sqrt()).abs() < 1e-14);
    let weak = json(&wrl(&[
        "lorentz",
        "--q",
        "inf",
        "--sample",
        r#"{"values": [1], "weights": [4]}"#,
    ]));
    assert_eq!(weak["q"], "inf");
    assert!((weak["norm"]["value"].as_f64().unwrap() - 2.0).abs() < 1e-15);
    let t = json(&wrl(&["lorentz"]));
    assert!(t["log_growth"]["spread"].as_f64().unwrap() < 10.0);
}

#[test]
fn collar_report() {
    let r = json(&wrl(&["collar", "--l", "0.1"]));
    assert!((r["geodesic_length"]["value"].as_f64().unwrap() - 0.1).abs() < 1e-12);
    assert!(r["curvature"]["order"].as_f64().unwrap() > 1.7);
    let csv = wrl(&["collar", "--l", "0.1", "--n", "101", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "t,metric_factor,curvature,curvature_error"
    );
    assert_eq!(text.lines().count(), 102);
}

#[test]
fn verify_reports_every_group() {
    let out = wrl(&["verify", "--suite", "lorentz"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["suite"], "lorentz");
    assert_eq!(r["failed"], 0);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["group"] == "lorentz"));
    let strict = wrl(&["verify", "--suite", "hopf", "--strict"]);
    let failed = json(&strict)["failed"].as_u64().unwrap();
    assert_eq!(strict.status.code(), Some(if failed > 0 { 3 } else { 0 }));
}
