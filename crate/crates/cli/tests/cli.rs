use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cvbell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvbell")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

fn read_profile(path: &Path) -> Vec<(f64, f64)> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let mut it = l.split_whitespace().map(|x| x.parse::<f64>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect()
}

#[test]
fn table1_csv_and_json_agree() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("t1.csv");
    let out = cvbell(&["table1", "--output", csv_path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read_to_string(&csv_path).unwrap();
    assert!(text.starts_with("N,S\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[5][0], 12.0);
    assert!((rows[5][1] - 2.681).abs() <= 0.005);
    assert!(text.lines().nth(2).unwrap() == "4,2.41706");

    let j = json(&cvbell(&["table1", "--format", "json"]));
    let arr = j.as_array().unwrap();
    assert_eq!(arr.len(), 6);
    for (row, obj) in rows.iter().zip(arr) {
        assert_eq!(obj["N"].as_f64().unwrap(), row[0]);
        assert!((obj["S"].as_f64().unwrap() - row[1]).abs() < 5e-6);
    }
}

#[test]
fn table1_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert!(cvbell(&["table1", "--output", a.to_str().unwrap()]).status.success());
    let one_thread = Command::new(env!("CARGO_BIN_EXE_cvbell"))
        .env("CVBELL_THREADS", "1")
        .args(["table1", "--output", b.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(one_thread.status.success());
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn bad_thread_override_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_cvbell"))
        .env("CVBELL_THREADS", "0")
        .args(["table1"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn table2_rows() {
    let out = cvbell(&["table2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("N,alpha_opt,S\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0][0], 4.0);
    assert!((rows[0][2] - 2.764).abs() <= 0.01);
}

#[test]
fn svalue_four_paw_flat_cat() {
    let j = json(&cvbell(&["svalue", "--family", "flat", "--N", "4", "--alpha", "10"]));
    assert!((j["S"].as_f64().unwrap() - 2.417).abs() < 1e-3);
    assert_eq!(j["state"]["n_paws"], 4);
    assert!(!j["position_binning"]["breakpoints"].as_array().unwrap().is_empty());
    assert!(j.get("brute_force").is_none());
}

#[test]
fn svalue_fock_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pair.json");
    let f0 = 0.67f64.sqrt();
    let f4 = -(0.33f64.sqrt());
    fs::write(&path, format!(r#"{{"f": [[0, {f0}], [4, {f4}]], "g": [[1, 1.0]]}}"#)).unwrap();
    let j = json(&cvbell(&["svalue", "--family", "fock", "--file", path.to_str().unwrap()]));
    assert!((j["S"].as_f64().unwrap() - 2.3).abs() < 1e-2);

    fs::write(&path, r#"{"f": [[0, 0.67], [4, -0.33]], "g": [[1, 1.0]], "values": "signed_probability"}"#).unwrap();
    let k = json(&cvbell(&["svalue", "--family", "fock", "--file", path.to_str().unwrap()]));
    assert!((k["S"].as_f64().unwrap() - j["S"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn svalue_tiny_two_paw_cat_has_no_violation() {
    let j = json(&cvbell(&["svalue", "--family", "cat2", "--a", "0.0001"]));
    for key in ["V", "W", "theta_m", "S"] {
        assert!(j[key].as_f64().unwrap().is_finite(), "{key}");
    }
    assert!(j["S"].as_f64().unwrap() < 2.0);
}

#[test]
fn svalue_brute_force_deltas() {
    let j = json(&cvbell(&["svalue", "--family", "envelope", "--N", "6", "--alpha", "2.2", "--s", "0.4", "--brute-force"]));
    let bf = &j["brute_force"];
    for key in ["e_qq", "e_pp", "e_qp", "e_pq"] {
        assert!(bf[key]["delta"].as_f64().unwrap().abs() < 1e-4, "{key}");
        assert!(bf[key]["closure_error"].as_f64().unwrap().abs() < 1e-9, "{key}");
    }
    assert!(bf["s_delta"].as_f64().unwrap().abs() < 1e-4);
}

#[test]
fn svalue_rejects_bad_parameters() {
    for args in [
        &["svalue", "--family", "flat", "--alpha", "10"][..],
        &["svalue", "--family", "flat", "--N", "3", "--alpha", "10"],
        &["svalue", "--family", "flat", "--N", "4", "--alpha", "-1"],
        &["svalue", "--family", "envelope", "--N", "4", "--alpha", "2", "--s", "1.5"],
        &["svalue", "--family", "cat2", "--a", "1", "--N", "4"],
        &["svalue", "--family", "fock"],
        &["svalue", "--family", "square"],
    ] {
        let out = cvbell(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn plotdata_two_paw_figure() {
    let dir = tempfile::tempdir().unwrap();
    let out = cvbell(&["plotdata", "--family", "flat", "--N", "4", "--alpha", "15", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let f = read_profile(&dir.path().join("f_position.dat"));
    let peak = f.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    let signs: Vec<f64> = (1..f.len() - 1)
        .filter(|&i| {
            let m = f[i].1.abs();
            m > 0.1 * peak && m > f[i - 1].1.abs() && m >= f[i + 1].1.abs()
        })
        .map(|i| f[i].1.signum())
        .collect();
    assert_eq!(signs, vec![-1.0, 1.0, 1.0, -1.0]);

    for name in ["g_position.dat", "h_momentum.dat"] {
        let data = read_profile(&dir.path().join(name));
        let origin = data.iter().find(|p| p.0 == 0.0).expect("origin sampled");
        assert_eq!(origin.1, 0.0, "{name}");
    }
}

#[test]
fn plotdata_near_self_fourier_envelope() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["plotdata", "--family", "envelope", "--N", "12", "--alpha", "1.8", "--s", "0.3", "--out-dir", dir.path().to_str().unwrap()];
    assert!(cvbell(&args).status.success());
    let f = read_profile(&dir.path().join("f_position.dat"));
    let ft = read_profile(&dir.path().join("f_momentum.dat"));
    let peak = f.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    let worst = f.iter().zip(&ft).map(|(a, b)| {
        assert_eq!(a.0, b.0);
        (a.1 - b.1).abs()
    });
    assert!(worst.fold(0.0, f64::max) / peak < 0.1);
    let g = read_profile(&dir.path().join("g_position.dat"));
    assert_eq!(g.iter().find(|p| p.0 == 0.0).unwrap().1, 0.0);

    let again = tempfile::tempdir().unwrap();
    let mut args2 = args;
    args2[10] = again.path().to_str().unwrap();
    assert!(cvbell(&args2).status.success());
    for name in ["f_position.dat", "g_position.dat", "f_momentum.dat", "h_momentum.dat"] {
        assert_eq!(fs::read(dir.path().join(name)).unwrap(), fs::read(again.path().join(name)).unwrap());
    }
}

#[test]
fn prepsim_g_protocol() {
    let out = cvbell(&["prepsim", "--protocol", "g", "--n", "1", "--alpha", "10", "--format", "json"]);
    let j = json(&out);
    assert!((j["success_prob"].as_f64().unwrap() - 0.25).abs() < 1e-6);
    assert!(j["fidelity"].as_f64().unwrap() >= 0.999);
    assert!(j["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    assert!(!j["trace"].as_array().unwrap().is_empty());

    let text = stdout(&cvbell(&["prepsim", "--protocol", "g", "--n", "1", "--alpha", "10"]));
    assert!(text.contains("measure q0"));
    assert!(text.contains("success_prob 0.25"));
}

#[test]
fn prepsim_psi_reports_downstream_s() {
    let out = cvbell(&["prepsim", "--protocol", "psi", "--n", "1", "--alpha", "12", "--theta", "0.5", "--format", "json"]);
    let j = json(&out);
    assert_eq!(j["theta"].as_f64().unwrap(), 0.5);
    assert!((j["relative_phase"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    let s = j["downstream_s"].as_f64().unwrap();
    assert!(j["checks"].as_array().unwrap().is_empty());

    let neg = json(&cvbell(&["prepsim", "--protocol", "psi", "--n", "1", "--alpha", "12", "--theta", "-0.5", "--format", "json"]));
    assert!((neg["relative_phase"].as_f64().unwrap() + 0.5).abs() < 1e-9);

    let best = cvbell(&["prepsim", "--protocol", "psi", "--n", "1", "--alpha", "12", "--format", "json"]);
    let b: Value = serde_json::from_slice(&best.stdout).unwrap();
    let s_best = b["downstream_s"].as_f64().unwrap();
    assert!(s_best > s && s_best > 2.0 && s_best <= b["target_s_max"].as_f64().unwrap());
    assert_eq!(b["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn prepsim_rejects_bad_parameters() {
    for args in [
        &["prepsim", "--protocol", "g", "--n", "0", "--alpha", "10"][..],
        &["prepsim", "--protocol", "g", "--n", "1", "--alpha", "0"],
        &["prepsim", "--protocol", "psi", "--n", "1", "--alpha", "12", "--theta", "best"],
        &["prepsim", "--protocol", "g", "--n", "1", "--alpha", "2"],
    ] {
        assert_eq!(cvbell(args).status.code(), Some(2), "{args:?}");
    }
}
