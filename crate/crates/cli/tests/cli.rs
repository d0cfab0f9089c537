use std::path::Path;
use std::process::{Command, Output};

fn mch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect()
}

#[test]
fn coeffs_sweep_in_u_frame() {
    let o = mch(&["coeffs", "--zeta", "1.0:2.9:0.1", "--frame", "u"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("zeta,sector,branch,kappa,mu,h,C1,C2,C3,C4_tilde\n"));
    let rows = rows(&text);
    assert_eq!(rows.len(), 20);
    assert_eq!(rows[0][1], "Boundary");
    assert!(rows[0][2..].iter().all(String::is_empty));
    for r in &rows[1..] {
        assert_eq!(r[1], "Oscillatory1");
        assert!(r[3..].iter().all(|c| c.parse::<f64>().unwrap().is_finite()));
    }
}

#[test]
fn two_branches_in_second_range() {
    let rows = rows(&stdout(&mch(&["coeffs", "--zeta", "0.8", "--frame", "u"])));
    assert_eq!(rows.len(), 2);
    assert_eq!((rows[0][2].as_str(), rows[1][2].as_str()), ("0", "1"));
}

#[test]
fn vanishing_reflection_gives_zero_amplitude() {
    let rows = rows(&stdout(&mch(&[
        "coeffs",
        "--zeta",
        "-0.2:1.9:0.3",
        "--frame",
        "utilde",
        "--r-model",
        "0,1,0",
    ])));
    assert!(!rows.is_empty());
    for r in rows.iter().filter(|r| !r[6].is_empty()) {
        assert_eq!(r[6], "0");
    }
}

#[test]
fn evaluate_envelope_ratio_and_dual_column() {
    let text = stdout(&mch(&["evaluate", "--zeta", "2", "--t", "100,400"]));
    let rows = rows(&text);
    let env: Vec<f64> = rows.iter().map(|r| r[5].parse().unwrap()).collect();
    assert!((env[0] / env[1] - 2.0).abs() < 1e-9);
    for r in &rows {
        let (a, b): (f64, f64) = (r[6].parse().unwrap(), r[7].parse().unwrap());
        assert!((a - b).abs() < 1e-9 * env[0]);
    }
    let fast = rows_of(&["evaluate", "--zeta", "3.5", "--t", "100"]);
    assert_eq!((fast[0][3].as_str(), fast[0][4].as_str()), ("FastDecayRight", "1"));
}

fn rows_of(args: &[&str]) -> Vec<Vec<String>> {
    rows(&stdout(&mch(args)))
}

#[test]
fn exit_codes() {
    assert_eq!(mch(&["coeffs", "--zeta", "nope"]).status.code(), Some(2));
    assert_eq!(mch(&["coeffs", "--zeta", "1.0", "--frame", "u"]).status.code(), Some(2));
    assert_eq!(
        mch(&["coeffs", "--zeta", "1.5", "--r-model", "2,1,0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        mch(&["coeffs", "--zeta", "1.5", "--r-table", "/no/such/table"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(mch(&["compare", "--input", "/no/such/run"]).status.code(), Some(4));
    assert_eq!(mch(&["selftest"]).status.code(), Some(0));
}

#[test]
fn reflection_table_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.txt");
    let table: String = (0..=60)
        .map(|i| {
            let mu = 1.0 + 0.1 * i as f64;
            let w = mu - 1.0 / mu;
            format!("{mu} {} 0\n", -0.6 * (-0.5 * w * w).exp())
        })
        .collect();
    std::fs::write(&path, format!("# mu re im\n{table}")).unwrap();
    let o = mch(&[
        "coeffs",
        "--zeta",
        "1.5:2.5:0.5",
        "--r-table",
        path.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("coeffs.csv")).unwrap();
    assert_eq!(rows(&text).len(), 3);
}

#[test]
fn outputs_are_reproducible() {
    let a = stdout(&mch(&["coeffs", "--zeta", "-0.2:2.9:0.05", "--frame", "u"]));
    let b = stdout(&mch(&["coeffs", "--zeta", "-0.2:2.9:0.05", "--frame", "u"]));
    assert_eq!(a, b);
    assert!(!a.contains("NaN") && !a.contains("inf"));
}

fn simulate(dir: &Path) -> Output {
    mch(&[
        "simulate",
        "--t",
        "10,20,40",
        "--half-length",
        "128",
        "--modes",
        "1024",
        "--dt",
        "0.01",
        "--out",
        dir.to_str().unwrap(),
    ])
}

#[test]
fn simulate_then_compare() {
    let dir = tempfile::tempdir().unwrap();
    let o = simulate(dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("metadata.json")).unwrap()).unwrap();
    assert_eq!(meta["snapshots"].as_array().unwrap().len(), 3);
    assert!(meta["diagnostics"]["mean_relative_drift"].as_f64().unwrap() < 1e-10);
    let snap = std::fs::read_to_string(dir.path().join("snapshot_000.csv")).unwrap();
    assert_eq!(rows(&snap).len(), 1024);

    let out = dir.path().join("report");
    let o = mch(&[
        "compare",
        "--input",
        dir.path().to_str().unwrap(),
        "--zeta",
        "0.6:1.4:0.4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(matches!(o.status.code(), Some(0) | Some(3)));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["rays"].as_array().unwrap().len(), 3);
    assert!((report["self_check_k_loc"].as_f64().unwrap() - 0.485_868_2).abs() < 1e-6);
    assert_eq!(report["passed"].as_bool().unwrap(), o.status.code() == Some(0));

    let o = mch(&["compare", "--input", dir.path().to_str().unwrap(), "--zeta", "2.75"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["rays"][0]["label"], "fast");
}
