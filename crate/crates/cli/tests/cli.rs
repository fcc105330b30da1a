use std::process::Command;

use riesz_equilibrium::iba::IBATrace;
use riesz_equilibrium::solver::SolverReport;
use riesz_equilibrium::verify::VerificationReport;

fn riesz_eq(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_riesz-eq")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn data_rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn endpoint_report_round_trips() {
    let (code, out, _) = riesz_eq(&["endpoint", "--s", "0.5", "--q", "5", "--b", "1"]);
    assert_eq!(code, 0);
    let r: SolverReport = serde_json::from_str(&out).unwrap();
    assert!((r.a_tilde - 1.44227).abs() < 1e-4);
    let again = serde_json::to_string(&r).unwrap();
    assert_eq!(serde_json::from_str::<SolverReport>(&again).unwrap(), r);
}

#[test]
fn nonexistence_is_a_domain_error() {
    let (code, out, err) = riesz_eq(&["endpoint", "--s", "0.5", "--q", "0.9", "--b", "1"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("no equilibrium measure exists"));
    assert_eq!(riesz_eq(&["density", "--s", "0.5", "--q", "0.9"]).0, 2);
    assert_eq!(riesz_eq(&["density", "--s", "0.5", "--q", "1"]).0, 2);
    assert_eq!(riesz_eq(&["endpoint", "--s", "1.5", "--q", "5"]).0, 2);
}

#[test]
fn usage_errors() {
    assert_eq!(riesz_eq(&["endpoint", "--s", "0.5"]).0, 64);
    assert_eq!(riesz_eq(&["endpoint", "--s", "x", "--q", "5"]).0, 64);
    assert_eq!(riesz_eq(&["frobnicate"]).0, 64);
    assert_eq!(riesz_eq(&["density", "--s", "0.5", "--q", "2", "--format", "xml"]).0, 64);
    assert_eq!(riesz_eq(&["--help"]).0, 0);
}

#[test]
fn density_csv_is_symmetric_with_soft_edges() {
    let (code, out, _) = riesz_eq(&["density", "--s", "0.5", "--q", "2", "--b", "1", "--grid-n", "5"]);
    assert_eq!(code, 0);
    let header: Vec<&str> = out.lines().take_while(|l| l.starts_with('#')).collect();
    assert!(header.iter().any(|l| l.contains("a_tilde")));
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 5);
    assert!((rows[4][0] - 4.5233).abs() < 1e-3);
    for k in 0..5 {
        assert_eq!(rows[k][0], -rows[4 - k][0]);
        assert_eq!(rows[k][1], rows[4 - k][1]);
    }
    assert_eq!(rows[0][1], 0.0);
    assert_eq!(rows[4][1], 0.0);
    assert!(rows[2][1] > 0.0);
    let value = out.lines().last().unwrap().split(',').nth(1).unwrap();
    assert_eq!(value.split('e').next().unwrap().replace(['-', '.'], "").len(), 17);
}

#[test]
fn csv_is_deterministic() {
    let args = ["sigma", "--s", "0.5", "--q", "5", "--a", "5", "--grid-n", "33"];
    let (c1, a, _) = riesz_eq(&args);
    let (c2, b, _) = riesz_eq(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert!(a.contains("# mass = 2.61610763119"));
}

#[test]
fn signed_reports_the_coefficient() {
    let (code, out, _) = riesz_eq(&["signed", "--s", "0.5", "--q", "5", "--a", "4", "--grid-n", "20"]);
    assert_eq!(code, 0);
    let coeff: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("# endpoint_coeff = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(coeff < 0.0);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 20);
    assert!(rows[0][1] < 0.0 && rows[10][1] > 0.0);
}

#[test]
fn functional_and_logcase() {
    let (code, out, _) = riesz_eq(&["functional", "--s", "0.5", "--q", "0.75", "--a-min", "0.1", "--a-max", "100", "--n", "30"]);
    assert_eq!(code, 0);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 30);
    assert!(rows.windows(2).all(|w| w[1][1] < w[0][1] && w[1][1] > 0.0));
    let (code, out, _) = riesz_eq(&["logcase", "--q", "5", "--b", "1", "--grid-n", "7"]);
    assert_eq!(code, 0);
    assert!(out.contains("# a_tilde = 7.5000000000000000e-1"));
    assert_eq!(riesz_eq(&["logcase", "--q", "1"]).0, 2);
}

#[test]
fn iba_and_verify_json() {
    let (code, out, _) = riesz_eq(&["iba", "--s", "0.5", "--q", "5", "--a0", "4"]);
    assert_eq!(code, 0);
    let t: IBATrace = serde_json::from_str(&out).unwrap();
    assert!((t.limit_halfwidth - 1.44227).abs() < 1e-4);
    let (_, out, _) = riesz_eq(&["iba", "--s", "0.5", "--q", "0.5"]);
    assert!(out.contains("\"non_shrinking\""));
    assert_eq!(riesz_eq(&["iba", "--s", "0.5", "--q", "5", "--a0", "big"]).0, 2);

    let (code, out, _) = riesz_eq(&["verify", "--s", "0.5", "--q", "5", "--grid-n", "21"]);
    assert_eq!(code, 0);
    let v: VerificationReport = serde_json::from_str(&out).unwrap();
    assert!(v.passed);
    let (code, out, _) = riesz_eq(&["verify", "--s", "0.5", "--q", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"passed\": true"));
    // an impossible tolerance is a verification failure
    assert_eq!(riesz_eq(&["verify", "--s", "0.5", "--q", "5", "--grid-n", "5", "--tol", "1e-30"]).0, 3);
}

#[test]
fn output_file_and_formats() {
    let path = std::env::temp_dir().join(format!("riesz-eq-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, out, _) = riesz_eq(&["density", "--s", "0.5", "--q", "5", "--grid-n", "3", "--format", "json", "--out", p]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["x"].as_array().unwrap().len(), 3);
    assert_eq!(v["command"], "density");
    std::fs::remove_file(&path).unwrap();
    let (code, out, _) = riesz_eq(&["endpoint", "--s", "0.5", "--q", "5", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("per_method.c_equation,1.44227")));
}
