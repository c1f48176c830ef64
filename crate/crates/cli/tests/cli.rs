use std::path::Path;
use std::process::Command;

use frechet_approx_cli::error::CliError;
use frechet_approx_cli::run;

fn call(args: &[&str]) -> (Result<(), CliError>, String) {
    let mut out = Vec::new();
    let mut full = vec!["frechet-approx"];
    full.extend_from_slice(args);
    let r = run(full, &mut out);
    (r, String::from_utf8(out).unwrap())
}

fn code(r: &Result<(), CliError>) -> i32 {
    r.as_ref().map(|_| 0).unwrap_or_else(|e| e.exit_code())
}

fn json(s: &str) -> serde_json::Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn bandlimited_width_example() {
    let (r, out) = call(&["width", "--theorem", "bandlimited", "--epsilon", "0.5", "--norm", "1", "--omega", "1"]);
    assert_eq!(code(&r), 0);
    let v = json(&out);
    assert_eq!(v["n_sufficient"], 64);
    assert_eq!(v["ell_epsilon"], 2);
}

#[test]
fn bounded_width_example() {
    let (r, out) =
        call(&["width", "--theorem", "bounded", "--epsilon", "0.25", "--cf", "1", "--m", "1", "--rate", "power:1:0.5"]);
    assert_eq!(code(&r), 0);
    assert_eq!(json(&out)["n_sufficient"], 64);
}

#[test]
fn width_rejects_bad_input() {
    let (r, _) = call(&["width", "--theorem", "bandlimited", "--epsilon", "0", "--norm", "1", "--omega", "1"]);
    assert_eq!(code(&r), 2);
    let (r, _) = call(&["width", "--theorem", "nonsense", "--epsilon", "0.5"]);
    assert_eq!(code(&r), 2);
    let (r, _) = call(&["width", "--no-such-flag"]);
    assert_eq!(code(&r), 2);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(
        &path,
        r#"{"schema_version": 1, "epsilons": [0.5], "width": {"theorem": "bandlimited", "norm": 1.0, "omega": 1.0}}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let (r, out) = call(&["--config", p, "width"]);
    assert_eq!(code(&r), 0);
    assert_eq!(json(&out)["n_sufficient"], 64);
    // omega = 0 gives M = 1 and N = 16
    let (_, out) = call(&["--config", p, "width", "--omega", "0"]);
    assert_eq!(json(&out)["n_sufficient"], 16);

    std::fs::write(&path, r#"{"schema_version": 9}"#).unwrap();
    assert_eq!(code(&call(&["--config", p, "width"]).0), 2);
    std::fs::write(&path, r#"{"schema_version": 1, "unknown": 0}"#).unwrap();
    assert_eq!(code(&call(&["--config", p, "width"]).0), 2);
}

#[test]
fn serial_rate_study_is_byte_identical() {
    let args = [
        "--serial",
        "rate-study",
        "--target",
        "raised_cosine",
        "--param",
        "omega=3.141592653589793",
        "--widths",
        "4,8,16,32",
        "--orders",
        "0,1",
    ];
    let (r1, a) = call(&args);
    let (r2, b) = call(&args);
    assert_eq!(code(&r1), 0);
    assert_eq!(code(&r2), 0);
    assert_eq!(a, b);
    let mut lines = a.lines();
    assert_eq!(lines.next(), Some("N,order,error,seconds"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r[3] == "0.0"));
    assert!(!a.contains('\r'));
}

#[test]
fn rate_study_errors_are_non_increasing_per_order() {
    let (r, out) = call(&[
        "--serial",
        "rate-study",
        "--target",
        "gaussian",
        "--param",
        "a=8",
        "--widths",
        "2,4,8,16",
        "--orders",
        "0,1,2",
    ]);
    assert_eq!(code(&r), 0);
    for order in ["0", "1", "2"] {
        let errors: Vec<f64> = out
            .lines()
            .skip(1)
            .map(|l| l.split(',').collect::<Vec<_>>())
            .filter(|r| r[1] == order)
            .map(|r| r[2].parse().unwrap())
            .collect();
        assert_eq!(errors.len(), 4);
        assert!(errors.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)), "order {order}: {errors:?}");
    }
}

#[test]
fn single_atom_study_short_circuits() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("s.json");
    let (r, out) = call(&[
        "--serial",
        "rate-study",
        "--target",
        "atom",
        "--widths",
        "1,2,4,8",
        "--json",
        json_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 0);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("1,0,"));
    let err: f64 = rows[0].split(',').nth(2).unwrap().parse().unwrap();
    assert!(err <= 1e-8);
    let summary = json(&std::fs::read_to_string(json_path).unwrap());
    assert_eq!(summary["orders"][0]["short_circuit"], true);
}

#[test]
fn rate_study_needs_four_widths_and_a_known_target() {
    assert_eq!(code(&call(&["rate-study", "--target", "atom", "--widths", "1,2,3"]).0), 2);
    assert_eq!(code(&call(&["rate-study", "--target", "nope", "--widths", "1,2,3,4"]).0), 2);
}

#[test]
fn counterexample_values() {
    let (r, out) = call(&["counterexample", "--n", "3", "--k", "2"]);
    assert_eq!(code(&r), 0);
    let row: Vec<f64> = out.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(out.lines().next(), Some("n,k,l2_norm,derivative_norm,barron_lower_bound"));
    assert!((row[2] - 1.0).abs() < 1e-12);
    assert!((row[3] - 9.0).abs() < 1e-9 * 9.0);

    let (r, out) = call(&["counterexample", "--n", "1", "--k", "1,2,3"]);
    assert_eq!(code(&r), 0);
    for line in out.lines().skip(1) {
        let d: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!((d - 1.0).abs() < 1e-12);
    }
    assert_eq!(code(&call(&["counterexample", "--n", "0"]).0), 2);
}

#[test]
fn counterexample_bound_at_64_matches_hand_value() {
    // m = floor(sqrt(64) * 2 * 1/2) = 8;
    // bound = |U|^{-1/2} (e^{m-1} / (sqrt(2 pi) m))^{1/beta}
    let (_, out) = call(&["counterexample", "--n", "64", "--k", "1", "--c", "2", "--beta", "0.5"]);
    let got: f64 = out.lines().nth(1).unwrap().split(',').nth(4).unwrap().parse().unwrap();
    let tau = 2.0 * std::f64::consts::PI;
    let hand = tau.powf(-0.5) * (7f64.exp() / (tau.sqrt() * 8.0)).powi(2);
    assert!((got / hand - 1.0).abs() < 1e-12, "{got} vs {hand}");
}

fn write_rate_csv(dir: &Path, body: &str) -> std::path::PathBuf {
    let p = dir.join("study.csv");
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn plots_from_a_two_order_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write_rate_csv(
        dir.path(),
        "N,order,error,seconds\n2,0,0.5,0.0\n4,0,0.25,0.0\n2,1,0.7,0.0\n4,1,0.4,0.0\n",
    );
    let (r, out) = call(&["emit-plots", csv.to_str().unwrap()]);
    assert_eq!(code(&r), 0);
    let script_path = dir.path().join("study.csv.gp");
    assert_eq!(out.trim(), script_path.to_str().unwrap());
    let script = std::fs::read_to_string(&script_path).unwrap();
    assert_eq!(script.matches("set multiplot layout").count(), 2);
    assert!(script.contains("data = 'study.csv'"));

    let sub = dir.path().join("plots");
    let out_path = sub.join("s.gp");
    let (r, _) = call(&["emit-plots", csv.to_str().unwrap(), "--output", out_path.to_str().unwrap()]);
    assert_eq!(code(&r), 0);
    assert!(std::fs::read_to_string(out_path).unwrap().contains("data = '../study.csv'"));
}

#[test]
fn plots_reject_empty_or_malformed_csv() {
    let dir = tempfile::tempdir().unwrap();
    for body in ["", "N,order,error,seconds\n", "N,err\n1,2\n", "N,order,error,seconds\n1,0,abc,0.0\n"] {
        let csv = write_rate_csv(dir.path(), body);
        assert_eq!(code(&call(&["emit-plots", csv.to_str().unwrap()]).0), 2, "{body:?}");
    }
    assert_eq!(code(&call(&["emit-plots", "/no/such/file.csv"]).0), 2);
}

#[test]
fn validate_passes_a_loose_target() {
    let (r, out) = call(&["--serial", "frechet-validate", "--epsilon", "1"]);
    assert_eq!(code(&r), 0);
    let v = json(&out);
    assert_eq!(v["checks"][0]["ell_epsilon"], 1);
    assert!(v["checks"][0]["margin"].as_f64().unwrap() > 0.0);
}

#[test]
fn validate_reports_fitter_limited_failures() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let (r, _) = call(&[
        "--serial",
        "frechet-validate",
        "--epsilon",
        "1e-9",
        "--w-points",
        "3",
        "--b-points",
        "3",
        "--max-atoms",
        "8",
        "--json",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&r), 4);
    assert!(r.unwrap_err().to_string().contains("fitter-limited"));
    let v = json(&std::fs::read_to_string(report).unwrap());
    assert_eq!(v["pass"], false);
    assert_eq!(v["checks"][0]["capped"], true);
}

#[test]
fn validate_rejects_smooth_targets() {
    assert_eq!(code(&call(&["frechet-validate", "--target", "gaussian"]).0), 2);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_frechet-approx");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["width", "--theorem", "bandlimited", "--epsilon", "0.5", "--norm", "1", "--omega", "1"]), Some(0));
    assert_eq!(status(&["width", "--theorem", "bandlimited", "--epsilon", "0", "--norm", "1", "--omega", "1"]), Some(2));
    assert_eq!(status(&["--help"]), Some(0));
    assert_eq!(status(&[]), Some(2));
}

#[test]
fn bad_thread_count_is_a_config_error() {
    let bin = env!("CARGO_BIN_EXE_frechet-approx");
    let out = Command::new(bin)
        .args(["rate-study", "--target", "atom", "--widths", "1,2,3,4"])
        .env("FRECHET_APPROX_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(bin)
        .args(["rate-study", "--target", "atom", "--widths", "1,2,3,4"])
        .env("FRECHET_APPROX_THREADS", "64")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn exp_barron_constants_calibrate_from_a_target() {
    let (r, out) = call(&["--serial", "width", "--theorem", "exp-barron", "--epsilon", "0.5", "--target", "gaussian", "--param", "a=8"]);
    assert_eq!(code(&r), 0, "{r:?}");
    let v = json(&out);
    let c = v["inputs"]["c_ell"].as_f64().unwrap();
    let big_c = v["inputs"]["big_c_ell"].as_f64().unwrap();
    assert!(c > 0.0 && big_c > 0.0);
    assert!(v["notes"][0].as_str().unwrap().contains("calibrated"));
    // explicit constants bypass calibration and reproduce the closed form
    let (_, out) = call(&[
        "width", "--theorem", "exp-barron", "--epsilon", "0.5", "--norm", "1", "--c-ell", "1", "--big-c-ell", "1",
        "--beta", "0.5", "--d", "1",
    ]);
    assert_eq!(json(&out)["n_sufficient"], 2);
    // without a target the constants are required
    assert_eq!(code(&call(&["width", "--theorem", "exp-barron", "--epsilon", "0.5", "--norm", "1"]).0), 2);
}
