use std::process::{Command, Output};

use hostler_core::green::{hostler_green, CoulombParams, SphericalPoint};

fn hostler(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hostler"))
        .args(args)
        .env_remove("HOSTLER_DIGITS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn eval_whittaker_m_prints_value_and_diagnostics() {
    let o = hostler(&["eval", "whittaker_m", "--kappa", "1", "--mu", "0.5", "--r", "1"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    // M_{1,1/2}(z) = z e^{-z/2} M(0, 2, z) = z e^{-z/2}
    let want = (-0.5f64).exp();
    let line = s.lines().next().unwrap();
    let got: f64 = line.rsplit("= ").next().unwrap().parse().unwrap();
    assert!((got - want).abs() < 1e-9, "{s}");
    assert!(s.contains("n_terms: "));
    assert!(s.contains("condition_number: "));
}

#[test]
fn eval_json_schema() {
    let o = hostler(&["eval", "laguerre", "--n", "3", "--alpha", "1", "--x", "2", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["function"], "laguerre");
    assert_eq!(v["params"]["n"], "3");
    // L_3^1(2) = 4 - 6*2 + 4*2^2/2 - 2^3/6
    let want = 4.0 - 12.0 + 8.0 - 8.0 / 6.0;
    assert!((v["value"]["re"].as_f64().unwrap() - want).abs() < 1e-13);
    assert!(v["n_terms"].is_u64());
    assert!(v["condition_number"].is_f64());
}

#[test]
fn hostler_json_matches_the_library_to_the_last_digit() {
    let o = hostler(&[
        "eval", "hostler", "--g", "1.3", "--k", "0.9", "--p", "2,0.7,0.3", "--p0", "0.8,1.9,2.4", "--json",
    ]);
    assert_eq!(code(&o), 0);
    let params = CoulombParams::new(1.3, 0.9).unwrap();
    let p = SphericalPoint::new(2.0, 0.7, 0.3).unwrap();
    let p0 = SphericalPoint::new(0.8, 1.9, 2.4).unwrap();
    let lib = hostler_green(params, p, p0).unwrap();
    let needle = format!("\"re\": {lib:.16e}");
    assert!(stdout(&o).contains(&needle), "{} lacks {needle}", stdout(&o));
}

#[test]
fn digits_come_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_hostler"))
        .args(["eval", "whittaker_w", "--kappa", "0.3", "--mu", "0.5", "--r", "2", "--extended"])
        .env("HOSTLER_DIGITS", "35")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("extended(35)"), "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&hostler(&["eval", "nope"])), 2);
    assert_eq!(code(&hostler(&["eval", "whittaker_m", "--kappa", "0.5"])), 2);
    assert_eq!(code(&hostler(&["verify", "gamma_pi", "-p", "kappa"])), 2);
    assert_eq!(code(&hostler(&["verify", "gamma_pi", "-p", "bogus=1"])), 2);
    assert_eq!(code(&hostler(&["verify", "no_such_identity"])), 2);
    assert_eq!(code(&hostler(&["verify"])), 2);
    assert_eq!(code(&hostler(&["green", "--g", "1", "--k", "1", "--p", "1,0.5,0", "--p0", "1,1,0"])), 2);
    assert_eq!(code(&hostler(&["green", "--g", "-1", "--k", "1", "--p", "2,0.5,0", "--p0", "1,1,0"])), 2);
    assert_eq!(code(&hostler(&["frobnicate"])), 2);
}

#[test]
fn failing_rows_exit_1() {
    // three partial waves cannot reach the closed form
    let o = hostler(&["verify", "gamma_pi", "--lmax", "2"]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn green_is_symmetric_under_swapping_the_points() {
    let a = hostler(&["green", "--g", "1", "--k", "0.9", "--p", "2,0.7,0.3", "--p0", "0.8,1.9,2.4", "--compare"]);
    let b = hostler(&["green", "--g", "1", "--k", "0.9", "--p", "0.8,1.9,2.4", "--p0", "2,0.7,0.3", "--compare"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    let s = stdout(&a);
    for key in ["hostler:", "partial_wave:", "lmax used:", "residual:", "free kernel:"] {
        assert!(s.contains(key), "{s}");
    }
}

#[test]
fn verify_writes_csv_and_json_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rows.csv");
    let json = dir.path().join("rows.json");
    let o = hostler(&[
        "verify",
        "w_downward_sum",
        "-p",
        "n=0..2",
        "-p",
        "mu=1",
        "-p",
        "kappa=-1.2",
        "-p",
        "r=3",
        "--format",
        "csv",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "index,identity,params,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,n_terms,condition_number,precision,exact,threshold,pass,error"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[2].starts_with("2,w_downward_sum,n=2;mu=1;kappa=-1.2;r=3,"));

    let o = hostler(&["verify", "delta_identity", "-p", "n=0..4", "--json", "--output", json.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["failed"], 0);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 15);
    // rows keep grid order even though they are computed in parallel
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r["index"], i);
    }
    assert_eq!(rows[0]["params"]["n"], "0");
    assert_eq!(rows[0]["lhs"]["re"], 1.0);
}

#[test]
fn lemma_sweep_is_exact() {
    let o = hostler(&["verify", "lemma_binomial", "-p", "n=0..12", "-p", "nu=7/3", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 13);
    assert!(rows.iter().all(|r| r["exact"] == true && r["pass"] == true));
}

#[test]
fn listings() {
    let o = hostler(&["verify", "--list"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("whittaker_addition"));
    let o = hostler(&["eval", "--list"]);
    assert!(stdout(&o).contains("spherical_harmonic"));
}

#[test]
fn golden_check_passes_on_the_committed_files() {
    let o = hostler(&["golden", "--check"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(!stdout(&o).contains("[FAIL]"));
}
