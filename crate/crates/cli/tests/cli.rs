use std::path::Path;
use std::process::{Command, Output};

fn superint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superint"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn list_shows_catalog() {
    let o = superint(&["list"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for id in ["def_a", "def_b", "def_c", "def_d", "ttw_def", "pw_def", "curved_kepler_k2"] {
        assert!(text.contains(id), "missing {id}");
    }
    let ttw = text.lines().find(|l| l.starts_with("ttw_def")).unwrap();
    assert!(ttw.contains("kappa,alpha,ka,kb,m"));
    let pw = text.lines().find(|l| l.starts_with("pw_def")).unwrap();
    assert!(pw.contains("J1,J2,ReK,ImK"));
}

#[test]
fn list_as_json() {
    let o = superint(&["list", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 16);
    assert_eq!(v[0]["id"], "euclid_a");
}

#[test]
fn certify_def_c_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = superint(&[
        "certify", "--system", "def_c", "--kappa", "0.4", "--n", "500", "--seed", "7", "--format", "json", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["points"], 500);
    assert!(report["kappa_limit"]["rows"].as_array().unwrap().len() >= 3);
}

#[test]
fn certify_ttw_with_rational_frequency() {
    let o = superint(&["certify", "--system", "ttw_def", "--m", "5/2", "--n", "200", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let names: Vec<&str> = report["brackets"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["pair"][0].as_str().unwrap())
        .collect();
    assert!(names.contains(&"ReK") && names.contains(&"ImK"));
    assert_eq!(report["params"]["m"], "5/2");
}

#[test]
fn certify_reports_failure_with_exit_one() {
    // a bracket tolerance far below round-off cannot be met
    let o = superint(&["certify", "--system", "def_a", "--kappa", "0.3", "--n", "50", "--tol", "bracket=1e-30"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("false"));
}

#[test]
fn absurd_kappa_is_a_config_error() {
    let o = superint(&["certify", "--system", "def_a", "--kappa", "-1e300"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("kappa"));
}

#[test]
fn unknown_inputs_are_config_errors() {
    assert_eq!(code(&superint(&["certify", "--system", "def_z"])), 2);
    assert_eq!(code(&superint(&["certify", "--system", "def_a", "--param", "k9=1"])), 2);
    assert_eq!(code(&superint(&["certify", "--system", "def_a", "--tol", "brackets=1e-9"])), 2);
    assert_eq!(code(&superint(&["certify", "--system", "ttw_def", "--m", "0/1"])), 2);
    assert_eq!(code(&superint(&["simulate", "--system", "def_a", "--x0", "0.5,0.5,0", "--t-end", "1"])), 2);
}

#[test]
fn start_outside_domain_rejected() {
    let o = superint(&["simulate", "--system", "def_c", "--kappa", "0.5", "--x0", "0.2,0.1,0,0", "--t-end", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("outside domain"));
}

#[test]
fn circular_orbit_conserves_everything() {
    // every integral is quadratic, which the midpoint rule preserves exactly
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("orbit.csv");
    let o = superint(&[
        "simulate", "--system", "euclid_a", "--param", "k2=0", "--param", "k3=0", "--x0", "1,0,0,1", "--t-end", "10",
        "--sample-interval", "0.25", "--method", "midpoint", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = read(&out);
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "t,q1,q2,p1,p2,H,I_a1,I_a2,I_a3");
    assert_eq!(rows.len() - 1, 41);
    let summary: serde_json::Value = serde_json::from_str(stderr(&o).lines().next().unwrap()).unwrap();
    for d in summary["drift"].as_array().unwrap() {
        assert!(d["max_relative_drift"].as_f64().unwrap() <= 1e-10, "{d}");
    }
}

#[test]
fn polar_start_and_midpoint_method() {
    let o = superint(&[
        "simulate", "--system", "ttw_def", "--kappa", "0.05", "--m", "2", "--param", "alpha=0.2", "--param", "ka=0.1",
        "--param", "kb=0.1", "--chart", "polar", "--x0", "2.5,0.4487989505128276,0.08,0.2", "--t-end", "1",
        "--method", "midpoint", "--step", "1e-3", "--format", "json",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["method"], "implicit_midpoint");
    assert_eq!(v["rows"], 11);
}

#[test]
fn domain_exit_keeps_truncated_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("plunge.csv");
    let o = superint(&[
        "simulate", "--system", "euclid_c", "--param", "k1=-1", "--param", "k2=0", "--param", "k3=0", "--x0",
        "1,0.3,-0.5,-0.15", "--t-end", "10", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 3);
    let rows = read(&out).lines().count() - 1;
    assert!((1..101).contains(&rows), "{rows}");
    assert!(stderr(&o).contains("domain_exit"));
}

#[test]
fn sweep_shows_linear_and_exact_rows() {
    let o = superint(&["sweep", "--system", "def_a"]);
    assert_eq!(code(&o), 0);
    let csv = stdout(&o);
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "J_a3-I_a3").unwrap();
    for line in csv.lines().skip(1) {
        assert_eq!(line.split(',').nth(col).unwrap().parse::<f64>().unwrap(), 0.0);
    }
    assert!(stderr(&o).contains("slope 1.0"));

    let o = superint(&["sweep", "--system", "def_c", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let row = v["rows"].as_array().unwrap().iter().find(|r| r["deformed"] == "J_c2").unwrap();
    assert!(row["slope"].is_null());
}

#[test]
fn sweep_needs_a_limit() {
    let o = superint(&["sweep", "--system", "euclid_b"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("no Euclidean limit"));
}

#[test]
fn profile_values() {
    let o = superint(&["profile", "--kappa", "0.25", "--x-min", "0", "--x-max", "1", "--n", "2"]);
    assert_eq!(code(&o), 0);
    let last = stdout(&o).lines().last().unwrap().to_string();
    let v: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
    assert!((v - 2.0 / 3.0).abs() < 1e-15);

    let o = superint(&["profile", "--kappa", "-1", "--x-min", "-50", "--x-max", "50", "--n", "101"]);
    let max = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!(max < 0.5 && max > 0.49);
}

#[test]
fn curvature_table_for_every_metric() {
    let o = superint(&["curvature", "--kappa", "0.3", "--n", "20", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 60);
    for r in rows {
        let k = r["K"].as_f64().unwrap();
        let oracle = r["K_oracle"].as_f64().unwrap();
        assert!((k - oracle).abs() <= 1e-6 * k.abs().max(1.0), "{r}");
    }
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"system": "def_a", "kappa": -1e300}"#).unwrap();
    let o = superint(&["certify", "--system", "def_b", "--kappa", "0.2", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 2);

    std::fs::write(&cfg, r#"{"kappa": 0.25, "x_min": 0.0, "x_max": 1.0, "n": 2}"#).unwrap();
    let o = superint(&["profile", "--kappa", "0.9", "--config", cfg.to_str().unwrap()]);
    assert!(stdout(&o).lines().last().unwrap().ends_with("6.6666666666666663e-1"));

    std::fs::write(&cfg, "{not json").unwrap();
    assert_eq!(code(&superint(&["list", "--config", cfg.to_str().unwrap()])), 2);
}

#[test]
fn thread_count_from_environment() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_superint"))
            .args(["certify", "--system", "def_d", "--kappa", "0.2", "--n", "100", "--format", "csv"])
            .env("SUPERINT_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let four = run("4");
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(code(&run("zero")), 2);
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = |name: &str| {
        let p = dir.path().join(name);
        let o = superint(&[
            "simulate", "--system", "def_a", "--kappa", "0.2", "--x0", "0.8,0.6,0.2,-0.3", "--t-end", "5", "--method",
            "midpoint", "--out", p.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        std::fs::read(p).unwrap()
    };
    assert_eq!(args("a.csv"), args("b.csv"));
    let s1 = superint(&["sweep", "--system", "pw_def", "--m", "3/2", "--seed", "4"]).stdout;
    let s2 = superint(&["sweep", "--system", "pw_def", "--m", "3/2", "--seed", "4"]).stdout;
    assert_eq!(s1, s2);
}
