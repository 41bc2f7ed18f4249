use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn kwf() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_kwf"));
    cmd.env_remove("KWF_CONFIG");
    cmd
}

fn run(args: &[&str]) -> Output {
    kwf().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn value_line(out: &str) -> f64 {
    out.lines()
        .find_map(|l| l.strip_prefix("value: "))
        .expect("value line")
        .trim()
        .parse()
        .unwrap()
}

const EXP_SPEC: &str = r#"{"k": 1, "top": [[1, 1]], "bottom": [[1, 1]]}"#;

#[test]
fn eval_prints_value_and_convergence() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "exp.json", EXP_SPEC);
    let o = run(&["eval", spec.to_str().unwrap(), "--z", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!((value_line(&out) - std::f64::consts::E).abs() < 1e-13);
    assert!(out.contains("delta: 0\n"), "{out}");
    assert!(out.contains("class: EntireFunction"), "{out}");
    assert!(out.contains("terms: "));
}

#[test]
fn eval_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // Δ = −1, μ = 1/4
    let disk = write(
        dir.path(),
        "disk.json",
        r#"{"k": 1, "top": [[1, 2]], "bottom": [[1, 1]]}"#,
    );
    let o = run(&["eval", disk.to_str().unwrap(), "--z", "0.35"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("divergent: |z| >= mu"),
        "{}",
        stderr(&o)
    );

    let bad = write(dir.path(), "bad.json", r#"{"k": 1, "top": [[1, 1]"#);
    assert_eq!(
        run(&["eval", bad.to_str().unwrap(), "--z", "1"])
            .status
            .code(),
        Some(1)
    );

    let zero_slope = write(dir.path(), "zero.json", r#"{"k": 1, "bottom": [[1, 0]]}"#);
    let o = run(&["eval", zero_slope.to_str().unwrap(), "--z", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bottom[0][1]"), "{}", stderr(&o));

    let unknown = write(dir.path(), "unknown.json", r#"{"k": 1, "tops": []}"#);
    assert_eq!(
        run(&["eval", unknown.to_str().unwrap(), "--z", "1"])
            .status
            .code(),
        Some(1)
    );

    let tight = run(&[
        "eval",
        disk.to_str().unwrap(),
        "--z",
        "0.2",
        "--max-terms",
        "5",
    ]);
    assert_eq!(tight.status.code(), Some(3));

    assert_eq!(run(&["eval"]).status.code(), Some(1));
}

#[test]
fn transform_emits_json_and_value() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "exp.json", EXP_SPEC);
    let o = run(&[
        "transform",
        spec.to_str().unwrap(),
        "--op",
        "I0+",
        "--gamma",
        "1",
        "--rho",
        "1",
        "--alpha",
        "1",
        "--lambda",
        "1",
        "--w",
        "1",
        "--at",
        "1",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let json: serde_json::Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    assert_eq!(json["prefactor"], 1.0);
    assert_eq!(json["exponent"], 1.0);
    assert_eq!(json["arg_sign"], 1);
    assert_eq!(json["spec"]["bottom"][1], serde_json::json!([2.0, 1.0]));
    assert!((value_line(&out) - (std::f64::consts::E - 1.0)).abs() < 1e-13);
}

#[test]
fn transforms_chain_through_a_pipe() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "exp.json", EXP_SPEC);
    let first = run(&[
        "transform",
        spec.to_str().unwrap(),
        "--op",
        "I0+",
        "--gamma",
        "1",
        "--rho",
        "1",
        "--alpha",
        "1",
        "--lambda",
        "1",
        "--w",
        "1",
    ]);
    assert!(first.status.success());
    let mut child = kwf()
        .args([
            "transform",
            "-",
            "--op",
            "D0+",
            "--gamma",
            "1",
            "--rho",
            "1",
            "--lambda",
            "1",
            "--w",
            "1",
            "--at",
            "1",
        ])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(&first.stdout)
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!((value_line(&stdout(&o)) - std::f64::consts::E).abs() < 1e-13);
}

#[test]
fn transform_hypothesis_violation_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "exp.json", EXP_SPEC);
    let o = run(&[
        "transform",
        spec.to_str().unwrap(),
        "--op",
        "I-",
        "--gamma",
        "1",
        "--rho",
        "1",
        "--alpha",
        "0.5",
        "--lambda",
        "1",
        "--w",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("alpha/(rho k) > gamma"),
        "{}",
        stderr(&o)
    );
    let o = run(&[
        "transform",
        spec.to_str().unwrap(),
        "--op",
        "I+",
        "--gamma",
        "1",
        "--rho",
        "1",
        "--alpha",
        "1",
        "--lambda",
        "1",
        "--w",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn oracle_examples() {
    let cases: [(&[&str], f64, f64); 3] = [
        (
            &[
                "--op", "I0+", "--gamma", "1", "--rho", "2", "--power", "1", "--at", "1",
            ],
            0.5,
            1e-12,
        ),
        (
            &[
                "--op", "I-", "--gamma", "0.5", "--rho", "2", "--exp", "3", "--at", "1",
            ],
            0.020325485548387925426,
            1e-10,
        ),
        (
            &[
                "--op", "D0+", "--gamma", "0.5", "--rho", "1", "--power", "1", "--at", "1",
            ],
            0.56418958354775628695,
            1e-7,
        ),
    ];
    for (args, want, tol) in cases {
        let o = kwf().arg("oracle").args(args).output().unwrap();
        assert!(o.status.success(), "{args:?}: {}", stderr(&o));
        let out = stdout(&o);
        assert!(
            ((value_line(&out) - want) / want).abs() < tol,
            "{args:?}: {out}"
        );
        assert!(out.contains("error: "));
    }
}

#[test]
fn oracle_with_spec_integrand() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "exp.json", EXP_SPEC);
    // I0+^1 of e^τ is e^s − 1
    let o = run(&[
        "oracle",
        "--op",
        "I0+",
        "--gamma",
        "1",
        "--rho",
        "1",
        "--spec",
        spec.to_str().unwrap(),
        "--alpha",
        "1",
        "--lambda",
        "1",
        "--w",
        "1",
        "--at",
        "1",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!((value_line(&stdout(&o)) - (std::f64::consts::E - 1.0)).abs() < 1e-12);
}

#[test]
fn oracle_numerical_failure_exits_3() {
    // τ^0 = 1 is not integrable against the right-sided kernel
    let o = run(&[
        "oracle", "--op", "I-", "--gamma", "0.5", "--rho", "1", "--power", "1", "--at", "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
    // a single Richardson level cannot meet the derivative tolerance check
    let o = run(&[
        "oracle",
        "--op",
        "D0+",
        "--gamma",
        "0.5",
        "--rho",
        "1",
        "--exp",
        "1",
        "--at",
        "1",
        "--fd-richardson-levels",
        "1",
        "--fd-step",
        "0.3",
        "--fd-tol",
        "1e-12",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn verify_writes_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let grid = write(
        dir.path(),
        "grid.json",
        r#"{"gamma": [0.5, 1.7], "rho": [2.0], "s": [1.0]}"#,
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = run(&[
            "verify",
            "--suite",
            "lemma2",
            "--grid-file",
            grid.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(stdout(&o).contains("Lemma2_1"));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "case_id,theorem,k,gamma,rho,alpha,lambda,w,s,closed_value,oracle_value,rel_error,status"
    );
    assert!(lines.all(|l| l.ends_with(",Pass")));
}

#[test]
fn verify_composition_and_json_format() {
    let o = run(&["verify", "--suite", "composition", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for row in v["summary"].as_array().unwrap() {
        assert_eq!(row["fail"], 0);
        assert!(row["max_rel_error"].as_f64().unwrap() <= 1e-12);
    }
}

#[test]
fn verify_empty_grid_file_gives_no_records() {
    let dir = tempfile::tempdir().unwrap();
    let grid = write(dir.path(), "empty.json", "");
    let out = dir.path().join("r.csv");
    let o = run(&[
        "verify",
        "--suite",
        "theorems",
        "--grid-file",
        grid.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 1);
}

#[test]
fn verify_reports_failures_with_exit_4() {
    // explicit α outside every hypothesis is skipped, not failed
    let dir = tempfile::tempdir().unwrap();
    let grid = write(
        dir.path(),
        "g.json",
        r#"{"gamma": [0.5], "rho": [1.0], "s": [1.0], "alpha": [-3.0]}"#,
    );
    let o = run(&[
        "verify",
        "--suite",
        "remark1",
        "--grid-file",
        grid.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("DomainSkipped"));
    // a coarse stencil with two levels converges to the wrong derivatives
    let grid = write(
        dir.path(),
        "h.json",
        r#"{"gamma": [0.5], "rho": [1.0], "s": [1.0]}"#,
    );
    let coarse = |levels: &str| {
        run(&[
            "verify",
            "--suite",
            "lemma2",
            "--grid-file",
            grid.to_str().unwrap(),
            "--fd-step",
            "0.4",
            "--fd-richardson-levels",
            levels,
            "--fd-tol",
            "1",
        ])
    };
    let o = coarse("2");
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    assert!(stdout(&o).contains(",Fail\n"));
    // one level gives no error estimate, so every derivative oracle errors
    let o = coarse("1");
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "disk.json",
        r#"{"k": 1, "top": [[1, 2]], "bottom": [[1, 1]]}"#,
    );
    let toml = write(dir.path(), "cfg.toml", "max_terms = 5\n");
    let args = ["eval", spec.to_str().unwrap(), "--z", "0.2"];
    let o = kwf()
        .args(args)
        .arg("--config")
        .arg(&toml)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = kwf().args(args).env("KWF_CONFIG", &toml).output().unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = kwf()
        .args(args)
        .env("KWF_CONFIG", &toml)
        .args(["--max-terms", "10000"])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let json = write(dir.path(), "cfg.json", r#"{"max_terms": 5}"#);
    let o = kwf()
        .args(args)
        .arg("--config")
        .arg(&json)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let bad = write(dir.path(), "bad.toml", "max_termz = 5\n");
    let o = kwf().args(args).arg("--config").arg(&bad).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("max_termz"), "{}", stderr(&o));
}
