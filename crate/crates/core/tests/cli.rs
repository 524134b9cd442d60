use std::process::Command;

fn powertower(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_powertower"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn verify_reports_equal_identities() {
    for eq in [
        "2^^3 * 2^^3 = 4^^2",
        "(1/2)^^3 * (1/2)^^3 = (1/4)^^3",
        "(2^(-1/2))^^2 * (2^(-1/2))^^2 = (1/2)^^3",
    ] {
        let (code, out, _) = powertower(&["verify", eq]);
        assert_eq!(code, 0, "{eq}: {out}");
        assert!(out.starts_with("Equal ("), "{out}");
        assert!(!out.contains("IntervalSeparation"), "{out}");
    }
}

#[test]
fn verify_not_equal_exits_one() {
    let (code, out, _) = powertower(&["verify", "2^^2 = 2^^3"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("NotEqual"), "{out}");
}

#[test]
fn json_verify_is_parseable() {
    let (code, out, _) = powertower(&["--format", "json", "verify", "2^^3 * 2^^3 = 4^^2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["outcome"], "Equal");
}

#[test]
fn canon_prints_normal_form() {
    let (code, out, _) = powertower(&["canon", "2^^3 * 2^^3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "2^8\n");
}

#[test]
fn eval_overflow_exits_four() {
    let (code, _, err) = powertower(&["eval", "2^^6"]);
    assert_eq!(code, 4, "{err}");
}

#[test]
fn syntax_errors_exit_three_with_position() {
    let (code, _, err) = powertower(&["canon", "2^^"]);
    assert_eq!(code, 3);
    assert!(err.contains("line 1, column 4"), "{err}");
    let (code, _, _) = powertower(&["--base", "4", "canon", "2"]);
    assert_eq!(code, 3);
}

#[test]
fn family_scan_output() {
    let (code, out, _) = powertower(&[
        "family-scan",
        "--heights",
        "2,2,3",
        "--max-num",
        "20",
        "--max-den",
        "6",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("solutions: {-1/2, 0}"), "{out}");
    assert!(out.contains("unknown: {}"), "{out}");
}

#[test]
fn solve_gamma_output() {
    let (code, out, _) = powertower(&[
        "solve-gamma",
        "--a",
        "-1",
        "--b",
        "-1",
        "--k",
        "3",
        "--m",
        "3",
        "--n",
        "3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "c = -2\n");
    let (_, out, _) = powertower(&[
        "solve-gamma",
        "--a",
        "1",
        "--b",
        "1",
        "--k",
        "2",
        "--m",
        "2",
        "--n",
        "2",
    ]);
    assert_eq!(out, "no rational c\n");
}

#[test]
fn search_writes_summary_and_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let out_str = out_dir.to_str().unwrap();
    let args = [
        "search",
        "--k",
        "3",
        "--m",
        "3",
        "--n",
        "3",
        "--max-num",
        "2",
        "--max-den",
        "2",
        "--out",
        out_str,
    ];
    let mut staged = args.to_vec();
    staged.extend(["--stop-after", "10"]);
    let (code, out, _) = powertower(&staged);
    assert_eq!(code, 0);
    assert!(out.starts_with("stopped after"), "{out}");
    let (code, out, _) = powertower(&args);
    assert_eq!(code, 0);
    assert!(out.contains("(-1, -1, -2)"), "{out}");
    let summary = std::fs::read_to_string(out_dir.join("summary.txt")).unwrap();
    assert_eq!(summary, out);
}
