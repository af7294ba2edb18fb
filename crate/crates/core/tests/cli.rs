use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pencil-monodromy"))
}

#[test]
fn compute_json_exits_zero_with_schema() {
    let out = bin()
        .args(["compute", "--p", "3", "--q", "2", "--alphas", "2,1", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "pencil-monodromy/1");
    assert!(v["verdicts"].as_array().unwrap().iter().all(|x| x["status"] != "fail"));
    assert_eq!(v["alexander"]["generic_linear"]["coeffs"], serde_json::json!([-1, 1, -1, 1, -1, 1]));
}

#[test]
fn verify_defaults_exit_zero() {
    let out = bin().args(["verify", "--p", "3", "--q", "2"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");
}

#[test]
fn alexander_both_formulas() {
    let out = bin()
        .args(["alexander", "--p", "4", "--q", "2", "--formula", "both"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("generic-linear: t^7 - t^6 + t^5 - t^4 + t^3 - t^2 + t - 1"));
    assert!(text.contains("tame-maximal:"));
}

#[test]
fn injected_bad_order_exits_nonzero() {
    let out = bin().args(["selftest", "--quick", "--inject-bad-order"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("infinity-check"));
}

#[test]
fn invalid_alphas_exit_two() {
    let out = bin()
        .args(["compute", "--p", "3", "--q", "2", "--alphas", "1,2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn relations_and_braids_to_file() {
    let dir = std::env::temp_dir().join(format!("pm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let rel = dir.join("rel.txt");
    let st = bin()
        .args(["relations", "symbolic", "--p", "2", "--q", "2", "--out"])
        .arg(&rel)
        .status()
        .unwrap();
    assert!(st.success());
    let text = std::fs::read_to_string(&rel).unwrap();
    assert!(text.starts_with("generators: a0_1 a0_2 a1_1 a1_2 w"));
    assert!(text.contains("twist i=1 j=2"));

    let out = bin().args(["braid", "--p", "2", "--q", "2"]).output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 3);
    std::fs::remove_dir_all(&dir).ok();
}
