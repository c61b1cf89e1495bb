use assert_cmd::Command;

fn cli() -> Command {
    let mut c = Command::cargo_bin("handlecalc").unwrap();
    c.env("HANDLECALC_FIXTURES", concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures"));
    c
}

fn stdout(args: &[&str]) -> (i32, String, String) {
    let out = cli().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn wu_invariants() {
    let (code, out, _) = stdout(&["invariants", "wu.hgd"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "H2 = Z/2"), "{out}");
    assert!(out.lines().any(|l| l == "H1 = 0"), "{out}");
    assert!(out.lines().any(|l| l == "chi = 0"), "{out}");
}

#[test]
fn mazur_script_passes() {
    let (code, out, _) = stdout(&["run", "mazur_b5.kms"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().any(|l| l == "PASS recognize=EmptyS4orB5"), "{out}");
    assert!(!out.contains("DRIFT"));
}

#[test]
fn broken_diagram_is_a_domain_error() {
    let (code, out, _) = stdout(&["validate", "broken.ddc"]);
    assert_eq!(code, 1);
    assert!(out.contains("dangling slot reference"), "{out}");
    let (code, out, _) = stdout(&["validate", "mazur.ddc"]);
    assert_eq!((code, out.trim()), (0, "valid"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(stdout(&["frobnicate"]).0, 2);
    assert_eq!(stdout(&["compile", "heegaard"]).0, 2);
    assert_eq!(stdout(&["invariants", "wu.hgd", "--format", "fancy"]).0, 2);
}

#[test]
fn unreadable_file_exits_1() {
    let (code, _, err) = stdout(&["invariants", "no_such_file.ddc"]);
    assert_eq!(code, 1);
    assert!(err.contains("cannot read"));
}

#[test]
fn machine_format_is_json() {
    let (code, out, _) = stdout(&["--format", "machine", "invariants", "mazur.ddc", "--watch", "h1,pi1ab"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["h1"], "0");
    assert_eq!(v["pi1ab"], "0");
}

#[test]
fn output_is_stable() {
    let a = stdout(&["run", "cobordism_alpha.kms"]);
    let b = stdout(&["run", "cobordism_alpha.kms"]);
    assert_eq!(a, b);
    assert_eq!(a.0, 0, "{}", a.1);
}

#[test]
fn compile_one_surgery_matches_fixture() {
    let (code, out, _) = stdout(&["compile", "one-surgery", "s1xb3.ddc", "--circle", "gamma2.frag", "--framing", "0"]);
    assert_eq!(code, 0);
    let want = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/one_surgery_gamma2.ddc")).unwrap();
    let want: Vec<&str> = want.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(out.trim_end(), want.join("\n"));
}

#[test]
fn compile_surgery_and_simplify() {
    let dir = std::env::temp_dir().join(format!("handlecalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("alpha.ddc");
    let (code, _, err) = stdout(&["compile", "surgery", "cobordism.hgd", "--side", "alpha", "-o", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let (code, text, _) = stdout(&["simplify", out.to_str().unwrap(), "--budget", "500"]);
    assert_eq!(code, 0);
    assert!(text.lines().last().unwrap().starts_with("diagram"), "{text}");
    let (_, inv, _) = stdout(&["invariants", out.to_str().unwrap(), "--watch", "recognize"]);
    assert_eq!(inv.trim(), "recognize = Unknown");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn failing_script_step_is_reported() {
    let dir = std::env::temp_dir().join(format!("handlecalc-cli-fail-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("bad.kms");
    std::fs::write(&p, "load mazur.ddc\nkirby pair12 annihilate k=K d=D\n").unwrap();
    let (code, _, err) = stdout(&["run", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("step 1"), "{err}");
    std::fs::remove_dir_all(dir).ok();
}
