use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn radhopf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radhopf"))
        .args(args)
        .env_remove("RADHOPF_MAX_NORM")
        .output()
        .expect("spawn radhopf")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn analyze(base: &str, p: &str, a: &str) -> Output {
    radhopf(&["analyze", "--base", base, "--p", p, "--a", a])
}

#[test]
fn exit_codes_follow_the_verdict() {
    assert_eq!(code(&analyze("Q", "3", "10")), 0);
    assert_eq!(code(&analyze("Q", "3", "2")), 20);
    assert_eq!(code(&analyze("Q", "5", "76")), 10);
    assert_eq!(code(&analyze("Qsqrt-5", "3", "190")), 10);
    assert_eq!(code(&analyze("Q", "4", "10")), 2);
    assert_eq!(code(&analyze("Q", "3", "8")), 2);
    assert_eq!(code(&analyze("Qsqrt5", "3", "10")), 2);
    assert_eq!(code(&analyze("Q", "3", "ten")), 2);
    assert_eq!(code(&radhopf(&["analyze", "--base", "Q"])), 2);
    let limited = Command::new(env!("CARGO_BIN_EXE_radhopf"))
        .args(["analyze", "--base", "Q", "--p", "3", "--a", "1000003"])
        .env("RADHOPF_MAX_NORM", "5")
        .output()
        .unwrap();
    assert_eq!(code(&limited), 3);
}

#[test]
fn json_report_for_cube_root_of_ten() {
    let out = analyze("Q", "3", "10");
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["verdict"], "free");
    assert_eq!(v["freeness"]["generator"]["text"], "(1 + a + a^2)/3");
    assert_eq!(v["verification"]["global"]["discriminant"], "-300");
    assert_eq!(v["verification"]["global"]["index"], "3");
    assert_eq!(v["verification"]["generator"]["passed"], true);
}

#[test]
fn reports_are_deterministic() {
    for (base, p, a) in [("Q", "3", "10"), ("Q", "5", "76"), ("Qsqrt-5", "3", "190"), ("Q", "3", "17")] {
        assert_eq!(stdout(&analyze(base, p, a)), stdout(&analyze(base, p, a)));
    }
}

fn write_report(dir: &Path, base: &str, p: &str, a: &str) -> std::path::PathBuf {
    let path = dir.join(format!("{base}-{p}-{a}.json"));
    let out = radhopf(&[
        "analyze", "--base", base, "--p", p, "--a", a, "--output", path.to_str().unwrap(),
    ]);
    assert!(matches!(code(&out), 0 | 10 | 20));
    path
}

#[test]
fn verify_accepts_untouched_reports_and_rejects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    for (base, p, a) in [("Q", "3", "10"), ("Q", "5", "76"), ("Qsqrt-5", "3", "190"), ("Q", "3", "2")] {
        let path = write_report(dir.path(), base, p, a);
        let out = radhopf(&["verify", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}", stdout(&out));
        assert!(stdout(&out).ends_with("verification passed\n"));
    }

    let path = write_report(dir.path(), "Q", "3", "10");
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    v["freeness"]["generator"]["coords"][1]["x"]["num"] = Value::from("2");
    let tampered = dir.path().join("tampered.json");
    fs::write(&tampered, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let out = radhopf(&["verify", tampered.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL"));

    v = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    v["verdict"] = Value::from("not-free-congruence-obstruction");
    fs::write(&tampered, serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(code(&radhopf(&["verify", tampered.to_str().unwrap()])), 1);

    v = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    v["schema_version"] = Value::from(0);
    fs::write(&tampered, serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(code(&radhopf(&["verify", tampered.to_str().unwrap()])), 2);

    fs::write(&tampered, "{ not json").unwrap();
    assert_eq!(code(&radhopf(&["verify", tampered.to_str().unwrap()])), 2);
}

fn sweep(args: &[&str]) -> Output {
    let mut all = vec!["sweep"];
    all.extend_from_slice(args);
    radhopf(&all)
}

/// Tameness above `p` over `Q`: after removing `p`-th powers of `p`, the
/// radicand is prime to `p` and `a^(p-1) = 1 mod p^2`.
fn tame_oracle(p: i64, mut a: i64) -> bool {
    while a % p.pow(p as u32) == 0 {
        a /= p.pow(p as u32);
    }
    if a % p == 0 {
        return false;
    }
    let m = p * p;
    (0..p - 1).fold(1, |acc, _| acc * a.rem_euclid(m) % m) == 1
}

fn is_cube(a: i64) -> bool {
    let r = (a.abs() as f64).cbrt().round() as i64;
    (r - 1..=r + 1).any(|s| s * s * s == a.abs())
}

#[test]
fn sweep_tabulates_non_cubes() {
    let out = sweep(&["--base", "Q", "--p", "3", "--from", "2", "--to", "200"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a,tame,verdict,normalized,generator,shape_hash"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    let expected: Vec<i64> = (2..=200).filter(|&a| !is_cube(a)).collect();
    let got: Vec<i64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(got, expected);
    for r in &rows {
        let a: i64 = r[0].parse().unwrap();
        let tame = tame_oracle(3, a);
        assert_eq!(r[1] == "true", tame, "a = {a}");
        assert_eq!(r[2] == "wild", !tame, "a = {a}");
    }
    let ten = rows.iter().find(|r| r[0] == "10").unwrap();
    assert_eq!(ten[4], "(1 + a + a^2)/3");
}

#[test]
fn sweep_at_five_finds_the_tame_residues() {
    let out = sweep(&["--base", "Q", "--p", "5", "--from", "2", "--to", "101"]);
    let tame: Vec<String> = stdout(&out)
        .lines()
        .skip(1)
        .filter(|l| l.split(',').nth(1) == Some("true"))
        .map(|l| l.split(',').next().unwrap().to_string())
        .collect();
    let expected: Vec<String> = (2..=101)
        // 32 = 2^5 gives a trivial extension and is skipped.
        .filter(|&a| tame_oracle(5, a) && a != 32)
        .map(|a| a.to_string())
        .collect();
    assert_eq!(tame, expected);
    assert_eq!(expected, ["7", "18", "24", "26", "43", "49", "51", "57", "68", "74", "76", "82", "93", "99", "101"]);
}

#[test]
fn empty_sweep_prints_only_the_header() {
    let out = sweep(&["--base", "Q", "--p", "3", "--from", "10", "--to", "5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "a,tame,verdict,normalized,generator,shape_hash\n");
}

#[test]
fn sweep_resumes_from_a_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.csv");
    let part = dir.path().join("part.csv");
    let ckpt = dir.path().join("ckpt.json");
    let base = ["--base", "Q", "--p", "3", "--from", "-60", "--to", "60", "--chunk", "10"];
    let mut args = base.to_vec();
    args.extend(["--output", full.to_str().unwrap()]);
    assert_eq!(code(&sweep(&args)), 0);

    let mut args = base.to_vec();
    args.extend([
        "--output",
        part.to_str().unwrap(),
        "--checkpoint",
        ckpt.to_str().unwrap(),
        "--max-chunks",
        "3",
    ]);
    assert_eq!(code(&sweep(&args)), 0);
    assert!(ckpt.exists());
    let partial = fs::read_to_string(&part).unwrap();
    assert!(partial.len() < fs::read_to_string(&full).unwrap().len());

    // Simulate a crash after a write that the checkpoint did not record.
    fs::write(&part, format!("{partial}999,garbage\n")).unwrap();
    let mut args = base.to_vec();
    args.extend(["--output", part.to_str().unwrap(), "--checkpoint", ckpt.to_str().unwrap()]);
    assert_eq!(code(&sweep(&args)), 0);
    assert_eq!(fs::read_to_string(&part).unwrap(), fs::read_to_string(&full).unwrap());

    let mut args = base.to_vec();
    args.extend(["--checkpoint", ckpt.to_str().unwrap()]);
    assert_eq!(code(&sweep(&args)), 2);
}
