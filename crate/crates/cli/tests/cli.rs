use std::path::{Path, PathBuf};
use std::process::Command;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn pirep(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_pirep"))
        .args(args)
        .env_remove("PIREP_DEPTH_CAP")
        .env_remove("PIREP_ELEMENT_CAP")
        .env_remove("PIREP_SAMPLES")
        .env_remove("PIREP_WORD_LENGTH")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn on(cmd: &str, file: &str, rest: &[&str]) -> Run {
    let path = data(file);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(rest);
    pirep(&args)
}

fn tmp() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

#[test]
fn check_unipotent_heisenberg() {
    let r = on("check-unipotent", "heisenberg.json", &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("a: unipotent, index 2"));
    assert!(r.stdout.contains("b: unipotent, index 2"));
}

#[test]
fn check_unipotent_words() {
    let r = on("check-unipotent", "heisenberg.json", &["--element", "a b", "--element", "a^-1 b^-1 a b"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("a b: unipotent, index 3"));
    assert!(r.stdout.contains("a^-1 b^-1 a b: unipotent, index 2"));
    let r = on("check-unipotent", "heisenberg.json", &["--element", "z"]);
    assert_eq!(r.code, 1);
}

#[test]
fn check_unipotent_scaling_fails() {
    let r = on("check-unipotent", "scaling.json", &[]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.contains("NotUnipotent"));
}

#[test]
fn malformed_scalar_reports_position() {
    let r = on("check-unipotent", "bad_scalar.json", &[]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("line 7, column"), "{}", r.stderr);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(pirep(&["kolchin"]).code, 1);
    assert_eq!(pirep(&["no-such-command"]).code, 1);
    assert_eq!(on("identity-check", "heisenberg.json", &["--length", "0"]).code, 1);
    assert_eq!(pirep(&["kolchin", "/nonexistent/rep.json"]).code, 1);
    assert_eq!(pirep(&["--help"]).code, 0);
}

#[test]
fn kolchin_examples() {
    let dir = tmp();
    let cert = dir.path().join("k.json");
    let r = on("kolchin", "heisenberg.json", &["--cert", cert.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("degree 3"));
    let v = pirep(&["verify-cert", cert.to_str().unwrap()]);
    assert_eq!(v.code, 0, "{}", v.stdout);

    let r = on("kolchin", "trivial.json", &[]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("degree 1"));

    let cert = dir.path().join("s.json");
    let r = on("kolchin", "scaling.json", &["--cert", cert.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.contains("stage"));
    assert_eq!(pirep(&["verify-cert", cert.to_str().unwrap()]).code, 0);
}

#[test]
fn identity_check_examples() {
    let dir = tmp();
    let c3 = dir.path().join("i3.json");
    let r = on("identity-check", "heisenberg.json", &["--length", "3", "--cert", c3.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("Verified"));
    assert!(r.stdout.contains("invariant series dimensions: 0 < 1 < 2 < 3"));

    let c2 = dir.path().join("i2.json");
    let r = on("identity-check", "heisenberg.json", &["--length", "2", "--cert", c2.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.contains("Witness (a, b)"));

    let cl = dir.path().join("lift.json");
    let r = on(
        "identity-check",
        "heisenberg.json",
        &["--length", "1", "--lift-through-radical", "--cert", cl.to_str().unwrap()],
    );
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("lifted bound 3"));

    for c in [&c3, &c2, &cl] {
        let v = pirep(&["verify-cert", c.to_str().unwrap()]);
        assert_eq!(v.code, 0, "{}", v.stdout);
    }
}

#[test]
fn lift_hypothesis_failure() {
    // diag(-1, 1) - I is not in the (zero) radical of the diagonal algebra
    let r = on("identity-check", "signed.json", &["--length", "1", "--lift-through-radical"]);
    assert_eq!(r.code, 2);
}

#[test]
fn pi_check_examples() {
    let dir = tmp();
    let c = dir.path().join("pi.json");
    let r = on("pi-check", "heisenberg.json", &["--max-degree", "6", "--cert", c.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("enveloping algebra dimension 4"));
    assert!(r.stdout.contains("S_2: fails"));
    assert_eq!(pirep(&["verify-cert", c.to_str().unwrap()]).code, 0);

    let r = on("pi-check", "diagonal.json", &["--max-degree", "4"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("minimal standard identity degree: 2"));

    let c = dir.path().join("m2.json");
    let r = on("pi-check", "full_m2.json", &["--max-degree", "5", "--cert", c.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("minimal standard identity degree: 4"));
    let v = pirep(&["verify-cert", c.to_str().unwrap()]);
    assert_eq!(v.code, 0, "{}", v.stdout);
    assert!(v.stdout.contains("S_4 rechecked"));

    let r = on("pi-check", "full_m2.json", &["--max-degree", "3"]);
    assert_eq!(r.code, 3);
}

#[test]
fn unipotent_radical_examples() {
    let dir = tmp();
    let c = dir.path().join("r.json");
    let r = on(
        "unipotent-radical",
        "order6_f3.json",
        &["--oracle", "--test", "u", "--test", "s", "--cert", c.to_str().unwrap()],
    );
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert!(r.stdout.contains("oracle agrees: radical order 3"));
    assert!(r.stdout.contains("u: member"));
    assert!(r.stdout.contains("s: non-member"));
    assert_eq!(pirep(&["verify-cert", c.to_str().unwrap()]).code, 0);

    let r = on("unipotent-radical", "heisenberg.json", &["--test", "a b a^-1", "--test", "1"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("a b a^-1: member"));
    assert!(r.stdout.contains("1: member"));

    let r = on("unipotent-radical", "signed.json", &["--test", "s"]);
    assert!(r.stdout.contains("s: non-member"));

    // infinite group: oracle cannot run
    let r = on("unipotent-radical", "heisenberg.json", &["--oracle", "--element-cap", "50"]);
    assert_eq!(r.code, 3);
}

#[test]
fn probe_examples() {
    let r = on("probe", "heisenberg.json", &["--kind", "engel", "--n", "2"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("Consistent"));
    assert!(r.stdout.contains("Evidence (not proof)"));

    let dir = tmp();
    let c = dir.path().join("e.json");
    let r = on("probe", "heisenberg.json", &["--kind", "engel", "--n", "1", "--cert", c.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.contains("CounterexamplePair(a, b)"));
    assert_eq!(pirep(&["verify-cert", c.to_str().unwrap()]).code, 0);

    let c = dir.path().join("n.json");
    let r = on("probe", "trivial.json", &["--kind", "nil", "--cert", c.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("index 1"));
    assert_eq!(pirep(&["verify-cert", c.to_str().unwrap()]).code, 0);

    let r = on("probe", "scaling.json", &["--kind", "nil", "--g", "d", "--x", "1", "--depth-cap", "4"]);
    assert_eq!(r.code, 0);
    let r = on("probe", "heisenberg.json", &["--kind", "algebraic", "--g", "a", "--x", "b", "--element-cap", "1000"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("StabilizedAt(2)"));
}

#[test]
fn caps_from_environment() {
    let path = data("heisenberg.json");
    let out = Command::new(env!("CARGO_BIN_EXE_pirep"))
        .args(["probe", path.to_str().unwrap(), "--kind", "engel", "--n", "2"])
        .env("PIREP_SAMPLES", "17")
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().contains("after 17 samples"));
}

#[test]
fn certificates_are_byte_identical() {
    let dir = tmp();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for c in [&a, &b] {
        on("probe", "heisenberg.json", &["--kind", "engel", "--n", "2", "--seed", "7", "--cert", c.to_str().unwrap()]);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    for c in [&a, &b] {
        on("kolchin", "heisenberg.json", &["--cert", c.to_str().unwrap()]);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn tampered_certificates_are_rejected() {
    let dir = tmp();
    let c = dir.path().join("k.json");
    on("kolchin", "heisenberg.json", &["--cert", c.to_str().unwrap()]);
    let text = std::fs::read_to_string(&c).unwrap();

    // edited representation: digest no longer matches
    let stale = text.replacen("\"1\"", "\"2\"", 1);
    std::fs::write(&c, &stale).unwrap();
    let r = pirep(&["verify-cert", c.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.contains("digest"));

    // edited claim: degree no longer matches the flag
    std::fs::write(&c, text.replace("\"degree\": 3", "\"degree\": 2")).unwrap();
    assert_eq!(pirep(&["verify-cert", c.to_str().unwrap()]).code, 2);

    std::fs::write(&c, "{ not json").unwrap();
    assert_eq!(pirep(&["verify-cert", c.to_str().unwrap()]).code, 1);
}
