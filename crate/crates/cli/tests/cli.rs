use std::io::Write;
use std::process::{Command, Output};

fn innerfield(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_innerfield")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn commutator_prints_the_canonical_form() {
    let o = innerfield(&["commutator", "a(k;K)", "a'(h;H)"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "2 * omega(h) * Lambda^-4 * twopi^7 * delta4(H,K) * delta3(h,k)");

    let o = innerfield(&["anticommutator", "b(k,s=1;K)", "d'(h,s=1;H)"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn normal_order_drops_contact_terms() {
    let o = innerfield(&["normal-order", "a(k;K) * a'(h;H)"]);
    assert_eq!(stdout(&o).trim(), "a'(h;H) * a(k;K)");
    let o = innerfield(&["normal-form", "a(k;K) * a'(h;H)"]);
    assert!(stdout(&o).contains("delta3(h,k)"));
}

#[test]
fn vev_of_time_ordered_pairs() {
    let o = innerfield(&["vev", "T a(k;K) a'(h;H)"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("agreement: exact"));

    let o = innerfield(&["vev", "T A(k,g=1;K,G=1) A'(h,g=1;H,G=1)"]);
    assert!(stdout(&o).contains("agreement: prefactor"), "{}", stdout(&o));
}

#[test]
fn json_output_is_an_object() {
    let o = innerfield(&["--format", "json", "vev", "a(k;K) * a'(h;H)"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "vev");
    assert!(v["result"]["result"].as_str().unwrap().contains("delta3(h,k)"));
}

#[test]
fn exit_codes() {
    assert_eq!(innerfield(&["verify", "--suite", "ccr"]).status.code(), Some(0));
    // Numeric cases cannot meet a zero-width bound.
    assert_eq!(innerfield(&["verify", "--suite", "kinematics", "--tol", "1e-30"]).status.code(), Some(1));
    assert_eq!(innerfield(&["verify", "--suite", "ccr", "--tol", "1e-30"]).status.code(), Some(0));
    // Invalid operator labels are evaluation errors.
    assert_eq!(innerfield(&["commutator", "A(k,g=1;K,G=0)", "a(k;K)"]).status.code(), Some(1));
    assert_eq!(innerfield(&["commutator", "a(k;K", "a(k;K)"]).status.code(), Some(1));
    // Bad configuration and usage.
    assert_eq!(innerfield(&["verify", "--tol", "0"]).status.code(), Some(2));
    assert_eq!(innerfield(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(innerfield(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn syntax_errors_carry_a_position() {
    let o = innerfield(&["normal-form", "a(k;K) * * a'(h;H)"]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("1:10"), "{err}");
}

#[test]
fn reports_are_byte_identical_for_a_seed() {
    let run = || innerfield(&["--format", "json", "verify", "--suite", "unitarity", "--seed", "11"]).stdout;
    let (a, b) = (run(), run());
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["seed"], 11);
    assert!(v["cases"].as_array().unwrap().len() > 100);
    let other = innerfield(&["--format", "json", "verify", "--suite", "unitarity", "--seed", "12"]).stdout;
    assert_ne!(a, other);
}

#[test]
fn config_file_is_read() {
    let cfg = file("# loose\ntolerance = 1e-6\nseed = 3\nformat = json\n");
    let o = innerfield(&["--config", cfg.path().to_str().unwrap(), "verify", "--suite", "kinematics"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 3);
    assert_eq!(v["config"]["tolerance"], 1e-6);

    let bad = file("lambda = -1\n");
    let o = innerfield(&["--config", bad.path().to_str().unwrap(), "verify", "--suite", "ccr"]);
    assert_eq!(o.status.code(), Some(2));
    let o = innerfield(&["--config", "/nonexistent/innerfield.conf", "verify"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reduce_free_four_point() {
    let greens = file("grav_limit = true\n");
    let legs = file("in a [1,0,0]\nin a [0,1,0]\nout a [1,0,0]\nout a [0,1,0]\n");
    let o = innerfield(&["reduce", greens.path().to_str().unwrap(), "--legs", legs.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("normalized elastic: 1\n"), "{out}");
    assert!(out.contains("connected: 0"), "{out}");

    let zero = file("vertex g = 0\n");
    let o = innerfield(&[
        "--format",
        "json",
        "reduce",
        zero.path().to_str().unwrap(),
        "--legs",
        legs.path().to_str().unwrap(),
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["connected"]["re"], 0.0);
    assert_eq!(v["vertices"][0], "g");
}

#[test]
fn reduce_rejects_off_shell_legs() {
    let greens = file("");
    let legs = file("in a [1,0,0] E=5\nout a [1,0,0]\n");
    let o = innerfield(&["reduce", greens.path().to_str().unwrap(), "--legs", legs.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}
