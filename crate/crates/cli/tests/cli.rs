use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_novikov"))
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn run(args: &[&str], file: &Path) -> Output {
    bin().args(&args[..1]).arg(file).args(&args[1..]).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn temp(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn shipped_scenarios_pass_and_are_reproducible() {
    for name in ["circle.json", "sphere_equator.json", "torus_domain.json"] {
        let a = run(&["report"], &scenario(name));
        let b = run(&["report"], &scenario(name));
        assert_eq!(a.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&a.stdout));
        assert_eq!(a.stdout, b.stdout, "{name}");
        let r = json(&a);
        assert_eq!(r["schema_version"], 1);
        assert!(r["commands"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
    }
}

#[test]
fn tetrahedron_boundary_verifies() {
    let out = run(&["verify", "--target", "S2"], &scenario("sphere_equator.json"));
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn corrupted_square_zero_fails_and_names_the_entry() {
    let f = temp(
        r#"{"schema_version":1,"declarations":[{"name":"bad","kind":"chain_complex",
            "coefficients":{"kind":"integer"},
            "basis":[{"id":"a","degree":0},{"id":"e","degree":1},{"id":"f","degree":2}],
            "differentials":[{"degree":1,"entries":[["a","e","1"]]},{"degree":2,"entries":[["e","f","1"]]}]}],
            "commands":[{"op":"verify","target":"bad"}]}"#,
    );
    let out = run(&["verify"], f.path());
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    let d = &r["commands"][0]["discrepancies"][0];
    assert_eq!((d["row"].as_str(), d["col"].as_str()), (Some("a"), Some("f")));
}

#[test]
fn projective_plane_homology() {
    let f = temp(r#"{"schema_version":1,"declarations":[{"name":"P","kind":"cell_complex","corpus":"projective_plane"}]}"#);
    let out = run(&["homology", "--target", "P"], f.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["commands"][0]["result"]["text"], "Z, Z/2, 0");
}

#[test]
fn torus_unroll_compare_reports_order_five() {
    let out = run(&["unroll-compare"], &scenario("torus_domain.json"));
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["commands"][0]["result"]["order"], 5);
    assert_eq!(r["commands"][0]["result"]["holds"], true);
}

#[test]
fn stages_flag_overrides_scenario() {
    let out = run(&["unroll-compare", "--stages", "2"], &scenario("torus_domain.json"));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["commands"][0]["result"]["order"], 3);
}

#[test]
fn invert_prints_a_series() {
    let out = run(&["invert", "--target", "u", "--precision", "3"], &scenario("circle.json"));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        json(&out)["commands"][0]["result"]["inverse"],
        "(1)*x^[0]*z^0 + (-1)*x^[1]*z^1 + (1)*x^[2]*z^2 + O(z^3)"
    );
}

#[test]
fn sphere_glue_check_passes() {
    let out = run(&["glue-check", "--format", "text"], &scenario("sphere_equator.json"));
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("PASS glue-check equator"));
    assert!(text.ends_with("status: pass\n"));
}

#[test]
fn wrong_expectation_fails() {
    let f = temp(
        r#"{"schema_version":1,"declarations":[{"name":"K","kind":"cell_complex","corpus":"klein_bottle"}],
            "commands":[{"op":"homology","target":"K","expect":"Z, Z, 0"}]}"#,
    );
    let out = run(&["report"], f.path());
    assert_eq!(out.status.code(), Some(1));
    let d = &json(&out)["commands"][0]["discrepancies"][0];
    assert_eq!(d["actual"], "Z, Z+Z/2, 0");
}

#[test]
fn setting_check_epsilon_flag() {
    let out = run(&["setting-check", "--epsilon", "1/2"], &scenario("circle.json"));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["commands"][0]["parameters"]["epsilon"], "1/2");
}

#[test]
fn seeded_random_fields_are_reproducible() {
    let f = temp(
        r#"{"schema_version":1,"declarations":[{"name":"T","kind":"cell_complex","corpus":"torus"},
            {"name":"v","kind":"field","complex":"T","random_keep":1.0}],
            "commands":[{"op":"homology","target":"v","expect":"Z, Z^2, Z"}]}"#,
    );
    for seed in ["1", "2"] {
        let a = run(&["report", "--seed", seed], f.path());
        let b = run(&["report", "--seed", seed], f.path());
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn input_errors_exit_two() {
    let cases = [
        ("not json", "parse error"),
        (r#"{"schema_version":2}"#, "schema_version"),
        (r#"{"schema_version":1,"declarations":[{"name":"a","kind":"torus"}]}"#, "unknown kind"),
        (
            r#"{"schema_version":1,"declarations":[{"name":"v","kind":"field","complex":"K","pairs":[]}]}"#,
            "not declared",
        ),
        (
            r#"{"schema_version":1,"declarations":[{"name":"K","kind":"cell_complex","corpus":"circle"}],
                "commands":[{"op":"frobnicate","target":"K"}]}"#,
            "unknown command",
        ),
        (
            r#"{"schema_version":1,"declarations":[{"name":"K","kind":"cell_complex","corpus":"circle"}],
                "commands":[{"op":"verify","target":"L"}]}"#,
            "undeclared",
        ),
        (
            r#"{"schema_version":1,"declarations":[{"name":"u","kind":"series","twist":{"rank":0,"twist":[]},"value":"(1)*z^0"}],
                "commands":[{"op":"invert","target":"u"}]}"#,
            "explicit precision",
        ),
        (
            r#"{"schema_version":1,"declarations":[{"name":"K","kind":"cell_complex","corpus":"circle"}],
                "commands":[{"op":"invert","target":"K","precision":3}]}"#,
            "does not apply",
        ),
    ];
    for (text, needle) in cases {
        let f = temp(text);
        let out = run(&["report"], f.path());
        let err = String::from_utf8_lossy(&out.stderr);
        assert_eq!(out.status.code(), Some(2), "{text}: {err}");
        assert!(err.contains(needle), "{text}: {err}");
    }
    let out = run(&["report"], Path::new("/nonexistent/scenario.json"));
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["verify"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn timing_is_opt_in() {
    let plain = json(&run(&["verify", "--target", "S1"], &scenario("circle.json")));
    assert!(plain["commands"][0].get("timing_ms").is_none());
    let timed = json(&run(&["verify", "--target", "S1", "--timing"], &scenario("circle.json")));
    assert!(timed["commands"][0]["timing_ms"].is_number());
}
