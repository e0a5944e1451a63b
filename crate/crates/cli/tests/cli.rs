use std::path::PathBuf;
use std::process::{Command, Output};

fn problem(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("problems")
        .join(name)
}

fn orbifold(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbifold"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = orbifold(args);
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn path(name: &str) -> String {
    problem(name).to_string_lossy().into_owned()
}

#[test]
fn exit_codes_follow_the_verdict() {
    let cases = [
        ("swap.json", 0),
        ("weyl.json", 0),
        ("symplectic.json", 0),
        ("cyclic3.json", 0),
        ("hecke_negative.json", 1),
        ("invalid.json", 2),
        ("incompatible.json", 3),
    ];
    for (file, code) in cases {
        for mode in ["theorem", "oracle", "both"] {
            let (got, stdout, stderr) = run(&["check", "--mode", mode, &path(file)]);
            assert_eq!(got, code, "{file} --mode {mode}\n{stdout}{stderr}");
        }
    }
}

#[test]
fn missing_file_is_invalid_input() {
    let (code, _, stderr) = run(&["check", "/nonexistent/problem.json"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("cannot read"));
}

#[test]
fn both_mode_merges_provenances() {
    let (code, stdout, _) = run(&["check", &path("hecke_negative.json")]);
    assert_eq!(code, 1);
    assert!(stdout.starts_with("verdict: not-PBW\n"));
    assert!(stdout.contains("theorem: not-PBW"));
    assert!(stdout.contains("oracle:  not-PBW"));
    assert!(stdout.contains("agreement: yes"));
    assert!(stdout.contains("[C3] g=g0 i=1 j=2 k=3"));
    assert!(stdout.contains("word=v3*v2*v1: (z - 1) * v1*t.g0"));
}

#[test]
fn structured_report() {
    let (code, stdout, _) = run(&[
        "report",
        "--format",
        "structured",
        &path("hecke_negative.json"),
    ]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["verdict"], "not-PBW");
    assert_eq!(v["agreement"], true);
    assert_eq!(v["provenance"], serde_json::json!(["theorem", "oracle"]));
    let theorem = &v["reports"][0];
    assert_eq!(theorem["statistics"]["C3"]["violations"], 6);
    let first = &theorem["violations"]["C3"][0];
    assert_eq!(
        first["witness"],
        serde_json::json!({"g": "g0", "i": 1, "j": 2, "k": 3})
    );
    let oracle = &v["reports"][1];
    assert_eq!(
        oracle["violations"]["overlap"][0]["residual"],
        "(z - 1) * v1*t.g0"
    );
}

#[test]
fn incompatible_action_names_the_witness() {
    let (code, _, stderr) = run(&["check", &path("incompatible.json")]);
    assert_eq!(code, 3);
    assert!(stderr.contains("incompatible-action"));
    assert!(stderr.contains("g1 is not q-compatible at (i, j) = (1, 2)"));
}

#[test]
fn reduce_examples() {
    let (code, stdout, stderr) = run(&["reduce", &path("swap.json"), "-e", "t.g1*t.g1"]);
    assert_eq!((code, stdout.as_str(), stderr.as_str()), (0, "t.g0\n", ""));
    let (_, stdout, _) = run(&["reduce", &path("swap.json"), "-e", "v2*v1"]);
    assert_eq!(stdout, "-v1*v2\n");
    let (_, stdout, _) = run(&["reduce", &path("symplectic.json"), "-e", "v2*v1*t.g1"]);
    assert_eq!(stdout, "-1/2 * t.g0 - t.g1 + v1*v2*t.g1\n");
}

#[test]
fn reduce_is_strategy_independent_on_pbw_input() {
    let expr = "(v2 + t.g1)^3 * v1 - 1/2*z*v2*t.g1*v1";
    let file = path("swap_minus_identity.json");
    let (_, reference, _) = run(&["reduce", &file, "-e", expr]);
    for extra in [
        &["--strategy", "rightmost"][..],
        &["--strategy", "random", "--seed", "7"],
        &["--strategy", "random", "--seed", "99"],
    ] {
        let mut args = vec!["reduce", file.as_str(), "-e", expr];
        args.extend_from_slice(extra);
        assert_eq!(run(&args).1, reference, "{extra:?}");
    }
}

#[test]
fn reduce_warns_on_non_pbw_input() {
    let (code, stdout, stderr) = run(&["reduce", &path("hecke_negative.json"), "-e", "v3*v2*v1"]);
    assert_eq!(code, 0);
    assert!(!stdout.is_empty());
    assert!(stderr.contains("warning"));
}

#[test]
fn reduce_rejects_bad_expressions() {
    let (code, _, stderr) = run(&["reduce", &path("swap.json"), "-e", "v3"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("out of range"));
    let (code, _, _) = run(&["reduce", &path("swap.json"), "-e", "v1 +"]);
    assert_eq!(code, 2);
}

#[test]
fn group_info_examples() {
    let (code, stdout, _) = run(&["group-info", &path("weyl.json")]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("order: 1\n"));
    assert!(stdout.contains("g0 | g0"));

    let (_, stdout, _) = run(&[
        "group-info",
        "--format",
        "structured",
        &path("cyclic3.json"),
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["order"], 3);
    assert_eq!(v["abelian"], true);
    assert_eq!(v["conjugacy_classes"].as_array().unwrap().len(), 3);

    let (_, stdout, _) = run(&["group-info", &path("swap_minus_identity.json")]);
    assert!(stdout.starts_with("order: 4\n"));
}

#[test]
fn group_info_reports_incompatible_elements() {
    let (code, stdout, _) = run(&["group-info", &path("incompatible.json")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("g0 = [[1, 0], [0, 1]]  order 1  q-compatible"));
    assert!(stdout.contains("NOT q-compatible at (1, 2)"));
}

#[test]
fn usage_errors_are_invalid_input() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(
        run(&["check", "--mode", "sideways", &path("swap.json")]).0,
        2
    );
    assert_eq!(run(&["--help"]).0, 0);
}
