//! End-to-end runs of the command-line dispatcher on the shipped game files.

use std::path::PathBuf;

use eqcheck::cli::dispatch;
use serde_json::Value;

fn game(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("games")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> (Value, i32) {
    let argv = std::iter::once("eqcheck").chain(args.iter().copied());
    let (report, code) = dispatch(argv);
    let json = if report.usage.is_some() {
        Value::Null
    } else {
        serde_json::from_str(&report.render()).unwrap()
    };
    (json, code)
}

#[test]
fn zero_one_pair_coalition() {
    let (r, code) = run(&[
        "check",
        "robust",
        "--game",
        &game("zeroone.json"),
        "--profile",
        &game("all0.json"),
        "--k",
        "2",
        "--t",
        "0",
    ]);
    assert_eq!(code, 1);
    assert_eq!(r["status"], "fails");
    let w = &r["result"]["sub_verdicts"][0]["verdict"]["witness"];
    assert_eq!(w["kind"], "coalition-deviation");
    assert_eq!(w["coalition"], serde_json::json!(["1", "2"]));
    for m in w["payoffs"].as_array().unwrap() {
        assert_eq!(
            (m["before"].as_str(), m["after"].as_str()),
            (Some("1"), Some("2"))
        );
    }
}

#[test]
fn roshambo_has_no_machine_equilibrium() {
    let (r, code) = run(&["compgame", "enumerate", "--game", &game("roshambo.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["equilibria"], serde_json::json!([]));
}

#[test]
fn help_exits_zero() {
    let (report, code) = dispatch(["eqcheck", "--help"]);
    assert_eq!(code, 0);
    assert!(report.render().contains("Usage"));
}

#[test]
fn usage_parse_and_bound_errors() {
    assert_eq!(
        run(&["check", "robust", "--game", &game("zeroone.json")]).1,
        2
    );
    assert_eq!(run(&["frobnicate"]).1, 2);
    assert_eq!(
        run(&[
            "check",
            "nash",
            "--game",
            "/nonexistent.json",
            "--profile",
            "x"
        ])
        .1,
        2
    );
    // A profile file where a game is expected.
    assert_eq!(
        run(&[
            "check",
            "nash",
            "--game",
            &game("all0.json"),
            "--profile",
            &game("all0.json")
        ])
        .1,
        2
    );
    let (r, code) = run(&[
        "compgame",
        "enumerate",
        "--game",
        &game("roshambo.json"),
        "--work-bound",
        "10",
    ]);
    assert_eq!(code, 3);
    assert_eq!(r["status"], "bound-exceeded");
}

#[test]
fn empty_and_malformed_files_exit_two() {
    let dir = std::env::temp_dir().join(format!("eqcheck-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let empty = dir.join("empty.json");
    std::fs::write(&empty, "").unwrap();
    let prior = dir.join("prior.json");
    std::fs::write(
        &prior,
        r#"{"format": 1, "kind": "bayesian", "body": {"players": ["1"], "types": [["a", "b"]],
            "actions": [["x"]], "prior": ["1/2", "2/5"], "utilities": [[["1"]], [["0"]]]}}"#,
    )
    .unwrap();
    let (r, code) = run(&[
        "check",
        "bayes-nash",
        "--game",
        empty.to_str().unwrap(),
        "--profile",
        "x",
    ]);
    assert_eq!(code, 2);
    assert!(r["error"].as_str().unwrap().contains("syntax error"));
    let (r, code) = run(&[
        "check",
        "bayes-nash",
        "--game",
        prior.to_str().unwrap(),
        "--profile",
        "x",
    ]);
    assert_eq!(code, 2);
    assert!(r["error"].as_str().unwrap().contains("prior"), "{r}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reports_are_deterministic() {
    let args = [
        "simulate",
        "ba",
        "--n",
        "4",
        "--t",
        "1",
        "--protocol",
        "echo-first",
    ];
    let a = dispatch(std::iter::once("eqcheck").chain(args)).0.render();
    let b = dispatch(std::iter::once("eqcheck").chain(args)).0.render();
    assert_eq!(a, b);
}

#[test]
fn every_command_family_runs() {
    let cases: Vec<(Vec<String>, i32)> = vec![
        (
            vec![
                "check".into(),
                "nash".into(),
                "--game".into(),
                game("pd.json"),
                "--profile".into(),
                game("pd-dd.json"),
            ],
            0,
        ),
        (
            vec![
                "check".into(),
                "nash".into(),
                "--game".into(),
                game("pd.json"),
                "--profile".into(),
                game("pd-cc.json"),
            ],
            1,
        ),
        (
            vec![
                "check".into(),
                "bayes-nash".into(),
                "--game".into(),
                game("ba-bayesian.json"),
                "--profile".into(),
                game("ba-follow.json"),
            ],
            0,
        ),
        (
            vec![
                "check".into(),
                "robust".into(),
                "--game".into(),
                game("bargaining.json"),
                "--profile".into(),
                game("all-stay.json"),
                "--k".into(),
                "5".into(),
                "--t".into(),
                "1".into(),
            ],
            1,
        ),
        (
            vec![
                "enumerate".into(),
                "pure-robust".into(),
                "--game".into(),
                game("pd.json"),
                "--k".into(),
                "1".into(),
                "--t".into(),
                "0".into(),
            ],
            0,
        ),
        (
            vec![
                "compgame".into(),
                "check".into(),
                "--game".into(),
                game("roshambo-free.json"),
                "--profile".into(),
                game("roshambo-uniform.json"),
            ],
            0,
        ),
        (
            vec![
                "compgame".into(),
                "check".into(),
                "--game".into(),
                game("roshambo.json"),
                "--profile".into(),
                game("roshambo-uniform.json"),
            ],
            1,
        ),
        (
            vec![
                "repeated".into(),
                "run".into(),
                "--spec".into(),
                game("frpd.json"),
                "--m1".into(),
                "TfT".into(),
                "--m2".into(),
                "Grim".into(),
            ],
            0,
        ),
        (
            vec![
                "repeated".into(),
                "run".into(),
                "--spec".into(),
                game("frpd.json"),
                "--m1".into(),
                "TfT".into(),
                "--m2".into(),
                "Nope".into(),
            ],
            2,
        ),
        (
            vec![
                "aware".into(),
                "validate".into(),
                "--game".into(),
                game("figure1.json"),
            ],
            0,
        ),
        (
            vec![
                "aware".into(),
                "check".into(),
                "--game".into(),
                game("figure1.json"),
                "--profile".into(),
                game("figure1-profile.json"),
            ],
            0,
        ),
        (
            vec![
                "aware".into(),
                "check".into(),
                "--game".into(),
                game("figure1-p07.json"),
                "--profile".into(),
                game("figure1-profile.json"),
            ],
            1,
        ),
        (
            vec![
                "aware".into(),
                "find".into(),
                "--game".into(),
                game("figure1.json"),
            ],
            0,
        ),
        (
            vec![
                "simulate".into(),
                "run".into(),
                "--game".into(),
                game("ba-scenario.json"),
            ],
            0,
        ),
        (
            vec![
                "simulate".into(),
                "ba".into(),
                "--n".into(),
                "4".into(),
                "--t".into(),
                "1".into(),
                "--adversaries".into(),
                "crash(1),flip".into(),
                "--format".into(),
                "text".into(),
            ],
            0,
        ),
    ];
    for (args, expected) in cases {
        let argv = std::iter::once("eqcheck".to_string()).chain(args.clone());
        let (report, code) = dispatch(argv);
        assert_eq!(code, expected, "{args:?}: {}", report.render());
    }
}

#[test]
fn threshold_reports_none_without_memory_cost() {
    let (r, code) = run(&[
        "repeated",
        "threshold",
        "--spec",
        &game("frpd-free-memory.json"),
        "--nmax",
        "20",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["threshold"], "none");
    let (r, _) = run(&[
        "repeated",
        "threshold",
        "--spec",
        &game("frpd.json"),
        "--nmax",
        "20",
    ]);
    assert_eq!(r["result"]["threshold"], "9");
}
