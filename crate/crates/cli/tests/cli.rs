use std::path::PathBuf;
use std::process::Command;
use std::str::FromStr;

use evoaut::solver::GroupDescription;
use evoaut_cli::{parse_input, run_args, Outcome};
use serde_json::Value;

const INPUTS: &[&str] = &[
    "chain4.alg",
    "cubic_root_f7.alg",
    "cycle_with_ear.graph",
    "cyclic3.alg",
    "empty2_f5.graph",
    "f2_triple.alg",
    "loop_chain3.alg",
    "star3.graph",
    "swap_infeasible.alg",
    "two_orbit_f3.alg",
    "zero2_f3.alg",
    "zero3.alg",
];

fn input(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("inputs")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Outcome {
    run_args(std::iter::once("evoaut").chain(args.iter().copied()))
}

fn structured(args: &[&str]) -> Value {
    let mut full = vec!["--structured"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn scratch(name: &str, text: &str) -> String {
    let path = std::env::temp_dir().join(format!("evoaut-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn every_bundled_input_runs() {
    for name in INPUTS {
        let path = input(name);
        for cmd in ["diag", "aut", "check", "convert"] {
            let out = run(&[cmd, &path]);
            assert_eq!(out.code, 0, "{cmd} {name}: {}", out.stderr);
            assert!(!out.stdout.is_empty());
        }
    }
}

#[test]
fn output_is_deterministic() {
    for name in INPUTS {
        for args in [
            vec!["aut", &input(name)],
            vec!["--structured", "diag", &input(name)],
        ] {
            let args: Vec<&str> = args.iter().map(|s| s.as_ref()).collect();
            assert_eq!(run(&args).stdout, run(&args).stdout, "{args:?}");
        }
    }
}

#[test]
fn structured_groups_reparse() {
    for name in INPUTS {
        let report = structured(&["diag", &input(name)]);
        assert_eq!(report["format"], "evoaut/1");
        assert_eq!(report["command"], "diag");
        let group = &report["group"];
        let parsed = GroupDescription::from_str(group["text"].as_str().unwrap()).unwrap();
        assert_eq!(
            parsed.free_rank as u64,
            group["free_rank"].as_u64().unwrap(),
            "{name}"
        );
        let torsion: Vec<String> = parsed.torsion.iter().map(ToString::to_string).collect();
        let reported: Vec<String> = group["torsion"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| t.as_str().unwrap().to_string())
            .collect();
        assert_eq!(torsion, reported, "{name}");
    }
}

#[test]
fn convert_round_trips() {
    for name in INPUTS {
        let path = input(name);
        let original = parse_input(&std::fs::read_to_string(&path).unwrap(), None)
            .unwrap()
            .to_algebra();
        let once = structured(&["convert", &path]);
        let converted = scratch(name, once["text"].as_str().unwrap());
        let back = parse_input(&std::fs::read_to_string(&converted).unwrap(), None)
            .unwrap()
            .to_algebra();
        assert_eq!(back, original, "{name}");
        let twice = structured(&["convert", &converted]);
        let restored = parse_input(twice["text"].as_str().unwrap(), None)
            .unwrap()
            .to_algebra();
        assert_eq!(restored, original, "{name}");
    }
}

#[test]
fn known_answers() {
    let diag = structured(&["diag", &input("star3.graph")]);
    assert_eq!(diag["group"]["text"], "(K^x)^1 x mu_2(K)^2");

    let aut = structured(&["aut", &input("cyclic3.alg")]);
    assert_eq!(aut["order"], "3");

    let check = structured(&["check", &input("loop_chain3.alg")]);
    assert_eq!(check["two_li"], false);

    let out = run(&["check", "--vector", "1,1,1", &input("f2_triple.alg")]);
    assert_eq!(out.code, 0);
    assert!(
        out.stdout.contains("natural (1, 1, 1): false"),
        "{}",
        out.stdout
    );

    let chain = structured(&["chain", "--field", "F7", "--exp", "2,2,2", "--anchor", "1"]);
    assert_eq!(chain["count"], 2);

    let tate = run(&["tate", "--field", "F13"]);
    assert!(
        tate.stdout.contains("T_2 = 1 (stationary index 2)"),
        "{}",
        tate.stdout
    );
    assert!(run(&["tate", "--field", "acl-not2"]).stdout.contains("Z_2"));
}

#[test]
fn oracle_reports() {
    let out = run(&["oracle", "--field", "F7", &input("cycle_with_ear.graph")]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.contains("result: PASS"));

    let zero = run(&["oracle", &input("zero2_f3.alg")]);
    assert_eq!(zero.code, 0);
    assert!(zero.stdout.contains("48 automorphisms"), "{}", zero.stdout);

    // no oracle runs over Q
    assert_eq!(run(&["oracle", &input("cyclic3.alg")]).code, 3);
}

#[test]
fn parse_errors_exit_2_with_position() {
    let path = scratch("bad.alg", "field F5\nbasis a b\nsq a = 2*c\n");
    let out = run(&["diag", &path]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 3, column"), "{}", out.stderr);

    assert_eq!(run(&["diag", &input("missing.alg")]).code, 2);
    assert_eq!(
        run(&["diag", "--field", "F6", &input("cyclic3.alg")]).code,
        2
    );
    assert_eq!(run(&["tate", "--field", "R"]).code, 2);
    assert_eq!(run(&["chain", "--field", "F7", "--exp", "2,0"]).code, 2);
    assert_eq!(run(&["frobnicate"]).code, 2);
}

#[test]
fn vertex_cap_exits_3() {
    let out = run(&["--cap", "2", "aut", &input("cyclic3.alg")]);
    assert_eq!(out.code, 3, "{}", out.stderr);
    assert!(!out.stderr.is_empty());
}

#[test]
fn binary_honours_environment_cap() {
    let bin = env!("CARGO_BIN_EXE_evoaut");
    let capped = Command::new(bin)
        .env("EVOAUT_CAP", "2")
        .args(["aut", &input("cyclic3.alg")])
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
    let ok = Command::new(bin)
        .env_remove("EVOAUT_CAP")
        .args(["aut", &input("cyclic3.alg")])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8(ok.stdout)
        .unwrap()
        .contains("order over Q = 3"));
}
