use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cdga-lab"))
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("CDGA_LAB_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn betti_kt() {
    let o = run(&["betti", "--model", "kt"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1 3 4 3 1");
    let o = run(&["betti", "--file", &data("kt_lie.json")]);
    assert_eq!(stdout(&o).trim(), "1 3 4 3 1");
}

#[test]
fn massey_kt_is_nontrivial() {
    let o = run(&["massey", "--model", "kt", "--classes", "[x1],[x1],[x2]", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["defined"], true);
    assert_eq!(v["nontrivial"], true);
    assert_eq!(
        v["value"]["representative"],
        serde_json::json!([{"coeff": "1", "monomial": ["x1", "x3"]}])
    );
}

#[test]
fn quadruple_massey_certified() {
    let o = run(&[
        "massey",
        "--model",
        "invariant_A",
        "--classes",
        "[nu*etabar],[mu*mubar],[mu*mubar],[eta*nubar]",
        "--witness",
        "nu*nubar",
        "--expect",
        "certified=certified nonzero",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn seed_from_environment() {
    let args = ["massey", "--model", "kt", "--classes", "[x1],[x1],[x2]", "--json"];
    let o = bin().args(args).env("CDGA_LAB_SEED", "2").output().unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["seed"], 2);
    let o = bin().args(args).env("CDGA_LAB_SEED", "x").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_is_canonical_and_deterministic() {
    for args in [
        vec!["betti", "--model", "kt", "--json"],
        vec!["formality", "--model", "kt", "--json"],
        vec!["compat", "--model", "kt", "--json"],
        vec!["fixed-points", "--model", "lattice_m", "--json"],
        vec!["massey", "--model", "kt", "--classes", "x1,x1,x2", "--json"],
    ] {
        let first = stdout(&run(&args));
        let second = stdout(&run(&args));
        assert_eq!(first, second);
        let v: serde_json::Value = serde_json::from_str(&first).unwrap();
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", first);
    }
}

#[test]
fn expectations_set_exit_code() {
    assert_eq!(
        run(&[
            "cohomology",
            "--model",
            "invariant_A",
            "--degree",
            "3",
            "--expect",
            "b3=0"
        ])
        .status
        .code(),
        Some(0)
    );
    let o = run(&["betti", "--model", "kt", "--expect", "b1=2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("b1"));
    assert_eq!(
        run(&["fixed-points", "--model", "lattice_m", "--expect", "total=81"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn input_errors_exit_two_with_one_line() {
    let dir = std::env::temp_dir().join(format!("cdga-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    for args in [
        vec!["betti".to_string(), "--file".into(), bad.display().to_string()],
        vec!["betti".into(), "--model".into(), "nope".into()],
        vec![
            "cohomology".into(),
            "--model".into(),
            "kt".into(),
            "--degree".into(),
            "7".into(),
        ],
        vec![
            "massey".into(),
            "--model".into(),
            "kt".into(),
            "--classes".into(),
            "[x3],[x1],[x1]".into(),
        ],
    ] {
        let o = bin().args(&args).output().unwrap();
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_eq!(stderr(&o).trim().lines().count(), 1, "{args:?}");
    }
    assert_eq!(run(&["betti", "--model", "kt", "--unknown"]).status.code(), Some(2));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn geometry_commands() {
    let o = run(&["nijenhuis", "--model", "kt", "--expect", "integrable=true"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&[
        "nijenhuis",
        "--model",
        "kt",
        "--J",
        &data("j_kt_prime.json"),
        "--expect",
        "table.N(X1,X2)=0 0 -1 0",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&[
        "symplectic",
        "--model",
        "omega_m",
        "--expect",
        "nondegenerate=true",
        "--expect",
        "real=true",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&[
        "symplectic",
        "--model",
        "kt",
        "--omega",
        "x1*x2",
        "--expect",
        "nondegenerate=false",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&[
        "lefschetz",
        "--model",
        "kt",
        "--p",
        "1",
        "--expect",
        "isomorphism=false",
        "--expect",
        "images.1.zero=true",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&[
        "validate",
        "--model",
        "heisenberg_c",
        "--action",
        &data("z3_action.json"),
        "--expect",
        "action_order=3",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn isotopy_verify_passes() {
    let o = run(&["isotopy-verify", "--json", "--expect", "pass=true"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in [
        "so_membership",
        "equivariance_max",
        "endpoint_errors",
        "junction_derivatives",
        "shell_continuity",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}
