use std::process::{Command, Output};

fn rigidloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rigidloc"))
        .args(args)
        .env_remove("RIGIDLOC_ATLAS")
        .env_remove("RIGIDLOC_EDGES")
        .env_remove("RIGIDLOC_CROSS_CHECK")
        .env_remove("RIGIDLOC_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_a5_a6_with_cross_check() {
    let o = rigidloc(&["verify", "A5", "A6", "--cross-check", "--expect", "localization"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("verdict: Localization"), "{out}");
    assert!(out.contains("criterion+oracle agree"), "{out}");
}

#[test]
fn verify_a6_a7_reports_the_count_witness() {
    let o = rigidloc(&["verify", "A6", "A7", "--expect", "not-localization"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("verdict: NotLocalization"), "{out}");
    assert!(out.contains("10080") && out.contains("5040"), "{out}");
}

#[test]
fn wrong_expectation_exits_one() {
    let o = rigidloc(&["verify", "A6", "A7", "--expect", "localization"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn guarded_pair_is_undecided() {
    let o = rigidloc(&["verify", "A5", "T"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("asserted metadata / guard"));
}

#[test]
fn unknown_group_is_an_error() {
    let o = rigidloc(&["verify", "A5", "Nope"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn path_a6_a7() {
    let o = rigidloc(&["path", "A6", "A7"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for n in ["A6", "T", "Ru", "L2_13", "A14", "A7"] {
        assert!(out.split_whitespace().any(|t| t == n), "{n} not in {out}");
    }
    let o = rigidloc(&["path", "A5", "M"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), "none\n");
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["verify", "L2_7", "A8"][..],
        &["embed", "L2_13"],
        &["components"],
        &["export", "--format", "dot"],
    ] {
        let a = rigidloc(args);
        let b = rigidloc(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code(), "{args:?}");
    }
}

#[test]
fn aut_and_embed() {
    let o = rigidloc(&["aut", "A6"]);
    let out = stdout(&o);
    assert!(out.contains("aut_order: 1440"), "{out}");
    let o = rigidloc(&["embed", "A5"]);
    let out = stdout(&o);
    assert!(out.contains("degree: 5"), "{out}");
    let o = rigidloc(&["embed", "L2_11"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_and_export_round_trip() {
    let o = rigidloc(&["validate-atlas"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("records valid\n"));

    let dir = std::env::temp_dir().join(format!("rigidloc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (what, flag) in [("atlas", "--atlas"), ("edges", "--edges")] {
        let first = stdout(&rigidloc(&["export", "--what", what]));
        let path = dir.join(what);
        std::fs::write(&path, &first).unwrap();
        let second = stdout(&rigidloc(&[flag, path.to_str().unwrap(), "export", "--what", what]));
        assert_eq!(first, second, "{what}");
    }
    let _ = std::fs::remove_dir_all(&dir);
}
