use std::process::Command;

fn seqpred() -> Command {
    Command::new(env!("CARGO_BIN_EXE_seqpred"))
}

#[test]
fn list_prints_every_scenario() {
    let out = seqpred().arg("--list").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in seqpred::experiments::scenario_names() {
        assert!(text.contains(name), "missing {name}");
    }
}

#[test]
fn single_scenario_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = seqpred().args(["--scenario", "nml-negative", "--out"]).arg(dir.path()).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("nml-negative.csv")).unwrap();
    assert!(csv.starts_with("scenario,series,param,n,value,bound\n"));
    let manifest = std::fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
    assert!(manifest.contains("nml-negative"));
    assert!(!dir.path().join("laplace.csv").exists());
}

#[test]
fn corrupted_class_file_fails_with_scenario_name() {
    let dir = tempfile::tempdir().unwrap();
    let class = dir.path().join("class.txt");
    std::fs::write(&class, "bernoulli p=oops\n").unwrap();
    let out = seqpred()
        .args(["--scenario", "nml-normalizers", "--out"])
        .arg(dir.path())
        .arg("--class")
        .arg(&class)
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("nml-normalizers"));
}

#[test]
fn unknown_scenario_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = seqpred().args(["--scenario", "nope", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
