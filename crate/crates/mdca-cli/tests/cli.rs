use std::process::{Command, Output};

fn mdca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdca")).args(args).env("MDCA_THREADS", "2").output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_exit_codes() {
    assert_eq!(code(&mdca(&["check", "catalog:sl2", "--W", "4"])), 0);
    assert_eq!(code(&mdca(&["check", "catalog:abelian"])), 0);
    let o = mdca(&["check", "catalog:jacobi_violator"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("level 2"));
    assert_eq!(code(&mdca(&["check", "catalog:truncated_poly"])), 2);
    assert_eq!(code(&mdca(&["check", "catalog:nonexistent"])), 2);
    assert_eq!(code(&mdca(&["check", "catalog:sl2", "--kind", "bogus"])), 2);
    assert_eq!(code(&mdca(&["check", "catalog:sl2", "--W", "1"])), 2);
    assert_eq!(code(&mdca(&["check", "/nonexistent.json"])), 2);
    assert_eq!(code(&mdca(&["frobnicate"])), 2);
}

#[test]
fn reports_state_the_bound() {
    let o = mdca(&["check", "catalog:heisenberg", "--W", "3"]);
    assert!(stdout(&o).contains("verified up to word length W = 3"));
}

#[test]
fn catalog_list_and_emit() {
    let o = mdca(&["catalog", "list"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 7);
    let a = stdout(&mdca(&["catalog", "emit", "sl2"]));
    let b = stdout(&mdca(&["catalog", "emit", "sl2"]));
    assert_eq!(a, b);
    assert_eq!(a, mdca::cli_io::catalog_text("sl2").unwrap());
    assert_eq!(code(&mdca(&["catalog", "emit", "nonexistent"])), 2);
}

#[test]
fn emitted_file_checks_like_the_catalog_entry() {
    let dir = std::env::temp_dir().join(format!("mdca-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("sl2.json");
    std::fs::write(&file, stdout(&mdca(&["catalog", "emit", "sl2"]))).unwrap();
    let json = dir.join("report.json");
    let o = mdca(&["check", file.to_str().unwrap(), "--json", json.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let rep: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(rep["certified_w"], 4);
    assert!(rep["verdicts"].as_array().unwrap().iter().all(|v| v["passed"] == true));
}

#[test]
fn roundtrip_and_cohomology() {
    assert_eq!(code(&mdca(&["roundtrip", "catalog:sl2"])), 0);
    assert_eq!(code(&mdca(&["roundtrip", "catalog:exterior_pair", "--W", "3"])), 0);
    let o = mdca(&["cohomology", "catalog:sl2", "--window", "0..3"]);
    assert_eq!(code(&o), 0);
    let betti: Vec<String> = stdout(&o)
        .lines()
        .filter_map(|l| l.split("betti ").nth(1))
        .map(|s| s.split_whitespace().next().unwrap().to_string())
        .collect();
    assert_eq!(betti, ["1", "0", "0", "1"]);
    assert_eq!(code(&mdca(&["cohomology", "catalog:sl2", "--window", "3..0"])), 2);
}
