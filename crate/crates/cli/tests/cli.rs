use std::path::PathBuf;
use std::process::{Command, Output};

fn ahprank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ahprank")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ahprank-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn mine_writes_rules_and_measures() {
    let dir = scratch("mine");
    let db = dir.join("toy.dat");
    std::fs::write(&db, "1 2 5\n2 4\n2 3\n1 2 4\n1 3\n2 3\n1 3\n1 2 3 5\n1 2 3\n").unwrap();
    let measures = dir.join("measures.csv");
    let out = ahprank(&[
        "mine",
        db.to_str().unwrap(),
        "--minsup",
        "0.2",
        "--measures-out",
        measures.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rules = String::from_utf8(out.stdout).unwrap();
    assert!(rules.starts_with("body,head,frequency,confidence\n"));
    // 0.2 of 9 transactions rounds up to a support of 2
    assert!(String::from_utf8_lossy(&out.stderr).contains("minsup 2"));
    let table = std::fs::read_to_string(&measures).unwrap();
    assert_eq!(table.lines().count(), rules.lines().count());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn experiments_require_a_seed() {
    let out = ahprank(&["active", "--synthetic", "100"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));
}

#[test]
fn active_from_config_file() {
    let dir = scratch("active");
    let cfg = dir.join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"data":{"kind":"synthetic_measures","patterns":400,"measures":4},
            "emulator":{"kind":"rand","seed":3},"seed":0,"theta":100,"max_queries":5,"repeats":2}"#,
    )
    .unwrap();
    let stem = dir.join("run");
    let args = ["active", "--config", cfg.to_str().unwrap(), "--seed", "9", "--output", stem.to_str().unwrap()];
    assert!(ahprank(&args).status.success());
    let curves = std::fs::read_to_string(stem.with_extension("csv")).unwrap();
    assert_eq!(curves.lines().count(), 1 + 2 * 6);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(stem.with_extension("json")).unwrap()).unwrap();
    assert_eq!(summary["runs"].as_array().unwrap().len(), 2);

    // same seed, same report
    let first = std::fs::read_to_string(stem.with_extension("csv")).unwrap();
    assert!(ahprank(&args).status.success());
    let strip = |s: &str| s.lines().map(|l| l.split(',').take(5).collect::<Vec<_>>().join(",")).collect::<Vec<_>>();
    assert_eq!(strip(&first), strip(&std::fs::read_to_string(stem.with_extension("csv")).unwrap()));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn bad_config_is_reported() {
    let out = ahprank(&["passive", "--seed", "1", "--synthetic", "100", "--folds", "1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("folds"));
}
