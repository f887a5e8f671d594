use std::path::Path;
use std::process::{Command, Output};

fn esscoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_esscoh"))
        .args(args)
        .env_remove("ESSCOH_MAXDEG")
        .env_remove("ESSCOH_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn corrupt_cache_entry(dir: &Path) {
    let entry = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|e| e == "json"))
        .expect("a cache entry was written");
    let mut value: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&entry).unwrap()).unwrap();
    value["ranks"][2] = 2.into();
    std::fs::write(&entry, value.to_string()).unwrap();
}

#[test]
fn compute_q8_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q8.json");
    let run = esscoh(&[
        "compute",
        "--group",
        "Q8",
        "--maxdeg",
        "10",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["verdict"], "FreeToDegree");
    assert_eq!(report["maxdeg"], 10);
    assert_eq!(report["hypothesis_excluded"], false);
}

#[test]
fn missing_group_file_exits_1() {
    let run = esscoh(&["compute", "--group", "badfile.json"]);
    assert_eq!(run.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&run.stderr).contains("badfile.json"));
}

#[test]
fn malformed_group_files_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("garbage.json", "not json"),
        ("odd.json", r#"{"name": "X", "p": 3, "table": [[0]]}"#),
        ("latin.json", r#"{"name": "X", "p": 2, "table": [[0, 1], [1, 1]]}"#),
    ];
    for (name, text) in cases {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        let run = esscoh(&["compute", "--group", path.to_str().unwrap()]);
        assert_eq!(run.status.code(), Some(1), "{name}");
    }
    assert_eq!(esscoh(&["compute", "--group", "NoSuchGroup"]).status.code(), Some(1));
    // Usage errors must not collide with the exit code reserved for violations.
    assert_eq!(
        esscoh(&["compute", "--group", "C2", "--maxdeg", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(esscoh(&["compute"]).status.code(), Some(1));
}

#[test]
fn group_file_matches_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c4.json");
    std::fs::write(
        &path,
        r#"{"name": "C4", "p": 2, "degree": 4, "generators": [[2, 3, 4, 1]]}"#,
    )
    .unwrap();
    let from_file = esscoh(&[
        "compute",
        "--group",
        path.to_str().unwrap(),
        "--maxdeg",
        "6",
        "--format",
        "json",
    ]);
    let from_catalog = esscoh(&["compute", "--group", "C4", "--maxdeg", "6", "--format", "json"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, from_catalog.stdout);
}

#[test]
fn klein_four_is_flagged_not_failed() {
    let run = esscoh(&["compute", "--group", "C2^2", "--maxdeg", "8", "--format", "json"]);
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(json(&run)["hypothesis_excluded"], true);
}

#[test]
fn essential_zero_is_ordinary() {
    let run = esscoh(&["compute", "--group", "D8", "--format", "json"]);
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(json(&run)["verdict"], "EssentialZero");
}

#[test]
fn reports_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = ["a.json", "b.json"].iter().map(|n| dir.path().join(n)).collect();
    for (path, jobs) in paths.iter().zip(["1", "4"]) {
        let run = esscoh(&[
            "--jobs",
            jobs,
            "compute",
            "--group",
            "Q8xC2",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(run.status.code(), Some(0));
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
}

#[test]
fn env_overrides_flags() {
    let run = Command::new(env!("CARGO_BIN_EXE_esscoh"))
        .args(["compute", "--group", "C4"])
        .env("ESSCOH_MAXDEG", "5")
        .env("ESSCOH_FORMAT", "json")
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(json(&run)["maxdeg"], 5);
}

#[test]
fn corrupted_cache_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["--cache-dir", cache, "compute", "--group", "C4", "--maxdeg", "6"];
    assert_eq!(esscoh(&args).status.code(), Some(0));
    assert_eq!(esscoh(&args).status.code(), Some(0));
    corrupt_cache_entry(dir.path());
    let run = esscoh(&args);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("cache entry"));
}

#[test]
fn verify_small_catalog_passes() {
    let run = esscoh(&["verify", "--max-order", "8", "--maxdeg", "12", "--format", "json"]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let results = json(&run);
    let results = results.as_array().unwrap();
    assert_eq!(results.len(), 8);
    assert!(results.iter().all(|r| r["failures"].as_array().unwrap().is_empty()));
}

#[test]
fn verify_names_revalidation_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["--cache-dir", cache, "verify", "--group", "C4", "--maxdeg", "6"];
    assert_eq!(esscoh(&args).status.code(), Some(0));
    corrupt_cache_entry(dir.path());
    let run = esscoh(&args);
    assert_eq!(run.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&run.stderr);
    assert!(
        stderr.contains("group C4") && stderr.contains("cache revalidation"),
        "{stderr}"
    );
}

#[test]
fn catalog_listing() {
    let all = esscoh(&["catalog", "--format", "json"]);
    assert_eq!(all.status.code(), Some(0));
    let all = json(&all);
    let all = all.as_array().unwrap();
    assert!(all.len() >= 13);
    let flagged: Vec<_> = all
        .iter()
        .filter(|e| e["hypothesis_excluded"] == true)
        .map(|e| e["name"].clone())
        .collect();
    assert!(flagged.contains(&"C2^2".into()) && flagged.contains(&"C2^2xC4".into()));

    let sixteen = json(&esscoh(&["catalog", "--order", "16", "--format", "json"]));
    let sixteen = sixteen.as_array().unwrap();
    assert!(sixteen.len() >= 3);
    assert!(sixteen.iter().all(|e| e["order"] == 16));

    let text = esscoh(&["catalog"]);
    assert!(String::from_utf8_lossy(&text.stdout)
        .lines()
        .any(|l| l.starts_with("Q8 ")));
}
