use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tormod::ext::resolution_for_ext;
use tormod::{Convention, DegreeWindow, GradedModulePresentation};
use tormod_cli::cache::{self, Cache, Conventions, Lookup};
use tormod_cli::config::parse_config;

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn tormod(cache_dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tormod"))
        .args(args)
        .env("TORMOD_CACHE_DIR", cache_dir)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn dims(report: &Value) -> Vec<(i64, i64, i64)> {
    report["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            (
                e["s"].as_i64().unwrap(),
                e["t"].as_i64().unwrap(),
                e["dim"].as_i64().unwrap(),
            )
        })
        .collect()
}

#[test]
fn ext_on_o2() {
    let dir = tempfile::tempdir().unwrap();
    let out = tormod(dir.path(), &["ext", "--config", config("o2.cfg").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(dims(&report), vec![(0, 0, 2), (1, 2, 2)]);
    assert_eq!(report["r"], 1);
    assert_eq!(report["convention"]["a"], 1);
    assert_eq!(report["convention"]["b"], -1);
}

#[test]
fn ext_of_a_free_module_has_only_row_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = tormod(
        dir.path(),
        &[
            "ext",
            "--config",
            config("o2.cfg").to_str().unwrap(),
            "--source",
            "RW",
            "--target",
            "QW",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(dims(&json(&out)), vec![(0, 0, 2)]);
}

#[test]
fn undersized_window_exits_with_a_window_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = tormod(
        dir.path(),
        &[
            "ext",
            "--config",
            config("koszul2.cfg").to_str().unwrap(),
            "--source",
            "R/(x1^2, x1*x2)",
            "--target",
            "R",
            "--window",
            "-2:2",
            "--margin",
            "0",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
    let report = json(&out);
    assert_eq!(report["error"]["kind"], "window");
    assert!(report["error"]["needed"].is_array());
}

#[test]
fn validation_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(
        &bad,
        "[group]\nbuiltin = \"Z2\"\n[ring]\ngenerators = [\"c\"]\ndegrees = [-3]\n",
    )
    .unwrap();
    let out = tormod(dir.path(), &["koszul", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "config");
    let missing = tormod(
        dir.path(),
        &["formality", "--config", config("o2.cfg").to_str().unwrap()],
    );
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn koszul_on_two_variables() {
    let dir = tempfile::tempdir().unwrap();
    let out = tormod(
        dir.path(),
        &["koszul", "--config", config("koszul2.cfg").to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["ranks"], serde_json::json!([1, 2, 1]));
    assert_eq!(report["status"], "exact");
    assert_eq!(report["exactness"]["exact"], true);
}

#[test]
fn torsion_of_the_free_module_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = tormod(
        dir.path(),
        &[
            "torsion",
            "--config",
            config("torsion.cfg").to_str().unwrap(),
            "--module",
            "RW",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["is_torsion"], false);
    assert!(report["dims"].as_array().unwrap().iter().all(|d| d["torsion"] == 0));
    assert_eq!(report["presentation"]["generators"], serde_json::json!([]));
}

#[test]
fn torsion_of_the_mixed_module() {
    let dir = tempfile::tempdir().unwrap();
    let out = tormod(
        dir.path(),
        &["torsion", "--config", config("torsion.cfg").to_str().unwrap()],
    );
    let report = json(&out);
    assert_eq!(report["is_torsion"], false);
    let torsion: Vec<(i64, i64)> = report["dims"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|d| d["torsion"] != 0)
        .map(|d| (d["t"].as_i64().unwrap(), d["torsion"].as_i64().unwrap()))
        .collect();
    assert_eq!(torsion, vec![(-2, 1), (0, 2)]);
}

#[test]
fn formality_on_bundled_dgas() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["formal.cfg", "c1.cfg", "explicit_formal.cfg"] {
        let out = tormod(dir.path(), &["formality", "--config", config(name).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let report = json(&out);
        assert_eq!(report["summary"], "quasi-iso: all degrees pass", "{name}");
    }
    let out = tormod(
        dir.path(),
        &["formality", "--config", config("c1.cfg").to_str().unwrap()],
    );
    assert_eq!(json(&out)["assignment"][0]["image"], "u - b");
}

#[test]
fn chart_and_json_files() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("ext.json");
    let chart_path = dir.path().join("ext.txt");
    let out = tormod(
        dir.path(),
        &[
            "chart",
            "--config",
            config("o2.cfg").to_str().unwrap(),
            "--json",
            json_path.to_str().unwrap(),
            "--chart",
            chart_path.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert!(report["classes"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["permanent"] == true));
    let chart = std::fs::read_to_string(&chart_path).unwrap();
    assert!(chart.contains("s=1"));
    assert_eq!(report["chart"].as_str().unwrap(), chart);
}

#[test]
fn resolve_reports_a_minimal_complete_resolution() {
    let dir = tempfile::tempdir().unwrap();
    let out = tormod(
        dir.path(),
        &["resolve", "--config", config("koszul3.cfg").to_str().unwrap()],
    );
    let report = json(&out);
    assert_eq!(report["ranks"], serde_json::json!([1, 3, 3, 1]));
    assert_eq!(report["complete"], true);
    assert_eq!(report["minimal"], true);
    assert_eq!(report["generator_degrees"][3], serde_json::json!([-6]));
}

#[test]
fn cache_hit_and_corrupt_entries() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("o2.cfg");
    let args = ["ext", "--config", cfg.to_str().unwrap()];
    let first = tormod(dir.path(), &args);
    assert!(String::from_utf8_lossy(&first.stderr).contains("cache: miss"));
    let second = tormod(dir.path(), &args);
    assert!(String::from_utf8_lossy(&second.stderr).contains("cache: hit"));
    assert_eq!(first.stdout, second.stdout);

    let entries: Vec<PathBuf> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    assert_eq!(entries.len(), 1);
    let text = std::fs::read_to_string(&entries[0]).unwrap();
    std::fs::write(
        &entries[0],
        text.replacen("\"-1\"", "\"1\"", 1).replacen("\"1\"", "\"3\"", 1),
    )
    .unwrap();
    let third = tormod(dir.path(), &args);
    assert!(
        String::from_utf8_lossy(&third.stderr).contains("discarded"),
        "{}",
        String::from_utf8_lossy(&third.stderr)
    );
    assert_eq!(first.stdout, third.stdout);

    std::fs::write(&entries[0], "{ not json").unwrap();
    let fourth = tormod(dir.path(), &args);
    assert!(String::from_utf8_lossy(&fourth.stderr).contains("discarded"));
    assert_eq!(first.stdout, fourth.stdout);

    let uncached = tormod(dir.path(), &["ext", "--config", cfg.to_str().unwrap(), "--no-cache"]);
    assert!(!String::from_utf8_lossy(&uncached.stderr).contains("cache:"));
    assert_eq!(first.stdout, uncached.stdout);
}

fn o2_key(window: &DegreeWindow, conventions: &Conventions) -> (String, GradedModulePresentation) {
    let s = parse_config(&config("o2.cfg")).unwrap();
    let qw = s.module("QW").unwrap().clone();
    (cache::key("ext", conventions, window, &[&qw, &qw]), qw)
}

#[test]
fn cache_round_trip_and_key_sensitivity() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::at(dir.path());
    let w = DegreeWindow::new(-10, 10, 4).unwrap();
    let conventions = Conventions::current(Convention::default());
    let (key, qw) = o2_key(&w, &conventions);
    let fresh = resolution_for_ext(&qw, &qw, &w).unwrap();
    assert!(cache.store(&key, &fresh));
    let (loaded, lookup) = cache.load(&key, &qw);
    assert_eq!(lookup, Lookup::Hit);
    let loaded = loaded.unwrap();
    assert_eq!(loaded.data(), fresh.data());
    for s in 1..=fresh.data().differentials.len() {
        for t in fresh.data().lo..=fresh.data().hi {
            let ring = fresh.ring();
            let (a, b) = (fresh.term(s).unwrap(), fresh.term(s - 1).unwrap());
            assert_eq!(
                loaded.differential(s).unwrap().matrix(ring, a, b, t),
                fresh.differential(s).unwrap().matrix(ring, a, b, t)
            );
        }
    }

    let (other_window, _) = o2_key(&DegreeWindow::new(-10, 12, 4).unwrap(), &conventions);
    assert_ne!(other_window, key);
    assert_eq!(cache.load(&other_window, &qw).1, Lookup::Miss);

    let mut flipped = conventions.clone();
    flipped.koszul_sign = "d(x_i1^...^x_ik) = sum_j (-1)^j x_ij (omit j)".into();
    let (other_sign, _) = o2_key(&w, &flipped);
    assert_ne!(other_sign, key);
    assert_eq!(cache.load(&other_sign, &qw).1, Lookup::Miss);

    assert_eq!(Cache::disabled().load(&key, &qw).1, Lookup::Disabled);
}

#[test]
fn cached_and_fresh_reports_agree_on_every_bundled_config() {
    let dir = tempfile::tempdir().unwrap();
    for name in [
        "o2.cfg",
        "koszul2.cfg",
        "torsion.cfg",
        "klein.cfg",
        "s3.cfg",
        "koszul3.cfg",
    ] {
        for command in ["ext", "resolve"] {
            let cfg = config(name);
            let args = [command, "--config", cfg.to_str().unwrap()];
            let fresh = tormod(dir.path(), &[command, "--config", cfg.to_str().unwrap(), "--no-cache"]);
            if fresh.status.code() != Some(0) {
                continue;
            }
            let stored = tormod(dir.path(), &args);
            let hit = tormod(dir.path(), &args);
            assert!(
                String::from_utf8_lossy(&hit.stderr).contains("cache: hit"),
                "{name} {command}"
            );
            assert_eq!(fresh.stdout, stored.stdout, "{name} {command}");
            assert_eq!(fresh.stdout, hit.stdout, "{name} {command}");
        }
    }
}
