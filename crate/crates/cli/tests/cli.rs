use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

use serde_json::Value;
use tempfile::TempDir;
use u35_cli::Target;

fn u35(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_u35"))
        .args(args)
        .output()
        .expect("run u35")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// One cache shared by the tests that need it, with the manifest of the
/// fresh build.
fn shared_cache() -> &'static (TempDir, Value) {
    static CACHE: OnceLock<(TempDir, Value)> = OnceLock::new();
    CACHE.get_or_init(|| {
        let dir = TempDir::new().unwrap();
        let cache = dir.path().join("cache");
        let json = dir.path().join("build.json");
        let out = u35(&["build", "--cache", s(&cache), "--json", s(&json)]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let manifest = read_json(&json);
        (dir, manifest)
    })
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn cache_dir() -> PathBuf {
    shared_cache().0.path().join("cache")
}

#[test]
fn unknown_target_is_a_usage_error() {
    assert_eq!(code(&u35(&["verify", "everything"])), 2);
}

#[test]
fn invalid_primes_are_a_usage_error() {
    for primes in ["4,7,11", "7,7,11", "2,1048583,1299709", "x"] {
        let out = u35(&["verify", "norton-sakuma", "--primes", primes]);
        assert_eq!(code(&out), 2, "{primes}");
    }
}

#[test]
fn missing_cache_is_a_cache_error() {
    let dir = TempDir::new().unwrap();
    let out = u35(&["verify", "shape", "--cache", s(&dir.path().join("none"))]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("u35 build"));
}

#[test]
fn norton_sakuma_needs_no_cache() {
    let dir = TempDir::new().unwrap();
    let json = dir.path().join("ns.json");
    let out = u35(&[
        "verify",
        "norton-sakuma",
        "--cache",
        s(&dir.path().join("absent")),
        "--json",
        s(&json),
    ]);
    assert_eq!(code(&out), 0);
    let m = read_json(&json);
    assert_eq!(m["schema"], "u35-report/1");
    assert_eq!(m["report"]["passed"], true);
    let checks = m["report"]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["criterion"], 5);
    assert_eq!(checks[0]["witness"]["algebras"].as_array().unwrap().len(), 8);
}

#[test]
fn report_section_has_no_timing() {
    let dir = TempDir::new().unwrap();
    let json = dir.path().join("ns.json");
    u35(&["verify", "norton-sakuma", "--json", s(&json)]);
    let m = read_json(&json);
    let report = serde_json::to_string(&m["report"]).unwrap();
    assert!(!report.contains("seconds"));
    assert!(m["run"]["timings"][0]["seconds"].is_number());
}

#[test]
fn build_certifies_the_group() {
    let m = &shared_cache().1;
    assert_eq!(m["report"]["passed"], true);
    assert_eq!(m["run"]["cache_status"], "built");
    let checks = m["report"]["checks"].as_array().unwrap();
    let ids: Vec<u64> = checks.iter().map(|c| c["criterion"].as_u64().unwrap()).collect();
    assert_eq!(ids, [1, 2, 3, 4]);
    assert_eq!(checks[1]["witness"]["order"], 126_000);
    assert_eq!(checks[1]["witness"]["aut_order"], 252_000);
    assert_eq!(m["report"]["cache_files"].as_array().unwrap().len(), 7);
}

#[test]
fn warm_rebuild_has_the_same_hash() {
    let first = &shared_cache().1;
    let dir = TempDir::new().unwrap();
    let json = dir.path().join("again.json");
    let out = u35(&["build", "--cache", s(&cache_dir()), "--json", s(&json)]);
    assert_eq!(code(&out), 0);
    let second = read_json(&json);
    assert_eq!(second["run"]["cache_status"], "loaded");
    assert_eq!(second["hash"], first["hash"]);
    assert_eq!(second["report"], first["report"]);
}

#[test]
fn corrupted_cache_is_rejected() {
    let dir = TempDir::new().unwrap();
    let copy = dir.path().join("cache");
    std::fs::create_dir(&copy).unwrap();
    for entry in std::fs::read_dir(cache_dir()).unwrap() {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), copy.join(entry.file_name())).unwrap();
    }
    let target = copy.join("group.u35p");
    let mut bytes = std::fs::read(&target).unwrap();
    bytes[5000] ^= 1;
    std::fs::write(&target, bytes).unwrap();
    for args in [vec!["verify", "lemma16"], vec!["build"]] {
        let mut args = args;
        args.extend(["--cache", s(&copy)]);
        let out = u35(&args);
        assert_eq!(code(&out), 3);
        assert!(String::from_utf8_lossy(&out.stderr).contains("checksum"));
    }
}

#[test]
fn verify_reports_are_byte_stable() {
    let dir = TempDir::new().unwrap();
    let mut reports = Vec::new();
    for name in ["a.json", "b.json"] {
        let json = dir.path().join(name);
        let out = u35(&["verify", "lemma15", "--cache", s(&cache_dir()), "--json", s(&json)]);
        assert_eq!(code(&out), 0);
        let m = read_json(&json);
        reports.push((serde_json::to_string(&m["report"]).unwrap(), m["hash"].clone()));
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn shape_target() {
    let dir = TempDir::new().unwrap();
    let json = dir.path().join("shape.json");
    let out = u35(&["verify", "shape", "--cache", s(&cache_dir()), "--json", s(&json)]);
    assert_eq!(code(&out), 0);
    let m = read_json(&json);
    let shape = m["report"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["criterion"] == 6)
        .unwrap()["witness"]["shape"]
        .clone();
    let expected: Value = serde_json::json!({"2": "2A", "3": "3A", "4": "4B", "5": "5A", "6": "6A"});
    assert_eq!(shape, expected);
}

#[test]
fn matrix_export_of_the_majorana_block() {
    let dir = TempDir::new().unwrap();
    let out_file = dir.path().join("m.txt");
    let json = dir.path().join("export.json");
    let out = u35(&[
        "matrix",
        "export",
        "--cache",
        s(&cache_dir()),
        "--out",
        s(&out_file),
        "--block",
        "majorana",
        "--x",
        "4/81",
        "--json",
        s(&json),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_file).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    // Upper triangle of a 525×525 matrix with no zero entries.
    assert_eq!(lines.len(), 525 * 526 / 2);
    // (a, a) = 1, scaled by 103680.
    assert_eq!(lines[0], "0 0 103680");
    let m = read_json(&json);
    assert_eq!(m["report"]["artifact"]["export"]["dimension"], 525);
    assert_eq!(m["report"]["artifact"]["export"]["x_status"], "fixed 4/81");
}

#[test]
fn export_to_unwritable_path_is_an_io_error() {
    let out = u35(&[
        "matrix",
        "export",
        "--cache",
        s(&cache_dir()),
        "--out",
        "/nonexistent/dir/m.txt",
        "--block",
        "majorana",
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn all_runs_every_criterion_once() {
    let mut ids = Target::All.criteria().to_vec();
    ids.sort_unstable();
    assert_eq!(ids, (1..=15).collect::<Vec<u8>>());
}

#[test]
fn every_criterion_is_reachable_from_a_named_target_or_build() {
    let named = [
        Target::NortonSakuma,
        Target::Shape,
        Target::Gram525,
        Target::GramFull,
        Target::A7,
        Target::Lemma15,
        Target::Lemma16,
        Target::Lemma17,
        Target::Resurrection,
    ];
    let mut covered: Vec<u8> = named.iter().flat_map(|t| t.criteria().iter().copied()).collect();
    covered.extend(u35_cli::targets::BUILD_CRITERIA);
    covered.sort_unstable();
    covered.dedup();
    assert_eq!(covered, (1..=15).collect::<Vec<u8>>());
}
