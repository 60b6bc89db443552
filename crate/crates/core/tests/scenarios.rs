use std::fs;
use std::path::{Path, PathBuf};

use stablepi1::scenarios::{
    bundled_scenarios, load_scenario, parse, verify_catalogue, Execution, Kind, Payload, RunOptions, ScenarioError,
};

fn catalogue_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("catalogue")
}

/// A fresh directory under the system temp dir, removed on drop.
struct ScratchDir(PathBuf);

impl ScratchDir {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("stablepi1-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        fs::create_dir_all(&dir).unwrap();
        ScratchDir(dir)
    }
}

impl Drop for ScratchDir {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

#[test]
fn bundled_files_load_from_disk_like_the_embedded_copies() {
    let embedded = bundled_scenarios().unwrap();
    assert_eq!(embedded.len(), 23);
    for s in &embedded {
        let path = catalogue_dir().join(format!("{}.scn", s.id));
        let loaded = load_scenario(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(&loaded, s);
    }
}

#[test]
fn metadata_is_consistent_with_the_payload() {
    for s in bundled_scenarios().unwrap() {
        match &s.payload {
            Payload::VanKampen(v) => {
                assert_eq!(s.kind, Kind::VanKampen);
                assert!(!s.meta.normal, "{}", s.id);
                assert_eq!(s.meta.normalisation.as_deref(), Some("P2"), "{}", s.id);
                assert_eq!(s.meta.nodes, Some(v.dbar.vertices().len() as u32), "{}", s.id);
            }
            Payload::BiTriElliptic(_) | Payload::ReducibleBiTriElliptic { .. } => {
                assert_eq!(s.meta.family, "case E", "{}", s.id);
                assert_eq!(s.meta.twisting, Some(s.id_numeral().unwrap()), "{}", s.id);
            }
            Payload::Isogeny(_) => assert_eq!(s.kind, Kind::Parametric),
            Payload::Cited => assert!(s.meta.reference.is_some()),
            Payload::Bielliptic(_) => assert_eq!(s.kind, Kind::TorusLattice),
        }
        assert!(["yes", "no", "unknown"].contains(&s.meta.smoothable.as_str()), "{}", s.id);
    }
}

#[test]
fn an_empty_directory_verifies_nothing() {
    let dir = ScratchDir::new("empty");
    let report = verify_catalogue(&dir.0, Execution::Sequential, &RunOptions::default()).unwrap();
    assert_eq!((report.summary.passed, report.summary.total), (0, 0));
}

#[test]
fn a_corrupted_file_fails_alone() {
    let dir = ScratchDir::new("corrupt");
    for id in ["P1", "B2", "R5"] {
        fs::copy(catalogue_dir().join(format!("{id}.scn")), dir.0.join(format!("{id}.scn"))).unwrap();
    }
    fs::write(dir.0.join("broken.scn"), "meta\nid Q9\nkind nonsense\n").unwrap();
    fs::write(dir.0.join("notes.txt"), "not a scenario").unwrap();
    for exec in [Execution::Parallel, Execution::Sequential] {
        let report = verify_catalogue(&dir.0, exec, &RunOptions::default()).unwrap();
        assert_eq!((report.summary.passed, report.summary.total), (3, 4));
        let broken = report.reports.iter().find(|r| !r.passed()).unwrap();
        assert_eq!(broken.scenario, "broken");
        assert!(broken.error.as_deref().unwrap().contains("kind"));
    }
}

#[test]
fn a_missing_directory_is_an_io_error() {
    let missing = std::env::temp_dir().join("stablepi1-definitely-missing");
    assert!(matches!(
        verify_catalogue(&missing, Execution::Sequential, &RunOptions::default()),
        Err(ScenarioError::Io { .. })
    ));
}

#[test]
fn a_tight_coset_limit_fails_instead_of_hanging() {
    let text = fs::read_to_string(catalogue_dir().join("P1.scn")).unwrap();
    let s = parse(&text).unwrap();
    let report = stablepi1::scenarios::run_scenario(&s, &RunOptions { max_cosets: 2, ..RunOptions::default() });
    assert!(!report.passed());
    assert!(report.error.is_some());
}
