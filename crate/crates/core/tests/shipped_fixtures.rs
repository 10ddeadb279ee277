//! The JSON files under `fixtures/` are the programmatic fixtures written
//! out. Run with `SEMUNIT_BLESS=1` to regenerate them.

use std::path::{Path, PathBuf};

use semunit::fixtures;
use semunit::partition::PatternSet;
use semunit::registry::SchemaRecord;
use semunit::serial::to_document;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn expected() -> Vec<(PathBuf, String)> {
    let mut out = vec![
        (
            "granularity/building-blocks.json".into(),
            to_document(&fixtures::building_block_check()).unwrap(),
        ),
        (
            "granularity/eldredge.json".into(),
            to_document(&fixtures::eldredge_check()).unwrap(),
        ),
        (
            "granularity/perspective.json".into(),
            to_document(&fixtures::building_block_perspective()).unwrap(),
        ),
        (
            "patterns/partition.json".into(),
            to_document(&PatternSet {
                patterns: fixtures::partition_patterns(),
            })
            .unwrap(),
        ),
        ("inputs/measurements.csv".into(), fixtures::tabular_csv()),
    ];
    for m in fixtures::metamodels() {
        let name = m.name.split_whitespace().next().unwrap().to_string();
        out.push((
            format!("metamodels/{name}.json").into(),
            to_document(&SchemaRecord::rosetta(m)).unwrap(),
        ));
    }
    out.into_iter()
        .map(|(p, t): (PathBuf, String)| (root().join(p), t))
        .collect()
}

#[test]
fn shipped_files_match_the_fixtures() {
    let bless = std::env::var_os("SEMUNIT_BLESS").is_some();
    for (path, text) in expected() {
        if bless {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &text).unwrap();
        }
        let on_disk =
            std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(on_disk, text, "{} is stale", path.display());
    }
}

#[test]
fn shipped_files_parse_back() {
    let read = |p: &str| std::fs::read_to_string(root().join(p)).unwrap();
    let check: semunit::granularity::TreeCheck =
        serde_json::from_str(&read("granularity/eldredge.json")).unwrap();
    assert_eq!(check, fixtures::eldredge_check());
    let set: PatternSet = serde_json::from_str(&read("patterns/partition.json")).unwrap();
    assert_eq!(set.patterns, fixtures::partition_patterns());
    let schema: SchemaRecord = serde_json::from_str(&read("metamodels/measurement.json")).unwrap();
    assert_eq!(schema.metamodel(), Some(&fixtures::measurement_metamodel()));
}
