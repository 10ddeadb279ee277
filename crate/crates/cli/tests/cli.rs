use std::path::PathBuf;
use std::process::Command;

use semunit::fairness::{granular_fairness, Aggregation};
use semunit::fixtures::{self, fixture};
use semunit::granularity::tree_check;
use semunit::serial::{import_store, serialize, to_document, Format};
use semunit::views;
use semunit_cli::{run, Io};

fn shipped(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel)
        .display()
        .to_string()
}

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str], stdin: &str) -> Out {
    let mut input = stdin.as_bytes();
    let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
    let code = {
        let mut io = Io {
            stdin: &mut input,
            stdout: &mut stdout,
            stderr: &mut stderr,
        };
        run(
            std::iter::once("semunit").chain(args.iter().copied()),
            &mut io,
        )
    };
    Out {
        code,
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

#[test]
fn porcelain_output_is_the_library_document() {
    let f = fixture();
    let b = f.handles.dataset_b.to_string();
    let out = cli(&["score", &b, "--porcelain"], "");
    assert_eq!(out.code, 0, "{}", out.stderr);
    let report = granular_fairness(&f.handles.dataset_b, &f.store, Aggregation::Mean).unwrap();
    assert_eq!(out.stdout, to_document(&report).unwrap());
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["complexity"], 5);
    assert_eq!(doc["richness"], 3);
    assert_eq!(doc["depth"], 2);

    let inv = cli(&["inventory", &b, "--porcelain"], "");
    assert_eq!(
        inv.stdout,
        to_document(&views::inventory(&f.handles.dataset_b, &f.store).unwrap()).unwrap()
    );

    let m = f.handles.parasite_mass.to_string();
    let np = cli(&["serialize", &m, "--format", "nanopub"], "");
    let lib = serialize(
        f.store.resolve(&f.handles.parasite_mass).unwrap(),
        Format::Nanopub,
        &f.store,
    )
    .unwrap();
    assert_eq!(np.stdout, lib.as_text().unwrap());
}

#[test]
fn porcelain_output_is_stable_across_runs() {
    let b = fixture().handles.dataset_b.to_string();
    for args in [
        vec!["score", b.as_str(), "--porcelain"],
        vec!["render", b.as_str(), "--mode", "graph", "--porcelain"],
        vec!["registry", "operations", "list", "--porcelain"],
    ] {
        assert_eq!(cli(&args, "").stdout, cli(&args, "").stdout, "{args:?}");
    }
}

#[test]
fn human_rendering_of_a_label() {
    let m = fixture().handles.parasite_mass.to_string();
    let out = cli(&["render", &m], "");
    assert_eq!(out.stdout, format!("{}\n", fixtures::CANONICAL_SENTENCE));
    let norm = cli(
        &["normalize", "-"],
        "The mass of Parasite X is 24.76 grams.\n",
    );
    assert_eq!(norm.code, 0, "{}", norm.stderr);
    assert!(norm.stdout.starts_with(fixtures::CANONICAL_SENTENCE));
}

#[test]
fn partitioning_files_and_stdin() {
    let patterns = shipped("patterns/partition.json");
    let out = cli(
        &[
            "partition",
            &shipped("inputs/measurements.csv"),
            "--patterns",
            &patterns,
        ],
        "",
    );
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("7 units\n1 orphans\n"));

    let empty = cli(
        &["partition", "-", "--patterns", &patterns, "--format", "csv"],
        "object,quality,value,unit\n",
    );
    assert_eq!(empty.code, 0, "{}", empty.stderr);
    assert!(empty.stdout.starts_with("0 units\n0 orphans\n0 items\n"));
}

#[test]
fn tree_checks_pass_or_fail() {
    let ok = cli(
        &[
            "tree-check",
            &shipped("granularity/building-blocks.json"),
            "--porcelain",
        ],
        "",
    );
    assert_eq!(ok.code, 0);
    assert_eq!(
        ok.stdout,
        to_document(&tree_check(&fixtures::building_block_check()).unwrap()).unwrap()
    );
    let mixed = cli(&["tree-check", &shipped("granularity/eldredge.json")], "");
    assert_eq!(mixed.code, 1);
    assert!(mixed.stdout.contains("mixing flags\t2\n"));
}

#[test]
fn writes_land_in_the_store_directory() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("store");
    semunit::serial::export_store(&fixture().store, &store).unwrap();
    let store_arg = store.display().to_string();
    let h = fixture().handles;
    let members = [h.heart_item.to_string(), h.liver_item.to_string()];
    let out = cli(
        &[
            "--store",
            &store_arg,
            "compose",
            "--kind",
            "item-group",
            "--members",
            &members[0],
            &members[1],
            "--created",
            "2024-01-01T00:00:00Z",
        ],
        "",
    );
    assert_eq!(out.code, 0, "{}", out.stderr);
    let made = out.stdout.split('\t').next().unwrap();
    let back = import_store(&store).unwrap();
    assert!(back.contains(&semunit::Gupri::parse(made).unwrap()));

    let term = shipped("metamodels/colour.json");
    let first = cli(
        &[
            "--store", &store_arg, "registry", "schemas", "register", &term,
        ],
        "",
    );
    assert_eq!(first.code, 0, "{}", first.stderr);
    assert!(first.stdout.ends_with("v1\tunchanged\n"));
}

#[test]
fn failures_and_usage_errors_have_distinct_codes() {
    let missing = cli(&["render", semunit::fixtures::g("nowhere").as_str()], "");
    assert_eq!(missing.code, 1);
    assert!(missing.stderr.starts_with("error: "));
    assert_eq!(cli(&["render", "not-a-gupri"], "").code, 2);
    assert_eq!(cli(&["frobnicate"], "").code, 2);
    assert_eq!(cli(&["--help"], "").code, 0);
}

#[test]
fn the_binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_semunit");
    let b = fixture().handles.dataset_b.to_string();
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["inventory", &b]), Some(0));
    assert_eq!(
        status(&["tree-check", &shipped("granularity/eldredge.json")]),
        Some(1)
    );
    assert_eq!(status(&["score"]), Some(2));
}
