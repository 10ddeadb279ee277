use std::collections::BTreeSet;

use proptest::prelude::*;

use semunit::fixtures::{self, fixture, g};
use semunit::model::{Literal, Object, Triple};
use semunit::par::Execution;
use semunit::partition::{
    check_patterns, partition, partition_with, verify_partition, ClassPattern, GraphPattern,
    InputCollection, Items, PartitionConfig, PatternSet, PatternShape, Record, TripleShape,
};
use semunit::Error;

fn fixture_triples() -> Vec<Triple> {
    match fixtures::graph_input(&fixture()).items {
        Items::Graph(q) => q.into_iter().map(|q| q.triple).collect(),
        Items::Tabular(_) => unreachable!(),
    }
}

fn unit_set(r: &semunit::partition::PartitionResult) -> BTreeSet<String> {
    r.units.iter().map(|u| u.gupri.to_string()).collect()
}

#[test]
fn fixture_graph_claims_every_statement() {
    let f = fixture();
    let input = fixtures::graph_input(&f);
    let r = partition(&input, &fixtures::partition_patterns(), &f.store).unwrap();
    assert!(verify_partition(&r, &input).passed());
    assert_eq!(r.orphans.len(), 2);
    assert_eq!(r.assignment.len(), input.len());
    // Fixture statements stored in graph form come back under their own GUPRI.
    for s in f.store.units().filter_map(|u| u.as_statement()) {
        if s.canonical().as_graph().is_some() {
            assert!(
                r.units.iter().any(|u| u.gupri == s.gupri),
                "{} not recovered",
                s.gupri
            );
        }
    }
}

#[test]
fn fixture_table_leaves_the_odd_row_orphaned() {
    let f = fixture();
    let input = fixtures::tabular_input();
    let r = partition(&input, &fixtures::partition_patterns(), &f.store).unwrap();
    assert!(verify_partition(&r, &input).passed());
    assert_eq!(r.units.len(), 7);
    assert_eq!(r.orphans.len(), 1);
    assert_eq!(r.unit_of("row-7"), Some(&r.orphans[0]));
}

#[test]
fn empty_inputs_give_empty_partitions() {
    let f = fixture();
    let patterns = fixtures::partition_patterns();
    for input in [
        InputCollection::from_csv("object,quality,value,unit\n", None).unwrap(),
        InputCollection::graph(Vec::new(), None),
    ] {
        let r = partition(&input, &patterns, &f.store).unwrap();
        assert!(r.units.is_empty() && r.assignment.is_empty() && r.orphans.is_empty());
        assert!(verify_partition(&r, &input).passed());
    }
}

#[test]
fn duplicate_items_are_rejected() {
    let f = fixture();
    let t = Triple::new(g("a"), g("note"), Object::Literal(Literal::string("x")));
    let input = InputCollection::graph([t.clone(), t], None);
    assert!(matches!(
        partition(&input, &[], &f.store),
        Err(Error::Rejected(_))
    ));

    let row = |id: &str| Record {
        row_id: id.into(),
        cells: vec![("a".into(), "1".into()), ("b".into(), String::new())],
    };
    let input = InputCollection::tabular(vec![row("r1"), row("r2")], None);
    assert!(matches!(
        partition(&input, &[], &f.store),
        Err(Error::Rejected(_))
    ));
}

#[test]
fn disconnected_patterns_are_refused() {
    let f = fixture();
    let p = ClassPattern {
        class_ref: g("colour-assertion-unit"),
        priority: 0,
        shape: PatternShape::Graph(GraphPattern {
            anchor: "?a".into(),
            subject: "?a".into(),
            triples: vec![
                TripleShape {
                    subject: "?a".into(),
                    predicate: g("p"),
                    object: "?b".into(),
                },
                TripleShape {
                    subject: "?c".into(),
                    predicate: g("q"),
                    object: "?d".into(),
                },
            ],
            slot_types: Default::default(),
        }),
    };
    assert!(matches!(
        check_patterns(&[p], f.store.registries()),
        Err(Error::Pattern(_))
    ));
}

#[test]
fn pattern_files_round_trip() {
    let set = PatternSet {
        patterns: fixtures::partition_patterns(),
    };
    let text = serde_json::to_string_pretty(&set).unwrap();
    assert_eq!(serde_json::from_str::<PatternSet>(&text).unwrap(), set);
}

#[test]
fn execution_modes_agree_on_synthetic_inputs() {
    let f = fixture();
    let patterns = fixtures::partition_patterns();
    for input in [
        fixtures::large_graph_input(300, 40),
        fixtures::large_tabular_input(400),
    ] {
        let run = |execution| {
            let config = PartitionConfig {
                execution,
                ..PartitionConfig::default()
            };
            partition_with(&input, &patterns, &f.store, &config).unwrap()
        };
        assert_eq!(run(Execution::Sequential), run(Execution::Parallel));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn any_subset_in_any_order_is_covered_exactly(
        keep in proptest::collection::vec(any::<bool>(), 97),
        order in Just((0..97usize).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let f = fixture();
        let all = fixture_triples();
        let picked: Vec<Triple> = all.iter().zip(&keep).filter(|(_, k)| **k).map(|(t, _)| t.clone()).collect();
        let patterns = fixtures::partition_patterns();
        let forward = InputCollection::graph(picked.clone(), None);
        let a = partition(&forward, &patterns, &f.store).unwrap();
        prop_assert!(verify_partition(&a, &forward).passed());

        // Reordering the input changes nothing but unit order.
        let picked: Vec<Triple> = order.iter().filter(|&&i| keep[i]).map(|&i| all[i].clone()).collect();
        let shuffled = InputCollection::graph(picked, None);
        let b = partition(&shuffled, &patterns, &f.store).unwrap();
        prop_assert_eq!(&a.assignment, &b.assignment);
        prop_assert_eq!(unit_set(&a), unit_set(&b));
    }

    #[test]
    fn synthetic_tables_cover_every_row(rows in 0usize..200) {
        let f = fixture();
        let input = fixtures::large_tabular_input(rows);
        let r = partition(&input, &fixtures::partition_patterns(), &f.store).unwrap();
        prop_assert!(verify_partition(&r, &input).passed());
        prop_assert_eq!(r.units.len(), rows);
        prop_assert!(r.orphans.is_empty());
    }
}
