use std::collections::BTreeSet;

use proptest::prelude::*;

use semunit::fixtures::{self, fixture, g};
use semunit::granularity::{
    ancestor_pairs, assign_building_block_level, build_granularity_tree, check_partial_order,
    tree_check, tree_from_instances, validate_granularity_tree, Counterexample, LevelAssignment,
};
use semunit::Error;

#[test]
fn the_building_block_tree_passes_every_check() {
    let report = tree_check(&fixtures::building_block_check()).unwrap();
    assert!(report.passed(), "{report:?}");
    assert_eq!(report.order.domain.len(), 16);
}

#[test]
fn the_levels_of_organisation_ladder_mixes_criteria() {
    let report = tree_check(&fixtures::eldredge_check()).unwrap();
    assert!(report.order.is_partial_order());
    assert!(report.tree.passed());
    let pairs: Vec<(&str, &str)> = report
        .audit
        .flags
        .iter()
        .map(|f| (f.from.as_str(), f.to.as_str()))
        .collect();
    assert_eq!(pairs, [("cells", "tissues"), ("tissues", "organs")]);
    assert_eq!(
        report.audit.flags[0].differs,
        ["relation", "entity-category"]
    );
    assert_eq!(report.audit.flags[1].differs, ["entity-category", "frame"]);
}

#[test]
fn stored_parthood_statements_assemble_the_same_tree() {
    let f = fixture();
    let units: Vec<_> = f
        .handles
        .parthood
        .iter()
        .map(|x| f.store.statement(x).unwrap())
        .collect();
    let criterion = fixtures::building_block_criterion();
    let tree = build_granularity_tree(&units, &criterion, f.store.registries()).unwrap();
    assert_eq!(
        tree,
        tree_from_instances(&fixtures::part_of_instances(), &criterion).unwrap()
    );
    assert_eq!(tree.roots(), [&g("organism-1")]);
    assert_eq!(tree.levels()[&g("iron-1")], 5);
}

#[test]
fn malformed_instance_sets_are_refused() {
    let c = fixtures::building_block_criterion();
    let two_parents = [(g("x"), g("a")), (g("x"), g("b"))];
    assert!(matches!(
        tree_from_instances(&two_parents, &c),
        Err(Error::Structural(_))
    ));
    let cycle = [(g("a"), g("b")), (g("b"), g("a"))];
    assert!(matches!(
        tree_from_instances(&cycle, &c),
        Err(Error::Structural(_))
    ));
    let forest = [(g("a"), g("r1")), (g("b"), g("r2"))];
    assert!(matches!(
        tree_from_instances(&forest, &c),
        Err(Error::Structural(_))
    ));
    assert!(matches!(
        tree_from_instances(&[], &c),
        Err(Error::Structural(_))
    ));
}

#[test]
fn overlapping_and_gappy_extents_are_reported() {
    let c = fixtures::building_block_criterion();
    let mut tree = tree_from_instances(&fixtures::part_of_instances(), &c).unwrap();
    let mut extents = fixtures::tree_extents();
    extents
        .get_mut(&g("liver-1"))
        .unwrap()
        .insert("iron-1".into());
    tree.extents = extents;
    assert!(validate_granularity_tree(&tree, None).has("overlap"));

    tree.extents = Default::default();
    tree.exhaustive.insert(g("catalase-1"));
    let mut whole = fixtures::tree_extents();
    whole
        .get_mut(&g("catalase-1"))
        .unwrap()
        .insert("sulfur-1".into());
    let report = validate_granularity_tree(&tree, Some(&whole));
    assert!(report.has("not-exhaustive"));
    assert_eq!(report.issues[0].missing, ["sulfur-1"]);
}

#[test]
fn categories_land_on_their_expected_levels() {
    let p = fixtures::building_block_perspective();
    p.check().unwrap();
    for (category, expected) in fixtures::category_expectations() {
        let got = match assign_building_block_level(&category, &p).unwrap() {
            LevelAssignment::Aggregate => "aggregate".to_string(),
            LevelAssignment::Level { label, .. } => label,
        };
        assert_eq!(got, expected, "{category}");
    }
    assert!(matches!(
        assign_building_block_level(&g("quark"), &p),
        Err(Error::Unclassified(_))
    ));
}

/// Cubic reference: every stated or reflexive pair checked directly.
fn oracle(n: usize, pairs: &[(usize, usize)]) -> (bool, bool) {
    let dom: BTreeSet<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let rel = |a: usize, b: usize| a == b || pairs.contains(&(a, b));
    let mut anti = true;
    let mut trans = true;
    for a in 0..n {
        for b in 0..n {
            if !(dom.contains(&a) && dom.contains(&b)) {
                continue;
            }
            if a != b && rel(a, b) && rel(b, a) {
                anti = false;
            }
            for c in dom.iter().copied() {
                if rel(a, b) && rel(b, c) && !rel(a, c) {
                    trans = false;
                }
            }
        }
    }
    (anti, trans)
}

/// Edges of a random DAG over `0..n`, always pointing upward.
fn dag(n: usize) -> impl Strategy<Value = Vec<(usize, usize)>> {
    prop::collection::vec((0..n, 0..n), 0..(n * 2)).prop_map(|v| {
        v.into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    })
}

fn closure(pairs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut set: BTreeSet<(usize, usize)> = pairs.iter().copied().collect();
    loop {
        let add: Vec<_> = set
            .iter()
            .flat_map(|&(a, b)| {
                set.iter()
                    .filter(move |&&(c, _)| c == b)
                    .map(move |&(_, d)| (a, d))
            })
            .filter(|p| !set.contains(p))
            .collect();
        if add.is_empty() {
            return set.into_iter().collect();
        }
        set.extend(add);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn closed_dags_are_partial_orders(edges in dag(12)) {
        let r = check_partial_order(&closure(&edges));
        prop_assert!(r.is_partial_order());
        prop_assert!(r.counterexamples.is_empty());
    }

    #[test]
    fn a_back_edge_breaks_antisymmetry(edges in dag(12).prop_filter("non-empty", |e| !e.is_empty()), pick in any::<prop::sample::Index>()) {
        let mut pairs = closure(&edges);
        let (a, b) = *pick.get(&pairs);
        pairs.push((b, a));
        let r = check_partial_order(&pairs);
        prop_assert!(!r.antisymmetric);
        let expected = Counterexample::Antisymmetric { a: a.min(b), b: a.max(b) };
        prop_assert!(r.counterexamples.contains(&expected));
    }

    #[test]
    fn verdicts_match_the_cubic_reference(pairs in prop::collection::vec((0usize..8, 0usize..8), 0..20)) {
        let r = check_partial_order(&pairs);
        let (anti, trans) = oracle(8, &pairs);
        prop_assert_eq!(r.antisymmetric, anti);
        prop_assert_eq!(r.transitive, trans);
        let mut sorted = r.counterexamples.clone();
        sorted.sort();
        prop_assert_eq!(sorted, r.counterexamples);
    }

    #[test]
    fn input_order_is_irrelevant(
        pairs in prop::collection::vec((0usize..8, 0usize..8), 0..20).prop_shuffle(),
    ) {
        let mut reversed = pairs.clone();
        reversed.reverse();
        prop_assert_eq!(check_partial_order(&pairs), check_partial_order(&reversed));
    }

    #[test]
    fn ancestor_orders_of_random_trees_hold(parents in prop::collection::vec(any::<prop::sample::Index>(), 1..30)) {
        // Node i+1 hangs under some earlier node, so the result is always a tree.
        let instances: Vec<_> = parents
            .iter()
            .enumerate()
            .map(|(i, p)| (g(&format!("n{}", i + 1)), g(&format!("n{}", p.index(i + 1)))))
            .collect();
        let tree = tree_from_instances(&instances, &fixtures::building_block_criterion()).unwrap();
        prop_assert!(validate_granularity_tree(&tree, None).passed());
        let levels = tree.levels();
        prop_assert_eq!(levels.len(), parents.len() + 1);
        let order = ancestor_pairs(&tree);
        prop_assert!(check_partial_order(&order).is_partial_order());
        for (d, a) in &order {
            prop_assert!(levels[d] > levels[a]);
        }
    }
}
