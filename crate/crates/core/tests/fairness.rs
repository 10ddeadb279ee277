use proptest::prelude::*;

use semunit::fairness::{
    checklist, granular_complexity, granular_complexity_weighted, granular_fairness,
    granular_fairness_with, inventory_classes, score_fair_facets, Aggregation, ComplexityWeights,
    Facet,
};
use semunit::fixtures::fixture;
use semunit::par::Execution;
use semunit::Error;

#[test]
fn dataset_b_outranks_dataset_a() {
    let f = fixture();
    let a = granular_fairness(&f.handles.dataset_a, &f.store, Aggregation::Mean).unwrap();
    let b = granular_fairness(&f.handles.dataset_b, &f.store, Aggregation::Mean).unwrap();
    assert_eq!((a.richness, a.depth, a.complexity), (2, 1, 3));
    assert_eq!((b.richness, b.depth, b.complexity), (3, 2, 5));
    assert_eq!(a.mean_fairness, b.mean_fairness);
    assert!(b.granular_fairness > a.granular_fairness);
    assert_eq!(b.members.len(), 4);
}

#[test]
fn facet_scores_are_checklist_fractions() {
    let f = fixture();
    for u in f.store.units() {
        let s = score_fair_facets(u, &f.store);
        let items = checklist(u, &f.store);
        for (facet, value) in [
            (Facet::F, s.f),
            (Facet::A, s.a),
            (Facet::I, s.i),
            (Facet::R, s.r),
        ] {
            let of: Vec<_> = items.iter().filter(|c| c.facet == facet).collect();
            assert!(!of.is_empty());
            let expect = of.iter().filter(|c| c.passed).count() as f64 / of.len() as f64;
            assert_eq!(value, expect, "{} {facet:?}", u.gupri());
        }
        assert_eq!(s.scalar(), (s.f + s.a + s.i + s.r) / 4.0);
    }
}

#[test]
fn weight_counts_must_match_members() {
    let f = fixture();
    let w = Aggregation::Weighted {
        weights: Some(vec![1.0, 2.0]),
    };
    let err = granular_fairness(&f.handles.dataset_b, &f.store, w).unwrap_err();
    assert!(matches!(
        err,
        Error::Weight {
            expected: 4,
            got: 2
        }
    ));
}

#[test]
fn equal_weights_reduce_to_the_mean() {
    let f = fixture();
    for u in f.store.units() {
        let mean = granular_fairness(u.gupri(), &f.store, Aggregation::Mean).unwrap();
        for w in [
            Aggregation::Weighted { weights: None },
            Aggregation::Weighted {
                weights: Some(vec![0.5; mean.members.len()]),
            },
        ] {
            let r = granular_fairness(u.gupri(), &f.store, w).unwrap();
            assert!((r.mean_fairness - mean.mean_fairness).abs() < 1e-12);
        }
    }
}

#[test]
fn normalised_aggregation_averages_levels() {
    let f = fixture();
    let r = granular_fairness(&f.handles.dataset_b, &f.store, Aggregation::Normalised).unwrap();
    let mut levels = std::collections::BTreeMap::<usize, Vec<f64>>::new();
    for m in &r.members {
        levels.entry(m.level).or_default().push(m.scalar);
    }
    let expect = levels
        .values()
        .map(|v| v.iter().sum::<f64>() / v.len() as f64)
        .sum::<f64>()
        / levels.len() as f64;
    assert_eq!(r.mean_fairness, expect);
}

#[test]
fn aggregation_tokens_parse_back() {
    for a in [
        Aggregation::Mean,
        Aggregation::Weighted { weights: None },
        Aggregation::Normalised,
    ] {
        assert_eq!(Aggregation::parse(a.token()).unwrap(), a);
    }
    assert!(matches!(
        Aggregation::parse("median"),
        Err(Error::NotFound(_))
    ));
}

#[test]
fn the_empty_compound_scores_zero() {
    let f = fixture();
    let r = granular_fairness(&f.handles.empty, &f.store, Aggregation::Mean).unwrap();
    assert!(r.members.is_empty());
    assert_eq!(r.granular_fairness, 0.0);
    assert_eq!(r.depth, 0);
}

#[test]
fn inventories_count_the_closure() {
    let f = fixture();
    for u in f.store.units() {
        let inv = inventory_classes(u.gupri(), &f.store).unwrap();
        let total: usize = inv.values().sum();
        assert_eq!(total, f.store.closure(u.gupri()).unwrap().len());
        assert_eq!(
            inv.len() as u64,
            granular_complexity(u.gupri(), &f.store).unwrap().richness
        );
    }
}

#[test]
fn execution_modes_agree() {
    let f = fixture();
    for u in f.store.units() {
        let seq = granular_fairness_with(
            u.gupri(),
            &f.store,
            Aggregation::Mean,
            Execution::Sequential,
        )
        .unwrap();
        let par =
            granular_fairness_with(u.gupri(), &f.store, Aggregation::Mean, Execution::Parallel)
                .unwrap();
        assert_eq!(seq, par);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn granular_fairness_is_mean_times_complexity(pick in any::<prop::sample::Index>()) {
        let f = fixture();
        let units: Vec<_> = f.store.units().map(|u| u.gupri().clone()).collect();
        let g = pick.get(&units);
        let r = granular_fairness(g, &f.store, Aggregation::Mean).unwrap();
        prop_assert_eq!(r.complexity, r.richness + r.depth);
        prop_assert_eq!(r.granular_fairness, r.mean_fairness * r.complexity as f64);
        prop_assert!((0.0..=1.0).contains(&r.mean_fairness));
    }

    #[test]
    fn complexity_weights_are_linear(pick in any::<prop::sample::Index>(), wr in 0u64..5, wd in 0u64..5) {
        let f = fixture();
        let units: Vec<_> = f.store.units().map(|u| u.gupri().clone()).collect();
        let g = pick.get(&units);
        let base = granular_complexity(g, &f.store).unwrap();
        let w = granular_complexity_weighted(g, &f.store, ComplexityWeights { richness: wr, depth: wd }).unwrap();
        prop_assert_eq!(w.complexity, wr * base.richness + wd * base.depth);
    }
}
