use std::collections::BTreeSet;

use proptest::prelude::*;

use semunit::fixtures::{self, fixture, g};
use semunit::model::{ArgumentRole, CompoundKind, Form, LogicalFramework, Member, Unit};
use semunit::store::CompoundOptions;
use semunit::{Error, Gupri, UnitStore};

fn plain(gs: &[&Gupri]) -> Vec<Member> {
    gs.iter().map(|x| Member::plain((*x).clone())).collect()
}

fn meta() -> semunit::model::MetaRecord {
    fixtures::meta(None, LogicalFramework::None, None)
}

#[test]
fn every_fixture_unit_validates() {
    let f = fixture();
    assert_eq!(f.store.len(), 38);
    for u in f.store.units() {
        let r = f.store.validate_unit(u);
        assert!(r.is_valid(), "{}: {:?}", u.gupri(), r.issues);
    }
    let empty = f
        .store
        .validate_unit(f.store.resolve(&f.handles.empty).unwrap());
    assert!(empty.has("empty-collection"));
    assert!(f.store.unresolved_references().is_empty());
}

#[test]
fn inserting_is_idempotent_but_never_overwrites() {
    let mut f = fixture();
    let unit = f.store.resolve(&f.handles.parasite_mass).unwrap().clone();
    assert_eq!(
        f.store.insert(unit.clone()).unwrap(),
        f.handles.parasite_mass
    );
    let Unit::Statement(mut edited) = unit else {
        unreachable!()
    };
    edited.meta.license = Some(semunit::model::License::Token("CC0-1.0".into()));
    assert!(matches!(f.store.insert(edited), Err(Error::Rejected(_))));
}

#[test]
fn statement_gupris_are_content_digests() {
    let f = fixture();
    let s = f.store.statement(&f.handles.parasite_mass).unwrap();
    let again = f
        .store
        .make_statement_unit(&s.class_ref, &s.subject_ref, s.canonical().clone(), meta())
        .unwrap();
    assert_eq!(again.gupri, s.gupri);
}

#[test]
fn crosswalks_extend_the_stored_unit() {
    let mut f = fixture();
    let g0 = f.handles.parasite_mass.clone();
    let before = f.store.statement(&g0).unwrap().clone();
    assert!(before.manifestation(Form::Tabular).is_none());
    f.store.crosswalk(&g0, Form::Tabular).unwrap();
    let after = f.store.statement(&g0).unwrap();
    assert!(after.manifestation(Form::Tabular).is_some());
    assert_eq!(after.canonical(), before.canonical());
    assert_eq!(after.gupri, before.gupri);

    let mut dropped = after.clone();
    dropped.manifestations.remove(&Form::Graph);
    assert!(matches!(f.store.extend(dropped), Err(Error::Rejected(_))));
}

#[test]
fn statement_content_must_match_the_subject() {
    let f = fixture();
    let s = f.store.statement(&f.handles.parasite_mass).unwrap();
    let wrong = f.store.make_statement_unit(
        &s.class_ref,
        &g("organism-1"),
        s.canonical().clone(),
        fixtures::meta(
            s.meta.schema_ref.clone(),
            LogicalFramework::DescriptionLogic,
            None,
        ),
    );
    assert!(matches!(wrong, Err(Error::SchemaViolation(_))));
}

#[test]
fn compound_kinds_enforce_their_rules() {
    let f = fixture();
    let h = &f.handles;
    let s = &f.store;
    let item = |members| {
        s.make_compound_unit(
            CompoundKind::Item,
            Some(&fixtures::item_class()),
            members,
            CompoundOptions::default(),
            meta(),
        )
    };
    assert!(matches!(
        item(plain(&[&h.parasite_mass, &h.heart_mass])),
        Err(Error::SubjectMismatch(..))
    ));
    assert!(matches!(
        item(plain(&[&g("nowhere")])),
        Err(Error::DanglingMember(_))
    ));
    assert!(matches!(
        item(plain(&[&h.parasite_mass, &h.parasite_mass])),
        Err(Error::Validation(_))
    ));

    let unroled = s.make_compound_unit(
        CompoundKind::LogicalArgument,
        None,
        plain(&[&h.cygnet, &h.swan_row]),
        CompoundOptions::default(),
        meta(),
    );
    assert!(matches!(unroled, Err(Error::Validation(_))));
    let roled = vec![
        Member {
            gupri: h.cygnet.clone(),
            role: Some(ArgumentRole::Premise),
        },
        Member {
            gupri: h.swan_row.clone(),
            role: Some(ArgumentRole::Conclusion),
        },
    ];
    assert!(s
        .make_compound_unit(
            CompoundKind::LogicalArgument,
            None,
            roled,
            CompoundOptions::default(),
            meta()
        )
        .is_ok());

    let frameless = s.make_compound_unit(
        CompoundKind::Context,
        None,
        plain(&[&h.incubation]),
        CompoundOptions::default(),
        meta(),
    );
    assert!(matches!(frameless, Err(Error::Validation(_))));
    let criterionless = s.make_compound_unit(
        CompoundKind::GranularityTree,
        None,
        plain(&h.parthood.iter().collect::<Vec<_>>()),
        CompoundOptions::default(),
        meta(),
    );
    assert!(matches!(criterionless, Err(Error::Validation(_))));
}

#[test]
fn membership_cannot_close_a_cycle() {
    let f = fixture();
    let c = f.store.compound(&f.handles.dataset_b).unwrap().clone();
    // A forged copy of dataset B that lists itself.
    let mut forged = c.clone();
    forged.members.push(Member::plain(c.gupri.clone()));
    let r = f.store.validate_unit(&Unit::Compound(forged));
    assert!(r.has("cycle"));
}

#[test]
fn traversal_matches_the_fixture_shape() {
    let f = fixture();
    let h = &f.handles;
    assert_eq!(f.store.depth(&h.dataset_b).unwrap(), 2);
    assert_eq!(f.store.depth(&h.parasite_mass).unwrap(), 0);
    assert_eq!(
        f.store.transitive_statements(&h.dataset_b).unwrap().len(),
        4
    );
    assert!(f.store.reaches(&h.dataset_b, &h.heart_mass));
    assert!(!f.store.reaches(&h.heart_mass, &h.dataset_b));
    let order = f.store.topological_order().unwrap();
    let pos = |x: &Gupri| order.iter().position(|y| y == x).unwrap();
    assert!(pos(&h.dataset_a) < pos(&h.dataset_b));
    assert!(pos(&h.parasite_item) < pos(&h.context));
}

fn nest(store: &mut UnitStore, pool: &[Gupri], picks: &[Vec<usize>]) -> Vec<Gupri> {
    let mut made: Vec<Gupri> = Vec::new();
    for pick in picks {
        let mut available: Vec<Gupri> = pool.to_vec();
        available.extend(made.iter().cloned());
        let members: BTreeSet<Gupri> = pick
            .iter()
            .map(|&i| available[i % available.len()].clone())
            .collect();
        let c = store
            .make_compound_unit(
                CompoundKind::ItemGroup,
                None,
                members.into_iter().map(Member::plain).collect(),
                CompoundOptions::default(),
                meta(),
            )
            .unwrap();
        made.push(store.insert(c).unwrap());
    }
    made
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_nestings_stay_acyclic_and_ordered(
        picks in prop::collection::vec(prop::collection::vec(0usize..64, 1..4), 1..8),
    ) {
        let mut f = fixture();
        let pool: Vec<Gupri> = f.store.units().filter(|u| u.is_statement()).map(|u| u.gupri().clone()).collect();
        let made = nest(&mut f.store, &pool, &picks);
        let order = f.store.topological_order().unwrap();
        for x in &made {
            let c = f.store.compound(x).unwrap();
            let d = f.store.depth(x).unwrap();
            prop_assert!(d >= 1);
            for m in c.member_gupris() {
                prop_assert!(f.store.reaches(x, m));
                prop_assert!(f.store.depth(m).unwrap() < d);
                if let (Some(a), Some(b)) = (order.iter().position(|y| y == m), order.iter().position(|y| y == x)) {
                    prop_assert!(a < b);
                }
            }
            let closure: BTreeSet<&Gupri> = f.store.closure(x).unwrap().into_iter().map(Unit::gupri).collect();
            prop_assert_eq!(closure.len(), f.store.closure(x).unwrap().len());
            prop_assert!(f.store.validate_unit(f.store.resolve(x).unwrap()).is_valid());
        }
    }
}
