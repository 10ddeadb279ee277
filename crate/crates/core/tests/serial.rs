use proptest::prelude::*;

use semunit::fixtures::{self, fixture, g};
use semunit::model::{Decimal, Form, SlotValue, Unit};
use semunit::rosetta::{from_rosetta, instantiate_statement};
use semunit::serial::{
    deserialize, export_store, import_store, parse_trig, serialize, to_document, write_trig,
    Document, Format, NanopubDocument, MANIFEST_FILE,
};
use semunit::Error;

#[test]
fn formats_refuse_the_wrong_kind_of_unit() {
    let f = fixture();
    let statement = f.store.resolve(&f.handles.parasite_mass).unwrap();
    let compound = f.store.resolve(&f.handles.parasite_item).unwrap();
    assert!(matches!(
        serialize(statement, Format::NestedNanopub, &f.store),
        Err(Error::Kind(_))
    ));
    assert!(matches!(
        serialize(compound, Format::Nanopub, &f.store),
        Err(Error::Kind(_))
    ));
    let doc = serialize(statement, Format::Nanopub, &f.store).unwrap();
    assert!(matches!(
        deserialize(&doc, Format::NestedNanopub),
        Err(Error::Kind(_))
    ));
    assert!(matches!(
        deserialize(&doc, Format::Rocrate),
        Err(Error::Kind(_))
    ));
}

#[test]
fn nested_nanopubs_without_the_flag_are_refused() {
    let f = fixture();
    let compound = f.store.resolve(&f.handles.dataset_b).unwrap();
    let text = serialize(compound, Format::NestedNanopub, &f.store).unwrap();
    let text = text.as_text().unwrap();
    let stripped: String = text
        .lines()
        .filter(|l| !l.contains("hasCompoundStructure"))
        .map(|l| format!("{l}\n"))
        .collect();
    assert_ne!(stripped, text);
    assert!(deserialize(&Document::Text(stripped), Format::NestedNanopub).is_err());
}

#[test]
fn trig_output_is_stable() {
    let f = fixture();
    for u in f.store.units().filter(|u| u.is_statement()) {
        let text = serialize(u, Format::Nanopub, &f.store).unwrap();
        let text = text.as_text().unwrap();
        let reparsed = write_trig(
            &NanopubDocument::from_trig(&parse_trig(text).unwrap())
                .unwrap()
                .to_trig(),
        );
        assert_eq!(reparsed, text);
    }
}

#[test]
fn references_name_members_and_classes() {
    let f = fixture();
    let compound = f.store.resolve(&f.handles.parasite_item).unwrap();
    let doc = serialize(compound, Format::Canonical, &f.store).unwrap();
    let back = deserialize(&doc, Format::Canonical).unwrap();
    assert!(back.references.contains(&f.handles.parasite_mass));
    assert!(back.references.contains(&fixtures::item_class()));
}

#[test]
fn stores_survive_export_and_import() {
    let f = fixture();
    let dir = tempfile::tempdir().unwrap();
    let written = export_store(&f.store, dir.path()).unwrap();
    assert!(written.iter().any(|p| p.ends_with(MANIFEST_FILE)));
    let back = import_store(dir.path()).unwrap();
    assert_eq!(back.len(), f.store.len());
    for u in f.store.units() {
        assert_eq!(back.resolve(u.gupri()).unwrap(), u);
    }
    assert_eq!(
        back.registries()
            .list(
                semunit::registry::RegistryKind::Schemas,
                &Default::default()
            )
            .len(),
        f.store
            .registries()
            .list(
                semunit::registry::RegistryKind::Schemas,
                &Default::default()
            )
            .len()
    );
}

#[test]
fn missing_stores_fail_to_import() {
    let dir = tempfile::tempdir().unwrap();
    assert!(import_store(&dir.path().join("absent")).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn generated_statements_round_trip_in_every_format(
        value in (0u32..1_000_000, 0u32..1000).prop_map(|(i, f)| format!("{i}.{f:03}")),
        form in prop::sample::select(vec![Form::Graph, Form::Tabular, Form::Rosetta]),
        subject in prop::sample::select(vec!["parasite-x", "heart-1", "specimen-9"]),
    ) {
        let f = fixture();
        let mm = fixtures::measurement_metamodel();
        let r = instantiate_statement(&mm, g(subject), vec![
            SlotValue::Resource { value: g("mass") },
            SlotValue::Quantity { value: Decimal::parse(&value).unwrap(), unit: g("gram") },
        ]).unwrap();
        let content = from_rosetta(&r, &mm, form, f.store.registries()).unwrap();
        let meta = fixtures::meta(Some(mm.gupri.clone()), semunit::model::LogicalFramework::DescriptionLogic, None);
        let unit = Unit::Statement(
            f.store.make_statement_unit(&g("measurement-statement-unit"), &g(subject), content, meta).unwrap(),
        );
        let expected = to_document(&unit).unwrap();
        for format in Format::ALL.into_iter().filter(|x| x.accepts(&unit)) {
            let doc = serialize(&unit, format, &f.store).unwrap();
            let back = deserialize(&doc, format).unwrap();
            prop_assert_eq!(to_document(&back.unit).unwrap(), expected.clone());
            prop_assert_eq!(serialize(&back.unit, format, &f.store).unwrap(), doc);
        }
    }
}
