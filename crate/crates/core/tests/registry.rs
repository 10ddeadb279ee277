use semunit::fixtures::{self, g};
use semunit::registry::{AnyRecord, RecordFilter, RegistryKind, TermRecord};
use semunit::Error;

fn term_body(label: &str) -> String {
    serde_json::to_string(&TermRecord::new(g("glucose"), label)).unwrap()
}

#[test]
fn registering_twice_is_a_no_op_and_changes_bump_the_version() {
    let mut reg = fixtures::registries();
    let (gupri, first) = reg
        .register_document(RegistryKind::Terms, &term_body("glucose"))
        .unwrap();
    assert_eq!(gupri, g("glucose"));
    assert!(first.created);
    assert_eq!(first.version, 1);

    let (_, again) = reg
        .register_document(RegistryKind::Terms, &term_body("glucose"))
        .unwrap();
    assert!(!again.created);
    assert_eq!(again.version, 1);

    let (_, changed) = reg
        .register_document(RegistryKind::Terms, &term_body("D-glucose"))
        .unwrap();
    assert_eq!(changed.version, 2);

    let pinned = reg.lookup(RegistryKind::Terms, &gupri, Some(1)).unwrap();
    let AnyRecord::Term(t) = pinned.record else {
        panic!("not a term")
    };
    assert_eq!(t.label, "glucose");
    let AnyRecord::Term(t) = reg
        .lookup(RegistryKind::Terms, &gupri, None)
        .unwrap()
        .record
    else {
        panic!()
    };
    assert_eq!(t.label, "D-glucose");
    assert!(matches!(
        reg.lookup(RegistryKind::Terms, &gupri, Some(3)),
        Err(Error::NotFound(_))
    ));
}

#[test]
fn malformed_and_mapping_documents_are_refused() {
    let mut reg = fixtures::registries();
    assert!(matches!(
        reg.register_document(RegistryKind::Terms, "{\"nope\": 1}"),
        Err(Error::Validation(_))
    ));
    assert!(matches!(
        reg.register_document(RegistryKind::Mappings, "{}"),
        Err(Error::Rejected(_))
    ));
}

#[test]
fn lists_filter_by_text_and_schema() {
    let reg = fixtures::registries();
    let all = reg.list(RegistryKind::Operations, &RecordFilter::default());
    assert_eq!(all.len(), fixtures::operations().len());
    let crosswalks = reg.list(
        RegistryKind::Operations,
        &RecordFilter {
            text: Some("CROSSWALK".into()),
            schema: None,
        },
    );
    assert_eq!(crosswalks.len(), 4);
    let bound = reg.list(
        RegistryKind::Classes,
        &RecordFilter {
            text: None,
            schema: Some(g("mm-measurement")),
        },
    );
    assert!(!bound.is_empty());
    assert!(bound.iter().all(
        |e| matches!(&e.record, AnyRecord::Class(c) if c.schema == Some(g("mm-measurement")))
    ));
}

#[test]
fn compatible_operations_need_a_known_schema() {
    let reg = fixtures::registries();
    let ops = reg.compatible_operations(&g("mm-measurement")).unwrap();
    let expected: Vec<_> = fixtures::operations()
        .into_iter()
        .map(|o| o.gupri)
        .collect();
    assert_eq!(ops, expected);
    assert!(matches!(
        reg.compatible_operations(&g("mm-unknown")),
        Err(Error::NotFound(_))
    ));
}

#[test]
fn kind_tokens_parse_back() {
    for k in RegistryKind::ALL {
        assert_eq!(RegistryKind::parse(k.token()).unwrap(), k);
    }
    assert!(RegistryKind::parse("widgets").is_err());
}
