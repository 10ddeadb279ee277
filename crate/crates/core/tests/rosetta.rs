use proptest::prelude::*;

use semunit::fixtures::{self, fixture, g};
use semunit::model::{canonicalize, ContentManifestation, Decimal, Form, SlotValue};
use semunit::rosetta::{
    self, from_rosetta, instantiate_statement, normalize_sentence, render_rosetta, to_rosetta,
    RenderMode, RenderOutput, LOSSY_TEXT_NOTE,
};
use semunit::Error;

fn measurement(
    subject: &str,
    quality: &str,
    value: &str,
    unit: &str,
) -> semunit::model::RosettaStatement {
    instantiate_statement(
        &fixtures::measurement_metamodel(),
        g(subject),
        vec![
            SlotValue::Resource { value: g(quality) },
            SlotValue::Quantity {
                value: Decimal::parse(value).unwrap(),
                unit: g(unit),
            },
        ],
    )
    .unwrap()
}

fn label(r: &semunit::model::RosettaStatement) -> String {
    match render_rosetta(r, RenderMode::Label, &fixtures::registries()).unwrap() {
        RenderOutput::Label(l) => l.text,
        other => panic!("expected a label, got {other:?}"),
    }
}

#[test]
fn labels_follow_the_metamodel_template() {
    assert_eq!(
        label(&measurement("parasite-x", "mass", "24.76", "gram")),
        fixtures::CANONICAL_SENTENCE
    );
    let inc = instantiate_statement(
        &fixtures::incubation_metamodel(),
        g("sample-1"),
        vec![
            SlotValue::Quantity {
                value: Decimal::parse("37").unwrap(),
                unit: g("degree-celsius"),
            },
            SlotValue::Quantity {
                value: Decimal::parse("24").unwrap(),
                unit: g("hour"),
            },
        ],
    )
    .unwrap();
    match render_rosetta(&inc, RenderMode::Label, &fixtures::registries()).unwrap() {
        RenderOutput::Label(l) => {
            assert_eq!(l.text, "This sample was incubated at 37°C for 24 hours.")
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn labels_round_quantities_to_six_significant_digits() {
    assert_eq!(
        label(&measurement("parasite-x", "mass", "10000.01", "gram")),
        "Parasite X has a mass of 10000 grams."
    );
}

#[test]
fn bindings_must_fit_the_metamodel() {
    let mm = fixtures::measurement_metamodel();
    let err = instantiate_statement(
        &mm,
        g("parasite-x"),
        vec![SlotValue::Resource { value: g("mass") }],
    );
    assert!(matches!(err, Err(Error::Binding(_))));
}

#[test]
fn unparseable_sentences_yield_nothing() {
    let reg = fixtures::registries();
    let mms: Vec<_> = reg.metamodels().collect();
    assert!(normalize_sentence("colourless green ideas sleep furiously", &mms, &reg).is_none());
}

#[test]
fn crosswalking_text_marks_the_result_lossy() {
    let f = fixture();
    let variant = f.store.statement(&f.handles.parasite_variant).unwrap();
    let out = rosetta::crosswalk(variant, Form::Graph, f.store.registries()).unwrap();
    assert_eq!(
        out.meta.extra.get("crosswalk.graph").map(String::as_str),
        Some(LOSSY_TEXT_NOTE)
    );
    assert_eq!(out.canonical_form, variant.canonical_form);
    // Crosswalking never touches existing manifestations.
    assert_eq!(
        out.manifestation(Form::TextSnippet),
        variant.manifestation(Form::TextSnippet)
    );
}

#[test]
fn foreign_rosetta_content_does_not_lift() {
    let r = measurement("parasite-x", "mass", "1", "gram");
    let err = to_rosetta(
        &ContentManifestation::Rosetta(r),
        &fixtures::colour_metamodel(),
        &fixtures::registries(),
    );
    assert!(matches!(err, Err(Error::NoCrosswalk(_))));
}

/// Values with at most six significant digits, which labels render exactly.
fn decimal_text() -> impl Strategy<Value = String> {
    (0u32..10_000, 0u32..100, prop::bool::ANY).prop_map(|(i, f, frac)| {
        if frac {
            format!("{i}.{f:02}")
        } else {
            i.to_string()
        }
    })
}

fn subject() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["parasite-x", "organism-1", "heart-1", "liver-1"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn structured_forms_round_trip_through_the_pivot(
        s in subject(),
        quality in prop::sample::select(vec!["mass", "length", "width"]),
        unit in prop::sample::select(vec!["gram", "millimetre"]),
        value in decimal_text(),
    ) {
        let reg = fixtures::registries();
        let mm = fixtures::measurement_metamodel();
        let r = measurement(s, quality, &value, unit);
        for form in [Form::Graph, Form::Tabular, Form::Rosetta] {
            let m = from_rosetta(&r, &mm, form, &reg).unwrap();
            let back = to_rosetta(&m, &mm, &reg).unwrap();
            prop_assert_eq!(&back, &r);
            for other in [Form::Graph, Form::Tabular] {
                let direct = canonicalize(&from_rosetta(&r, &mm, other, &reg).unwrap()).unwrap();
                let via = canonicalize(&from_rosetta(&back, &mm, other, &reg).unwrap()).unwrap();
                prop_assert_eq!(direct, via);
            }
        }
    }

    #[test]
    fn rendered_labels_normalize_back(
        s in subject(),
        quality in prop::sample::select(vec!["mass", "length"]),
        value in decimal_text(),
    ) {
        let reg = fixtures::registries();
        let r = measurement(s, quality, &value, "gram");
        let text = label(&r);
        let mms: Vec<_> = reg.metamodels().collect();
        let (mm, parsed) = normalize_sentence(&text, &mms, &reg).expect("own label parses");
        prop_assert_eq!(mm, g("mm-measurement"));
        prop_assert_eq!(parsed, r);
    }

    #[test]
    fn statement_nodes_depend_only_on_content(value in decimal_text()) {
        let a = measurement("parasite-x", "mass", &value, "gram");
        let b = measurement("parasite-x", "mass", &value, "gram");
        prop_assert_eq!(rosetta::statement_node(&a).unwrap(), rosetta::statement_node(&b).unwrap());
        let c = measurement("parasite-x", "length", &value, "gram");
        prop_assert_ne!(rosetta::statement_node(&a).unwrap(), rosetta::statement_node(&c).unwrap());
    }
}
