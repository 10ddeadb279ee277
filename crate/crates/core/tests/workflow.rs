use semunit::fixtures::{self, fixture};
use semunit::model::{Form, Unit};
use semunit::views::unit_label;
use semunit::workflow::{run_workflow, StepOutcome};
use semunit::Error;

#[test]
fn normalizing_the_variant_sentence_yields_the_canonical_label() {
    let mut f = fixture();
    let wf = fixtures::normalize_workflow().gupri;
    let run = run_workflow(&wf, &[f.handles.parasite_variant.clone()], &mut f.store).unwrap();
    assert_eq!(run.trace.len(), 3);
    assert!(matches!(run.trace[2].outcome, StepOutcome::Scores(_)));
    let [out] = run.outputs.as_slice() else {
        panic!("{:?}", run.outputs)
    };
    let s = f.store.statement(out).unwrap();
    assert_eq!(s.canonical_form, Form::Rosetta);
    assert!(s.manifestation(Form::Graph).is_some());
    assert!(s.meta.source_refs.contains(&f.handles.parasite_variant));
    assert_eq!(
        unit_label(&Unit::Statement(s.clone()), &f.store),
        fixtures::CANONICAL_SENTENCE
    );
}

#[test]
fn a_failing_step_leaves_the_store_untouched() {
    let mut f = fixture();
    let before = f.store.clone();
    let wf = fixtures::normalize_workflow().gupri;
    let failure = run_workflow(&wf, &[f.handles.parasite_item.clone()], &mut f.store).unwrap_err();
    assert!(matches!(failure.error, Error::Step { step: 1, .. }));
    assert_eq!(failure.trace.len(), 1);
    assert!(failure.trace[0].outputs.is_empty());
    assert_eq!(f.store.len(), before.len());
    for u in before.units() {
        assert_eq!(f.store.resolve(u.gupri()).unwrap(), u);
    }
}

#[test]
fn unknown_workflows_and_inputs_fail_before_any_step() {
    let mut f = fixture();
    let missing = run_workflow(&fixtures::g("wf-none"), &[], &mut f.store).unwrap_err();
    assert!(matches!(missing.error, Error::NotFound(_)) && missing.trace.is_empty());
    let wf = fixtures::normalize_workflow().gupri;
    let dangling = run_workflow(&wf, &[fixtures::g("nowhere")], &mut f.store).unwrap_err();
    assert!(dangling.trace.is_empty());
}
