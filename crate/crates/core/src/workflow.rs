//! Execution of registered workflows over stored units.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fairness::{score_fair_facets, FacetScores};
use crate::gupri::Gupri;
use crate::model::{ContentManifestation, RosettaStatement, StatementUnit, Unit};
use crate::registry::{BuiltinOp, ClassCategory, OperationRecord, Registries, StepBinding};
use crate::rosetta::{normalize_sentence, to_rosetta};
use crate::store::{UnitStore, ValidationReport};
use crate::views;

/// What a step produced besides its output units.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "values", rename_all = "kebab-case")]
pub enum StepOutcome {
    Units,
    Scores(BTreeMap<Gupri, FacetScores>),
    Renderings(BTreeMap<Gupri, String>),
    Reports(Vec<ValidationReport>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepTrace {
    /// One-based step number.
    pub step: usize,
    pub operation: Gupri,
    pub op: BuiltinOp,
    pub inputs: Vec<Gupri>,
    pub outputs: Vec<Gupri>,
    pub outcome: StepOutcome,
    pub wall_time_us: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorkflowRun {
    pub workflow: Gupri,
    pub inputs: Vec<Gupri>,
    pub outputs: Vec<Gupri>,
    pub trace: Vec<StepTrace>,
}

/// A failed run: the error plus the trace of every step that was started.
/// The failing step is the last trace entry and has no outputs.
#[derive(Debug)]
pub struct WorkflowFailure {
    pub error: Error,
    pub trace: Vec<StepTrace>,
}

impl From<WorkflowFailure> for Error {
    fn from(f: WorkflowFailure) -> Self {
        f.error
    }
}

fn fail(error: Error) -> WorkflowFailure {
    WorkflowFailure {
        error,
        trace: Vec::new(),
    }
}

/// The schema a unit's content follows: its declared schema, else its
/// class's schema.
pub fn unit_schema(unit: &Unit, reg: &Registries) -> Option<Gupri> {
    let s = unit.as_statement()?;
    s.meta
        .schema_ref
        .clone()
        .or_else(|| reg.class(&s.class_ref).and_then(|c| c.schema.clone()))
}

fn check_compatible(op: &OperationRecord, inputs: &[Gupri], store: &UnitStore) -> Result<()> {
    for g in inputs {
        let unit = store.resolve(g)?;
        match unit_schema(unit, store.registries()) {
            Some(s) if op.compatible_schemas.contains(&s) => {}
            Some(s) => {
                return Err(Error::Validation(format!(
                    "{} does not accept schema {} of unit {g}",
                    op.name,
                    store.registries().label_of(&s).unwrap_or(s.as_str())
                )))
            }
            None => {
                return Err(Error::Validation(format!(
                    "unit {g} declares no schema for {}",
                    op.name
                )))
            }
        }
    }
    Ok(())
}

/// Maps a unit onto a successor whose canonical form is rosetta. Text is
/// parsed against the registered metamodels; structured content pivots
/// directly.
pub fn normalize_unit(unit: &StatementUnit, store: &UnitStore) -> Result<StatementUnit> {
    let reg = store.registries();
    let (metamodel, rosetta): (Gupri, RosettaStatement) = match unit.canonical() {
        ContentManifestation::TextSnippet(t) => {
            let preferred = unit.meta.schema_ref.as_ref().and_then(|s| reg.metamodel(s));
            let mut candidates: Vec<_> = preferred.into_iter().collect();
            candidates.extend(reg.metamodels().filter(|m| Some(*m) != preferred));
            normalize_sentence(&t.text, &candidates, reg)
                .ok_or_else(|| Error::UnparseableSentence(t.text.clone()))?
        }
        other => {
            let schema = unit.meta.schema_ref.as_ref().ok_or_else(|| {
                Error::NoCrosswalk(format!("unit {} declares no schema", unit.gupri))
            })?;
            let m = reg.metamodel(schema).ok_or_else(|| {
                Error::NoCrosswalk(format!("schema {schema} is not a rosetta metamodel"))
            })?;
            (m.gupri.clone(), to_rosetta(other, m, reg)?)
        }
    };
    if rosetta.subject != unit.subject_ref {
        return Err(Error::SubjectMismatch(
            rosetta.subject,
            unit.subject_ref.clone(),
        ));
    }
    let bound = |c: &Gupri| {
        reg.class(c)
            .is_some_and(|c| c.schema.as_ref() == Some(&metamodel))
    };
    let class = if bound(&unit.class_ref) {
        unit.class_ref.clone()
    } else {
        reg.classes()
            .find(|c| {
                c.category == ClassCategory::Statement && c.schema.as_ref() == Some(&metamodel)
            })
            .map(|c| c.gupri.clone())
            .ok_or_else(|| Error::UnknownClass(metamodel.clone()))?
    };
    let mut meta = unit.meta.clone();
    meta.schema_ref = Some(metamodel);
    meta.extra.retain(|k, _| !k.starts_with("crosswalk."));
    if !meta.source_refs.contains(&unit.gupri) {
        meta.source_refs.push(unit.gupri.clone());
    }
    store.make_statement_unit(
        &class,
        &unit.subject_ref,
        ContentManifestation::Rosetta(rosetta),
        meta,
    )
}

fn execute(
    op: &OperationRecord,
    inputs: &[Gupri],
    store: &mut UnitStore,
) -> Result<(Vec<Gupri>, StepOutcome)> {
    Ok(match op.executable {
        BuiltinOp::Normalize => {
            let mut out = Vec::with_capacity(inputs.len());
            for g in inputs {
                let unit = normalize_unit(store.statement(g)?, store)?;
                out.push(store.insert(unit)?);
            }
            (out, StepOutcome::Units)
        }
        BuiltinOp::Crosswalk(form) => {
            for g in inputs {
                store.crosswalk(g, form)?;
            }
            (inputs.to_vec(), StepOutcome::Units)
        }
        BuiltinOp::Render => {
            let labels = inputs
                .iter()
                .map(|g| Ok((g.clone(), views::unit_label(store.resolve(g)?, store))))
                .collect::<Result<_>>()?;
            (inputs.to_vec(), StepOutcome::Renderings(labels))
        }
        BuiltinOp::Score => {
            let scores = inputs
                .iter()
                .map(|g| Ok((g.clone(), score_fair_facets(store.resolve(g)?, store))))
                .collect::<Result<_>>()?;
            (inputs.to_vec(), StepOutcome::Scores(scores))
        }
        BuiltinOp::Validate => {
            let reports: Vec<ValidationReport> = inputs
                .iter()
                .map(|g| Ok(store.validate_unit(store.resolve(g)?)))
                .collect::<Result<_>>()?;
            if let Some(bad) = reports.iter().find(|r| !r.is_valid()) {
                let codes: Vec<&str> = bad.violations().map(|i| i.code).collect();
                return Err(Error::Validation(format!(
                    "unit {} fails validation: {}",
                    bad.unit.as_ref().map_or("?", Gupri::as_str),
                    codes.join(", ")
                )));
            }
            (inputs.to_vec(), StepOutcome::Reports(reports))
        }
    })
}

/// Runs a registered workflow. Steps execute in order against a working
/// copy of the store, which replaces `store` only when every step succeeds.
pub fn run_workflow(
    workflow: &Gupri,
    inputs: &[Gupri],
    store: &mut UnitStore,
) -> std::result::Result<WorkflowRun, WorkflowFailure> {
    let wf = store
        .registries()
        .workflow(workflow)
        .cloned()
        .ok_or_else(|| fail(Error::NotFound(format!("workflow {workflow}"))))?;
    for g in inputs {
        store.resolve(g).map_err(fail)?;
    }
    let mut work = store.clone();
    let mut trace = Vec::with_capacity(wf.steps.len());
    let mut current = inputs.to_vec();
    for (i, (op_ref, binding)) in wf.steps.iter().zip(&wf.bindings).enumerate() {
        let step = i + 1;
        let op = work
            .registries()
            .operation(op_ref)
            .cloned()
            .ok_or_else(|| fail(Error::NotFound(format!("operation {op_ref}"))))?;
        let step_inputs = match binding {
            StepBinding::Inputs => inputs.to_vec(),
            StepBinding::Previous => current.clone(),
        };
        let started = Instant::now();
        let result = check_compatible(&op, &step_inputs, &work)
            .and_then(|_| execute(&op, &step_inputs, &mut work));
        let wall_time_us = started.elapsed().as_micros() as u64;
        let (outputs, outcome, error) = match result {
            Ok((o, oc)) => (o, oc, None),
            Err(e) => (Vec::new(), StepOutcome::Units, Some(e)),
        };
        trace.push(StepTrace {
            step,
            operation: op.gupri.clone(),
            op: op.executable,
            inputs: step_inputs,
            outputs: outputs.clone(),
            outcome,
            wall_time_us,
        });
        if let Some(e) = error {
            return Err(WorkflowFailure {
                error: Error::Step {
                    step,
                    message: format!("{}: {e}", op.name),
                },
                trace,
            });
        }
        current = outputs;
    }
    *store = work;
    Ok(WorkflowRun {
        workflow: workflow.clone(),
        inputs: inputs.to_vec(),
        outputs: current,
        trace,
    })
}
