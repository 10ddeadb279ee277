//! Terminology, schema, operations and workflow registries.
//!
//! Every record kind is versioned: re-registering an identical body is a
//! no-op, a changed body becomes the next version and older versions stay
//! retrievable by pinning.

mod records;
mod table;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use records::{
    BuiltinOp, ChangelogEntry, ClassCategory, ClassRecord, CrosswalkRecord, EntityMapping,
    Lossiness, MappingKind, MappingRecord, OperationRecord, SchemaBody, SchemaRecord, StepBinding,
    TermRecord, WorkflowRecord,
};
use table::Upsert;
pub use table::{Table, Versioned};

use crate::error::{Error, Result};
use crate::gupri::Gupri;
use crate::model::CompoundKind;
use crate::rosetta::RosettaMetamodel;
use crate::vocab;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegistryKind {
    Terms,
    Schemas,
    Operations,
    Workflows,
    Classes,
    Crosswalks,
    Mappings,
}

impl RegistryKind {
    pub const ALL: [RegistryKind; 7] = [
        RegistryKind::Terms,
        RegistryKind::Schemas,
        RegistryKind::Operations,
        RegistryKind::Workflows,
        RegistryKind::Classes,
        RegistryKind::Crosswalks,
        RegistryKind::Mappings,
    ];

    pub fn token(self) -> &'static str {
        match self {
            RegistryKind::Terms => "terms",
            RegistryKind::Schemas => "schemas",
            RegistryKind::Operations => "operations",
            RegistryKind::Workflows => "workflows",
            RegistryKind::Classes => "classes",
            RegistryKind::Crosswalks => "crosswalks",
            RegistryKind::Mappings => "mappings",
        }
    }

    pub fn parse(token: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.token() == token)
            .ok_or_else(|| Error::NotFound(format!("registry kind `{token}`")))
    }
}

impl fmt::Display for RegistryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum AnyRecord {
    Term(TermRecord),
    Schema(SchemaRecord),
    Operation(OperationRecord),
    Workflow(WorkflowRecord),
    Class(ClassRecord),
    Crosswalk(CrosswalkRecord),
    Mapping(MappingRecord),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecordEntry {
    pub kind: RegistryKind,
    pub gupri: Gupri,
    pub version: u32,
    pub note: String,
    pub record: AnyRecord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Registered {
    pub version: u32,
    pub created: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RecordFilter {
    /// Case-insensitive substring of the record's label or name.
    pub text: Option<String>,
    /// Operations compatible with, or classes bound to, this schema.
    pub schema: Option<Gupri>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Registries {
    terms: Table<TermRecord>,
    mappings: Table<MappingRecord>,
    classes: Table<ClassRecord>,
    schemas: Table<SchemaRecord>,
    crosswalks: Table<CrosswalkRecord>,
    operations: Table<OperationRecord>,
    workflows: Table<WorkflowRecord>,
}

fn note_for(version: u32, note: Option<&str>) -> String {
    match note {
        Some(n) => n.to_string(),
        None if version == 1 => "registered".to_string(),
        None => "updated".to_string(),
    }
}

fn finish(u: Upsert) -> Registered {
    match u {
        Upsert::Unchanged(version) => Registered {
            version,
            created: false,
        },
        Upsert::New(version) => Registered {
            version,
            created: true,
        },
    }
}

impl Registries {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registries pre-populated with the built-in classes and schemas.
    pub fn with_builtins() -> Self {
        let mut r = Self::new();
        for (g, label, pointer) in [
            (
                &*vocab::ORPHAN_GRAPH_SCHEMA,
                "orphan graph content",
                "builtin:orphan-graph",
            ),
            (
                &*vocab::ORPHAN_ROW_SCHEMA,
                "orphan tabular row",
                "builtin:orphan-row",
            ),
        ] {
            r.register_schema(SchemaRecord::external(g.clone(), label, pointer), None)
                .expect("builtin schema");
        }
        r.register_class(ClassRecord {
            gupri: vocab::ORPHAN_STATEMENT_CLASS.clone(),
            label: "orphan statement unit".into(),
            category: ClassCategory::Statement,
            schema: None,
        })
        .expect("builtin class");
        for &kind in CompoundKind::ALL {
            r.register_class(ClassRecord {
                gupri: vocab::compound_class(kind),
                label: vocab::compound_class_label(kind),
                category: ClassCategory::Compound(kind),
                schema: None,
            })
            .expect("builtin class");
        }
        r.register_term(TermRecord::new(
            vocab::SYSTEM_AGENT.clone(),
            "semunit system agent",
        ))
        .expect("builtin term");
        r
    }

    // ---- registration -------------------------------------------------

    pub fn register_term(&mut self, term: TermRecord) -> Result<Registered> {
        let mut records = BTreeSet::new();
        for m in &term.mappings {
            if !records.insert(&m.record) {
                return Err(Error::Rejected(format!(
                    "mapping record {} listed twice",
                    m.record
                )));
            }
            if let Some(existing) = self.mappings.get(&m.record) {
                if existing.source != term.gupri {
                    return Err(Error::Rejected(format!(
                        "mapping record {} already belongs to {}",
                        m.record, existing.source
                    )));
                }
            }
        }
        for m in &term.mappings {
            let record = MappingRecord {
                gupri: m.record.clone(),
                source: term.gupri.clone(),
                target: m.target.clone(),
                kind: m.kind,
            };
            let v = self.mappings.next_version(&m.record);
            self.mappings
                .upsert(&m.record.clone(), record, note_for(v, None), |a, b| a == b);
        }
        let g = term.gupri.clone();
        let v = self.terms.next_version(&g);
        Ok(finish(self.terms.upsert(
            &g,
            term,
            note_for(v, None),
            |a, b| a == b,
        )))
    }

    pub fn register_class(&mut self, class: ClassRecord) -> Result<Registered> {
        if let Some(s) = &class.schema {
            if !self.schemas.contains(s) {
                return Err(Error::Rejected(format!(
                    "class {} names unknown schema {s}",
                    class.gupri
                )));
            }
        }
        let g = class.gupri.clone();
        let v = self.classes.next_version(&g);
        Ok(finish(self.classes.upsert(
            &g,
            class,
            note_for(v, None),
            |a, b| a == b,
        )))
    }

    pub fn register_schema(
        &mut self,
        mut schema: SchemaRecord,
        note: Option<&str>,
    ) -> Result<Registered> {
        if let SchemaBody::RosettaMetamodel(m) = &schema.body {
            if m.gupri != schema.gupri {
                return Err(Error::Rejected(
                    "metamodel GUPRI differs from schema GUPRI".into(),
                ));
            }
            m.validate().map_err(|e| Error::Rejected(e.to_string()))?;
        }
        for c in &schema.crosswalk_records {
            if !self.crosswalks.contains(c) {
                return Err(Error::Rejected(format!(
                    "crosswalk record {c} does not resolve"
                )));
            }
        }
        let g = schema.gupri.clone();
        let version = self.schemas.next_version(&g);
        let mut changelog = self
            .schemas
            .get(&g)
            .map(|s| s.changelog.clone())
            .unwrap_or_default();
        let note = note_for(version, note);
        changelog.push(ChangelogEntry {
            version,
            note: note.clone(),
        });
        schema.version = version;
        schema.changelog = changelog;
        if let SchemaBody::RosettaMetamodel(m) = &mut schema.body {
            m.version = version;
        }
        Ok(finish(self.schemas.upsert(&g, schema, note, |a, b| {
            strip_schema_versioning(a) == strip_schema_versioning(b)
        })))
    }

    pub fn register_crosswalk(&mut self, record: CrosswalkRecord) -> Result<Registered> {
        for s in [&record.source_schema, &record.target_schema] {
            if !self.schemas.contains(s) {
                return Err(Error::Rejected(format!(
                    "crosswalk names unknown schema {s}"
                )));
            }
        }
        if record.lossiness == Lossiness::Lossless {
            if let Some(m) = self.metamodel(&record.source_schema) {
                let mapped: BTreeSet<&str> =
                    record.slot_map.iter().map(|(s, _)| s.as_str()).collect();
                let missing: Vec<&str> = m
                    .slots
                    .iter()
                    .map(|s| s.name.as_str())
                    .filter(|s| !mapped.contains(s))
                    .collect();
                if !missing.is_empty() {
                    return Err(Error::Rejected(format!(
                        "lossless crosswalk leaves slots unmapped: {}",
                        missing.join(", ")
                    )));
                }
            }
        }
        let sources: BTreeSet<&str> = record.slot_map.iter().map(|(s, _)| s.as_str()).collect();
        let targets: BTreeSet<&str> = record.slot_map.iter().map(|(_, t)| t.as_str()).collect();
        if sources.len() != record.slot_map.len() || targets.len() != record.slot_map.len() {
            return Err(Error::Rejected("slot map is not a bijection".into()));
        }
        let g = record.gupri.clone();
        let v = self.crosswalks.next_version(&g);
        Ok(finish(self.crosswalks.upsert(
            &g,
            record,
            note_for(v, None),
            |a, b| a == b,
        )))
    }

    pub fn register_operation(&mut self, op: OperationRecord) -> Result<Registered> {
        for s in &op.compatible_schemas {
            if !self.schemas.contains(s) {
                return Err(Error::Rejected(format!(
                    "operation {} names unknown schema {s}",
                    op.name
                )));
            }
        }
        let g = op.gupri.clone();
        let v = self.operations.next_version(&g);
        Ok(finish(self.operations.upsert(
            &g,
            op,
            note_for(v, None),
            |a, b| a == b,
        )))
    }

    pub fn register_workflow(&mut self, mut wf: WorkflowRecord) -> Result<Registered> {
        if wf.steps.is_empty() {
            return Err(Error::Rejected(format!(
                "workflow {} has no steps",
                wf.name
            )));
        }
        if wf.bindings.is_empty() {
            wf.bindings = std::iter::once(StepBinding::Inputs)
                .chain(std::iter::repeat_n(
                    StepBinding::Previous,
                    wf.steps.len() - 1,
                ))
                .collect();
        }
        if wf.bindings.len() != wf.steps.len() {
            return Err(Error::Rejected(
                "workflow needs exactly one binding per step".into(),
            ));
        }
        let ops: Vec<&OperationRecord> = wf
            .steps
            .iter()
            .map(|g| {
                self.operations.get(g).ok_or_else(|| {
                    Error::Rejected(format!("workflow step {g} is not a registered operation"))
                })
            })
            .collect::<Result<_>>()?;
        for (i, pair) in ops.windows(2).enumerate() {
            let a: BTreeSet<&Gupri> = pair[0].compatible_schemas.iter().collect();
            if !pair[1].compatible_schemas.iter().any(|s| a.contains(s)) {
                let list = |op: &OperationRecord| {
                    op.compatible_schemas
                        .iter()
                        .map(|s| self.schema_label(s))
                        .collect::<Vec<_>>()
                        .join(", ")
                };
                return Err(Error::Rejected(format!(
                    "steps {} ({}) and {} ({}) share no schema: [{}] vs [{}]",
                    i + 1,
                    pair[0].name,
                    i + 2,
                    pair[1].name,
                    list(pair[0]),
                    list(pair[1])
                )));
            }
        }
        let g = wf.gupri.clone();
        let v = self.workflows.next_version(&g);
        Ok(finish(self.workflows.upsert(
            &g,
            wf,
            note_for(v, None),
            |a, b| a == b,
        )))
    }

    /// Registers a record given as a document of the named kind.
    pub fn register_document(
        &mut self,
        kind: RegistryKind,
        body: &str,
    ) -> Result<(Gupri, Registered)> {
        fn parse<T: for<'de> Deserialize<'de>>(body: &str) -> Result<T> {
            serde_json::from_str(body)
                .map_err(|e| Error::Validation(format!("malformed record: {e}")))
        }
        Ok(match kind {
            RegistryKind::Terms => {
                let r: TermRecord = parse(body)?;
                (r.gupri.clone(), self.register_term(r)?)
            }
            RegistryKind::Schemas => {
                let r: SchemaRecord = parse(body)?;
                (r.gupri.clone(), self.register_schema(r, None)?)
            }
            RegistryKind::Operations => {
                let r: OperationRecord = parse(body)?;
                (r.gupri.clone(), self.register_operation(r)?)
            }
            RegistryKind::Workflows => {
                let r: WorkflowRecord = parse(body)?;
                (r.gupri.clone(), self.register_workflow(r)?)
            }
            RegistryKind::Classes => {
                let r: ClassRecord = parse(body)?;
                (r.gupri.clone(), self.register_class(r)?)
            }
            RegistryKind::Crosswalks => {
                let r: CrosswalkRecord = parse(body)?;
                (r.gupri.clone(), self.register_crosswalk(r)?)
            }
            RegistryKind::Mappings => {
                return Err(Error::Rejected(
                    "mapping records are created by registering their source term".into(),
                ))
            }
        })
    }

    // ---- lookup --------------------------------------------------------

    pub fn lookup(
        &self,
        kind: RegistryKind,
        gupri: &Gupri,
        version: Option<u32>,
    ) -> Result<RecordEntry> {
        fn pick<R: Clone + PartialEq>(
            t: &Table<R>,
            g: &Gupri,
            v: Option<u32>,
        ) -> Option<Versioned<R>> {
            match v {
                Some(v) => t.pinned(g, v).cloned(),
                None => t.latest(g).cloned(),
            }
        }
        macro_rules! entry {
            ($table:expr, $variant:ident) => {
                pick(&$table, gupri, version).map(|v| RecordEntry {
                    kind,
                    gupri: gupri.clone(),
                    version: v.version,
                    note: v.note,
                    record: AnyRecord::$variant(v.record),
                })
            };
        }
        let found = match kind {
            RegistryKind::Terms => entry!(self.terms, Term),
            RegistryKind::Schemas => entry!(self.schemas, Schema),
            RegistryKind::Operations => entry!(self.operations, Operation),
            RegistryKind::Workflows => entry!(self.workflows, Workflow),
            RegistryKind::Classes => entry!(self.classes, Class),
            RegistryKind::Crosswalks => entry!(self.crosswalks, Crosswalk),
            RegistryKind::Mappings => entry!(self.mappings, Mapping),
        };
        found.ok_or_else(|| match version {
            Some(v) => Error::NotFound(format!("{kind} record {gupri} version {v}")),
            None => Error::NotFound(format!("{kind} record {gupri}")),
        })
    }

    /// Looks a GUPRI up in every registry.
    pub fn lookup_any(&self, gupri: &Gupri) -> Result<RecordEntry> {
        RegistryKind::ALL
            .into_iter()
            .find_map(|k| self.lookup(k, gupri, None).ok())
            .ok_or_else(|| Error::NotFound(format!("record {gupri}")))
    }

    pub fn list(&self, kind: RegistryKind, filter: &RecordFilter) -> Vec<RecordEntry> {
        let needle = filter.text.as_ref().map(|t| t.to_lowercase());
        let text_ok = |label: &str| {
            needle
                .as_ref()
                .is_none_or(|n| label.to_lowercase().contains(n))
        };
        let schema_ok =
            |schemas: &[Gupri]| filter.schema.as_ref().is_none_or(|s| schemas.contains(s));
        macro_rules! collect {
            ($table:expr, $variant:ident, |$r:ident| $label:expr, $schemas:expr) => {
                $table
                    .iter()
                    .filter(|v| {
                        let $r = &v.record;
                        text_ok($label) && schema_ok($schemas)
                    })
                    .map(|v| RecordEntry {
                        kind,
                        gupri: v.record.gupri.clone(),
                        version: v.version,
                        note: v.note.clone(),
                        record: AnyRecord::$variant(v.record.clone()),
                    })
                    .collect()
            };
        }
        match kind {
            RegistryKind::Terms => collect!(self.terms, Term, |r| &r.label, &[]),
            RegistryKind::Schemas => collect!(
                self.schemas,
                Schema,
                |r| &r.label,
                std::slice::from_ref(&r.gupri)
            ),
            RegistryKind::Operations => {
                collect!(
                    self.operations,
                    Operation,
                    |r| &r.name,
                    &r.compatible_schemas
                )
            }
            RegistryKind::Workflows => collect!(self.workflows, Workflow, |r| &r.name, &[]),
            RegistryKind::Classes => {
                collect!(self.classes, Class, |r| &r.label, r.schema.as_slice())
            }
            RegistryKind::Crosswalks => collect!(
                self.crosswalks,
                Crosswalk,
                |r| "",
                &[r.source_schema.clone(), r.target_schema.clone()]
            ),
            RegistryKind::Mappings => collect!(self.mappings, Mapping, |_r| "", &[]),
        }
    }

    /// Operations interoperable with the given schema, in registration order.
    pub fn compatible_operations(&self, schema: &Gupri) -> Result<Vec<Gupri>> {
        if !self.schemas.contains(schema) {
            return Err(Error::NotFound(format!("schema {schema}")));
        }
        Ok(self
            .operations
            .iter()
            .filter(|v| v.record.compatible_schemas.contains(schema))
            .map(|v| v.record.gupri.clone())
            .collect())
    }

    // ---- typed accessors ----------------------------------------------

    pub fn term(&self, g: &Gupri) -> Option<&TermRecord> {
        self.terms.get(g)
    }

    pub fn terms(&self) -> impl Iterator<Item = &TermRecord> {
        self.terms.iter().map(|v| &v.record)
    }

    /// First term, in registration order, whose label or synonym equals
    /// `label` exactly; falls back to a case-insensitive comparison.
    pub fn find_term_by_label(&self, label: &str) -> Option<&TermRecord> {
        let exact = |t: &&TermRecord| t.label == label || t.synonyms.iter().any(|s| s == label);
        let loose = |t: &&TermRecord| {
            t.label.eq_ignore_ascii_case(label)
                || t.synonyms.iter().any(|s| s.eq_ignore_ascii_case(label))
        };
        self.terms()
            .find(exact)
            .or_else(|| self.terms().find(loose))
    }

    pub fn find_unit_by_symbol(&self, symbol: &str) -> Option<&TermRecord> {
        self.terms()
            .find(|t| t.symbol.as_deref() == Some(symbol))
            .or_else(|| {
                self.find_term_by_label(symbol)
                    .filter(|t| t.symbol.is_some())
            })
    }

    pub fn class(&self, g: &Gupri) -> Option<&ClassRecord> {
        self.classes.get(g)
    }

    pub fn classes(&self) -> impl Iterator<Item = &ClassRecord> {
        self.classes.iter().map(|v| &v.record)
    }

    pub fn schema(&self, g: &Gupri) -> Option<&SchemaRecord> {
        self.schemas.get(g)
    }

    pub fn schema_versions(&self, g: &Gupri) -> &[Versioned<SchemaRecord>] {
        self.schemas.versions(g)
    }

    pub fn metamodel(&self, g: &Gupri) -> Option<&RosettaMetamodel> {
        self.schemas.get(g).and_then(SchemaRecord::metamodel)
    }

    /// Rosetta metamodels in registration order.
    pub fn metamodels(&self) -> impl Iterator<Item = &RosettaMetamodel> {
        self.schemas.iter().filter_map(|v| v.record.metamodel())
    }

    pub fn crosswalk(&self, g: &Gupri) -> Option<&CrosswalkRecord> {
        self.crosswalks.get(g)
    }

    pub fn operation(&self, g: &Gupri) -> Option<&OperationRecord> {
        self.operations.get(g)
    }

    pub fn workflow(&self, g: &Gupri) -> Option<&WorkflowRecord> {
        self.workflows.get(g)
    }

    pub fn mapping(&self, g: &Gupri) -> Option<&MappingRecord> {
        self.mappings.get(g)
    }

    pub fn label_of(&self, g: &Gupri) -> Option<&str> {
        self.term(g)
            .map(|t| t.label.as_str())
            .or_else(|| self.class(g).map(|c| c.label.as_str()))
            .or_else(|| self.schema(g).map(|s| s.label.as_str()))
    }

    fn schema_label(&self, g: &Gupri) -> String {
        match self.schema(g) {
            Some(s) => format!("{} <{g}>", s.label),
            None => g.to_string(),
        }
    }
}

fn strip_schema_versioning(s: &SchemaRecord) -> SchemaRecord {
    let mut s = s.clone();
    s.version = 0;
    s.changelog.clear();
    if let SchemaBody::RosettaMetamodel(m) = &mut s.body {
        m.version = 0;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: &str) -> Gupri {
        Gupri::named("test", "t", n)
    }

    #[test]
    fn unknown_lookup_is_not_found() {
        let r = Registries::with_builtins();
        assert!(matches!(
            r.lookup(RegistryKind::Terms, &g("never"), None),
            Err(Error::NotFound(_))
        ));
    }

    #[test]
    fn term_round_trip_and_idempotence() {
        let mut r = Registries::new();
        let mut t = TermRecord::new(g("mass"), "mass");
        t.mappings.push(EntityMapping {
            target: g("pato-mass"),
            kind: MappingKind::Exact,
            record: g("map-1"),
        });
        let first = r.register_term(t.clone()).unwrap();
        assert_eq!(
            first,
            Registered {
                version: 1,
                created: true
            }
        );
        let again = r.register_term(t.clone()).unwrap();
        assert_eq!(
            again,
            Registered {
                version: 1,
                created: false
            }
        );
        match r
            .lookup(RegistryKind::Terms, &g("mass"), None)
            .unwrap()
            .record
        {
            AnyRecord::Term(back) => assert_eq!(back, t),
            other => panic!("{other:?}"),
        }
        let mapping = r.mapping(&g("map-1")).unwrap();
        assert_eq!(mapping.source, g("mass"));
        assert_eq!(mapping.kind, MappingKind::Exact);
    }

    #[test]
    fn external_schema_versions() {
        let mut r = Registries::new();
        let s1 = SchemaRecord::external(g("shape"), "shape", "https://example.org/v1");
        let s2 = SchemaRecord::external(g("shape"), "shape", "https://example.org/v2");
        assert_eq!(r.register_schema(s1.clone(), None).unwrap().version, 1);
        assert_eq!(r.register_schema(s2, Some("bump")).unwrap().version, 2);
        assert_eq!(r.register_schema(s1, None).unwrap().version, 3);
        let latest = r.schema(&g("shape")).unwrap();
        assert_eq!(latest.changelog.len(), 3);
        assert_eq!(latest.changelog[1].note, "bump");
        let pinned = r
            .lookup(RegistryKind::Schemas, &g("shape"), Some(2))
            .unwrap();
        assert_eq!(pinned.version, 2);
    }

    #[test]
    fn empty_workflow_rejected() {
        let mut r = Registries::new();
        let wf = WorkflowRecord {
            gupri: g("wf"),
            name: "nothing".into(),
            steps: vec![],
            bindings: vec![],
        };
        assert!(matches!(r.register_workflow(wf), Err(Error::Rejected(_))));
    }

    #[test]
    fn incompatible_steps_name_both_schemas() {
        let mut r = Registries::new();
        r.register_schema(SchemaRecord::external(g("s1"), "alpha schema", "x"), None)
            .unwrap();
        r.register_schema(SchemaRecord::external(g("s2"), "beta schema", "y"), None)
            .unwrap();
        for (name, schema) in [("a", "s1"), ("b", "s2")] {
            r.register_operation(OperationRecord {
                gupri: g(name),
                name: name.into(),
                compatible_schemas: vec![g(schema)],
                executable: BuiltinOp::Render,
                description: String::new(),
            })
            .unwrap();
        }
        let err = r
            .register_workflow(WorkflowRecord {
                gupri: g("wf"),
                name: "bad".into(),
                steps: vec![g("a"), g("b")],
                bindings: vec![],
            })
            .unwrap_err()
            .to_string();
        assert!(
            err.contains("alpha schema") && err.contains("beta schema"),
            "{err}"
        );
    }

    #[test]
    fn operations_by_schema() {
        let mut r = Registries::new();
        r.register_schema(SchemaRecord::external(g("s"), "s", "x"), None)
            .unwrap();
        assert!(r.compatible_operations(&g("s")).unwrap().is_empty());
        r.register_operation(OperationRecord {
            gupri: g("op"),
            name: "op".into(),
            compatible_schemas: vec![g("s")],
            executable: BuiltinOp::Score,
            description: String::new(),
        })
        .unwrap();
        assert_eq!(r.compatible_operations(&g("s")).unwrap(), vec![g("op")]);
        assert!(r.compatible_operations(&g("zzz")).is_err());
    }
}
