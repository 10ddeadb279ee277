//! Partitioning of quad and record collections into disjoint statement units.
//!
//! Registered class patterns are matched against the input, candidate matches
//! are claimed greedily in a fixed order, and every item no match claims
//! becomes a single-item fallback unit. The result is always an exact cover.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gupri::Gupri;
use crate::model::{
    canonicalize, ContentManifestation, Datatype, Form, GraphContent, MetaRecord, Object,
    StatementUnit, TabularRow, Timestamp, Triple,
};
use crate::par::{self, Execution};
use crate::registry::{ClassCategory, Registries};
use crate::rosetta::{RosettaMetamodel, SlotKind};
use crate::serial::parse_trig;
use crate::store::UnitStore;
use crate::vocab;

// ---- input -----------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quad {
    pub triple: Triple,
    /// Name of the graph the triple was read from, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Record {
    pub row_id: String,
    pub cells: Vec<(String, String)>,
}

impl Record {
    /// Non-empty cells, sorted. Two records with the same key are duplicates.
    fn key(&self) -> Vec<(&str, &str)> {
        let mut k: Vec<(&str, &str)> = self
            .cells
            .iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(c, v)| (c.as_str(), v.as_str()))
            .collect();
        k.sort();
        k
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "items", rename_all = "kebab-case")]
pub enum Items {
    Graph(Vec<Quad>),
    Tabular(Vec<Record>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputCollection {
    #[serde(flatten)]
    pub items: Items,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<Gupri>,
}

impl InputCollection {
    pub fn graph(triples: impl IntoIterator<Item = Triple>, origin: Option<Gupri>) -> Self {
        Self {
            items: Items::Graph(
                triples
                    .into_iter()
                    .map(|triple| Quad {
                        triple,
                        graph: None,
                    })
                    .collect(),
            ),
            origin,
        }
    }

    pub fn tabular(records: Vec<Record>, origin: Option<Gupri>) -> Self {
        Self {
            items: Items::Tabular(records),
            origin,
        }
    }

    /// Reads a CSV document with a header row. Rows are numbered `row-1`,
    /// `row-2`, ... in file order.
    pub fn from_csv(text: &str, origin: Option<Gupri>) -> Result<Self> {
        let position_error = |e: csv::Error| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::syntax(line, 0, e.to_string())
        };
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let headers: Vec<String> = reader
            .headers()
            .map_err(position_error)?
            .iter()
            .map(str::to_string)
            .collect();
        let mut seen = BTreeSet::new();
        for h in &headers {
            if h.is_empty() || !seen.insert(h) {
                return Err(Error::syntax(
                    1,
                    0,
                    format!("empty or repeated column `{h}`"),
                ));
            }
        }
        let mut records = Vec::new();
        for (i, row) in reader.records().enumerate() {
            let row = row.map_err(position_error)?;
            records.push(Record {
                row_id: format!("row-{}", i + 1),
                cells: headers
                    .iter()
                    .cloned()
                    .zip(row.iter().map(str::to_string))
                    .collect(),
            });
        }
        Ok(Self::tabular(records, origin))
    }

    /// Reads quads from a TriG document; graph names become quad tags.
    pub fn from_trig(text: &str, origin: Option<Gupri>) -> Result<Self> {
        let doc = parse_trig(text)?;
        let quads = doc
            .quads()
            .map(|(name, t)| {
                Ok(Quad {
                    triple: crate::serial::to_content_triple(t)?,
                    graph: name.map(str::to_string),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            items: Items::Graph(quads),
            origin,
        })
    }

    pub fn len(&self) -> usize {
        match &self.items {
            Items::Graph(q) => q.len(),
            Items::Tabular(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Item identities in input order: encoded triples or row ids.
    pub fn item_ids(&self) -> Vec<String> {
        match &self.items {
            Items::Graph(q) => q.iter().map(|q| q.triple.encode()).collect(),
            Items::Tabular(r) => r.iter().map(|r| r.row_id.clone()).collect(),
        }
    }

    fn check_unique(&self) -> Result<()> {
        let mut ids = BTreeSet::new();
        for id in self.item_ids() {
            if !ids.insert(id.clone()) {
                return Err(Error::Rejected(format!("duplicated input item {id}")));
            }
        }
        if let Items::Tabular(records) = &self.items {
            let mut keys = HashMap::new();
            for r in records {
                if let Some(first) = keys.insert(r.key(), &r.row_id) {
                    return Err(Error::Rejected(format!(
                        "rows {first} and {} have identical content",
                        r.row_id
                    )));
                }
            }
        }
        Ok(())
    }
}

// ---- patterns --------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SlotType {
    Resource,
    Literal { datatype: Datatype },
}

impl SlotType {
    fn admits(self, o: &Object) -> bool {
        match (self, o) {
            (SlotType::Resource, Object::Resource(_)) => true,
            (SlotType::Literal { datatype }, Object::Literal(l)) => l.datatype == datatype,
            _ => false,
        }
    }
}

/// One triple shape. Terms starting with `?` are variables, anything else
/// is a GUPRI constant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleShape {
    pub subject: String,
    pub predicate: Gupri,
    pub object: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct GraphPattern {
    /// Variable every shape is connected through.
    pub anchor: String,
    /// Variable whose binding becomes the unit's subject.
    pub subject: String,
    pub triples: Vec<TripleShape>,
    #[serde(default)]
    pub slot_types: BTreeMap<String, SlotType>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct TabularPattern {
    pub subject_column: String,
    /// Required columns, in the order the unit's row lists them.
    pub columns: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum PatternShape {
    Graph(GraphPattern),
    Tabular(TabularPattern),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ClassPattern {
    pub class_ref: Gupri,
    #[serde(default)]
    pub priority: i64,
    #[serde(flatten)]
    pub shape: PatternShape,
}

impl ClassPattern {
    pub fn size(&self) -> usize {
        match &self.shape {
            PatternShape::Graph(g) => g.triples.len(),
            PatternShape::Tabular(_) => 1,
        }
    }

    /// The pattern recognising content laid out by a metamodel's graph or
    /// tabular binding.
    pub fn from_metamodel(
        class_ref: Gupri,
        m: &RosettaMetamodel,
        form: Form,
        priority: i64,
    ) -> Result<Self> {
        let shape = match form {
            Form::Graph => {
                let node = "?node".to_string();
                let var = |name: &str| format!("?{name}");
                let mut triples = vec![
                    TripleShape {
                        subject: node.clone(),
                        predicate: vocab::STATEMENT_OF.clone(),
                        object: m.gupri.to_string(),
                    },
                    TripleShape {
                        subject: node.clone(),
                        predicate: m.graph_binding.subject_predicate.clone(),
                        object: "?subject".into(),
                    },
                ];
                let mut slot_types = BTreeMap::from([("?subject".to_string(), SlotType::Resource)]);
                for b in &m.graph_binding.slots {
                    let def = &m.slots[m.slot_index(&b.slot).expect("validated binding")];
                    let v = var(&format!("slot-{}", b.slot));
                    triples.push(TripleShape {
                        subject: node.clone(),
                        predicate: b.predicate.clone(),
                        object: v.clone(),
                    });
                    let ty = match &def.kind {
                        SlotKind::Resource => SlotType::Resource,
                        SlotKind::Literal { datatype } => SlotType::Literal {
                            datatype: *datatype,
                        },
                        SlotKind::Quantity { .. } => SlotType::Literal {
                            datatype: Datatype::Decimal,
                        },
                    };
                    slot_types.insert(v, ty);
                    if let Some(up) = &b.unit_predicate {
                        let u = var(&format!("unit-{}", b.slot));
                        triples.push(TripleShape {
                            subject: node.clone(),
                            predicate: up.clone(),
                            object: u.clone(),
                        });
                        slot_types.insert(u, SlotType::Resource);
                    }
                }
                PatternShape::Graph(GraphPattern {
                    anchor: node,
                    subject: "?subject".into(),
                    triples,
                    slot_types,
                })
            }
            Form::Tabular => PatternShape::Tabular(TabularPattern {
                subject_column: m.tabular_binding.subject_column.clone(),
                columns: m
                    .tabular_binding
                    .column_names()
                    .into_iter()
                    .map(str::to_string)
                    .collect(),
            }),
            other => {
                return Err(Error::Pattern(format!(
                    "no {other} pattern can be derived from a metamodel"
                )))
            }
        };
        Ok(Self {
            class_ref,
            priority,
            shape,
        })
    }
}

/// A file of patterns as read by the command line and the facade.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternSet {
    pub patterns: Vec<ClassPattern>,
}

#[derive(Debug, Clone)]
enum Term {
    Var(usize),
    Const(Gupri),
}

#[derive(Debug, Clone)]
struct Shape {
    s: Term,
    p: Gupri,
    o: Term,
}

#[derive(Debug, Clone)]
struct CompiledGraph {
    shapes: Vec<Shape>,
    var_count: usize,
    subject: usize,
    types: Vec<Option<SlotType>>,
}

#[derive(Debug, Clone)]
enum Compiled {
    Graph(CompiledGraph),
    Tabular {
        signature: BTreeSet<String>,
        subject: String,
        columns: Vec<String>,
    },
}

#[derive(Debug, Clone)]
struct Prepared<'a> {
    pattern: &'a ClassPattern,
    schema: Option<Gupri>,
    compiled: Compiled,
}

fn pattern_error(p: &ClassPattern, msg: impl std::fmt::Display) -> Error {
    Error::Pattern(format!("pattern for class {}: {msg}", p.class_ref))
}

fn compile_graph(p: &ClassPattern, g: &GraphPattern) -> Result<CompiledGraph> {
    if g.triples.is_empty() {
        return Err(pattern_error(p, "graph pattern has no triple shapes"));
    }
    let mut names: Vec<String> = Vec::new();
    let mut term = |t: &str| -> Result<Term> {
        if let Some(name) = t.strip_prefix('?') {
            if name.is_empty() {
                return Err(pattern_error(p, "empty variable name"));
            }
            let idx = names.iter().position(|n| n == t).unwrap_or_else(|| {
                names.push(t.to_string());
                names.len() - 1
            });
            Ok(Term::Var(idx))
        } else {
            Gupri::parse(t)
                .map(Term::Const)
                .map_err(|_| pattern_error(p, format!("`{t}` is neither a variable nor a GUPRI")))
        }
    };
    let shapes: Vec<Shape> = g
        .triples
        .iter()
        .map(|t| {
            Ok(Shape {
                s: term(&t.subject)?,
                p: t.predicate.clone(),
                o: term(&t.object)?,
            })
        })
        .collect::<Result<_>>()?;
    let find = |v: &str| names.iter().position(|n| n == v);
    let anchor = find(&g.anchor)
        .ok_or_else(|| pattern_error(p, format!("anchor {} is unused", g.anchor)))?;
    let subject = find(&g.subject)
        .ok_or_else(|| pattern_error(p, format!("subject {} is unused", g.subject)))?;
    let mut types = vec![None; names.len()];
    for (v, t) in &g.slot_types {
        let idx =
            find(v).ok_or_else(|| pattern_error(p, format!("typed variable {v} is unused")))?;
        types[idx] = Some(*t);
    }
    for s in &shapes {
        if let Term::Var(v) = s.s {
            if matches!(types[v], Some(SlotType::Literal { .. })) {
                return Err(pattern_error(
                    p,
                    format!("{} is typed literal but used as a subject", names[v]),
                ));
            }
        }
    }
    // Order shapes breadth-first from the anchor; unreachable shapes mean the
    // pattern is disconnected.
    let vars = |s: &Shape| {
        [&s.s, &s.o]
            .into_iter()
            .filter_map(|t| match t {
                Term::Var(v) => Some(*v),
                Term::Const(_) => None,
            })
            .collect::<Vec<_>>()
    };
    let mut reached = vec![false; names.len()];
    reached[anchor] = true;
    let mut order = Vec::with_capacity(shapes.len());
    let mut placed = vec![false; shapes.len()];
    loop {
        let next =
            (0..shapes.len()).find(|&i| !placed[i] && vars(&shapes[i]).iter().any(|&v| reached[v]));
        let Some(i) = next else { break };
        placed[i] = true;
        for v in vars(&shapes[i]) {
            reached[v] = true;
        }
        order.push(shapes[i].clone());
    }
    if order.len() != shapes.len() {
        return Err(pattern_error(
            p,
            "triple shapes are not connected through the anchor",
        ));
    }
    Ok(CompiledGraph {
        shapes: order,
        var_count: names.len(),
        subject,
        types,
    })
}

fn prepare<'a>(p: &'a ClassPattern, reg: &Registries) -> Result<Prepared<'a>> {
    let class = reg
        .class(&p.class_ref)
        .ok_or_else(|| Error::UnknownClass(p.class_ref.clone()))?;
    if class.category != ClassCategory::Statement {
        return Err(pattern_error(p, "class is not a statement unit class"));
    }
    let compiled = match &p.shape {
        PatternShape::Graph(g) => Compiled::Graph(compile_graph(p, g)?),
        PatternShape::Tabular(t) => {
            if class.schema.is_none() {
                return Err(pattern_error(
                    p,
                    "tabular patterns need a class with a schema",
                ));
            }
            let signature: BTreeSet<String> = t.columns.iter().cloned().collect();
            if t.columns.is_empty()
                || signature.len() != t.columns.len()
                || t.columns.iter().any(String::is_empty)
            {
                return Err(pattern_error(p, "columns must be non-empty and distinct"));
            }
            if !signature.contains(&t.subject_column) {
                return Err(pattern_error(
                    p,
                    "subject column is not among the required columns",
                ));
            }
            Compiled::Tabular {
                signature,
                subject: t.subject_column.clone(),
                columns: t.columns.clone(),
            }
        }
    };
    Ok(Prepared {
        pattern: p,
        schema: class.schema.clone(),
        compiled,
    })
}

/// Checks patterns without running them.
pub fn check_patterns(patterns: &[ClassPattern], reg: &Registries) -> Result<()> {
    patterns.iter().try_for_each(|p| prepare(p, reg).map(drop))
}

// ---- matching --------------------------------------------------------------

/// A candidate claim: pattern index, unit subject and the claimed items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Match {
    pub pattern: usize,
    pub subject: Gupri,
    /// Indices into the input, ascending.
    pub items: Vec<usize>,
}

struct GraphIndex<'a> {
    triples: Vec<&'a Triple>,
    by_pred: HashMap<&'a Gupri, Vec<usize>>,
    by_sp: HashMap<(&'a Gupri, &'a Gupri), Vec<usize>>,
}

impl<'a> GraphIndex<'a> {
    fn new(quads: &'a [Quad]) -> Self {
        let triples: Vec<&Triple> = quads.iter().map(|q| &q.triple).collect();
        let mut by_pred: HashMap<&Gupri, Vec<usize>> = HashMap::new();
        let mut by_sp: HashMap<(&Gupri, &Gupri), Vec<usize>> = HashMap::new();
        for (i, t) in triples.iter().enumerate() {
            by_pred.entry(&t.predicate).or_default().push(i);
            by_sp.entry((&t.subject, &t.predicate)).or_default().push(i);
        }
        Self {
            triples,
            by_pred,
            by_sp,
        }
    }
}

struct Search<'a, 'b> {
    g: &'b CompiledGraph,
    index: &'b GraphIndex<'a>,
    bindings: Vec<Option<Object>>,
    used: Vec<usize>,
    found: Vec<(Vec<usize>, Gupri)>,
}

impl Search<'_, '_> {
    fn bind(&mut self, t: &Term, value: &Object, undo: &mut Vec<usize>) -> bool {
        match t {
            Term::Const(c) => matches!(value, Object::Resource(r) if r == c),
            Term::Var(v) => match &self.bindings[*v] {
                Some(b) => b == value,
                None => {
                    if self.g.types[*v].is_some_and(|ty| !ty.admits(value)) {
                        return false;
                    }
                    self.bindings[*v] = Some(value.clone());
                    undo.push(*v);
                    true
                }
            },
        }
    }

    fn candidates(&self, shape: &Shape) -> Vec<usize> {
        let subject = match &shape.s {
            Term::Const(c) => Some(c),
            Term::Var(v) => match &self.bindings[*v] {
                Some(Object::Resource(r)) => Some(r),
                Some(Object::Literal(_)) => return Vec::new(),
                None => None,
            },
        };
        let hit = match subject {
            Some(s) => self.index.by_sp.get(&(s, &shape.p)),
            None => self.index.by_pred.get(&shape.p),
        };
        hit.cloned().unwrap_or_default()
    }

    fn run(&mut self, depth: usize, first: Option<usize>) {
        if depth == self.g.shapes.len() {
            if let Some(Object::Resource(s)) = &self.bindings[self.g.subject] {
                let mut items = self.used.clone();
                items.sort_unstable();
                self.found.push((items, s.clone()));
            }
            return;
        }
        let shape = self.g.shapes[depth].clone();
        let cands: Vec<usize> = match first {
            Some(i) => vec![i],
            None => self.candidates(&shape),
        };
        for i in cands {
            if self.used.contains(&i) {
                continue;
            }
            let t = self.index.triples[i];
            if t.predicate != shape.p {
                continue;
            }
            let mut undo = Vec::new();
            if self.bind(&shape.s, &Object::Resource(t.subject.clone()), &mut undo)
                && self.bind(&shape.o, &t.object, &mut undo)
            {
                self.used.push(i);
                self.run(depth + 1, None);
                self.used.pop();
            }
            for v in undo {
                self.bindings[v] = None;
            }
        }
    }
}

fn graph_matches(
    pi: usize,
    g: &CompiledGraph,
    index: &GraphIndex<'_>,
    exec: Execution,
) -> Vec<Match> {
    let roots: Vec<usize> = index
        .by_pred
        .get(&g.shapes[0].p)
        .cloned()
        .unwrap_or_default();
    let raw = par::flat_map(exec, &roots, |&root| {
        let mut s = Search {
            g,
            index,
            bindings: vec![None; g.var_count],
            used: Vec::new(),
            found: Vec::new(),
        };
        s.run(0, Some(root));
        s.found
    });
    // Several bindings may claim the same triple set; keep one match per set
    // with the smallest subject.
    let mut best: BTreeMap<Vec<usize>, Gupri> = BTreeMap::new();
    for (items, subject) in raw {
        best.entry(items)
            .and_modify(|s| {
                if subject < *s {
                    *s = subject.clone()
                }
            })
            .or_insert(subject);
    }
    best.into_iter()
        .map(|(items, subject)| Match {
            pattern: pi,
            subject,
            items,
        })
        .collect()
}

fn tabular_matches(
    pi: usize,
    signature: &BTreeSet<String>,
    subject: &str,
    records: &[Record],
) -> Vec<Match> {
    records
        .iter()
        .enumerate()
        .filter_map(|(i, r)| {
            let present: BTreeSet<&String> = r
                .cells
                .iter()
                .filter(|(_, v)| !v.is_empty())
                .map(|(c, _)| c)
                .collect();
            if present.len() != signature.len() || !signature.iter().all(|c| present.contains(c)) {
                return None;
            }
            let cell = r.cells.iter().find(|(c, _)| c == subject).map(|(_, v)| v)?;
            Gupri::parse(cell).ok().map(|subject| Match {
                pattern: pi,
                subject,
                items: vec![i],
            })
        })
        .collect()
}

/// Every candidate match of every pattern, before any claiming.
pub fn find_matches(
    input: &InputCollection,
    patterns: &[ClassPattern],
    reg: &Registries,
) -> Result<Vec<Match>> {
    find_matches_with(input, patterns, reg, Execution::default())
}

pub fn find_matches_with(
    input: &InputCollection,
    patterns: &[ClassPattern],
    reg: &Registries,
    exec: Execution,
) -> Result<Vec<Match>> {
    let prepared = patterns
        .iter()
        .map(|p| prepare(p, reg))
        .collect::<Result<Vec<_>>>()?;
    Ok(raw_matches(input, &prepared, exec))
}

fn raw_matches(input: &InputCollection, prepared: &[Prepared<'_>], exec: Execution) -> Vec<Match> {
    let mut out = Vec::new();
    match &input.items {
        Items::Graph(quads) => {
            let index = GraphIndex::new(quads);
            for (pi, p) in prepared.iter().enumerate() {
                if let Compiled::Graph(g) = &p.compiled {
                    out.extend(graph_matches(pi, g, &index, exec));
                }
            }
        }
        Items::Tabular(records) => {
            for (pi, p) in prepared.iter().enumerate() {
                if let Compiled::Tabular {
                    signature, subject, ..
                } = &p.compiled
                {
                    out.extend(tabular_matches(pi, signature, subject, records));
                }
            }
        }
    }
    out
}

/// Claim order: priority descending, pattern size descending, subject
/// GUPRI, sorted item ids, pattern index.
pub fn claim_key<'a>(
    m: &'a Match,
    patterns: &[ClassPattern],
    ids: &'a [String],
) -> (Reverse<i64>, Reverse<usize>, &'a str, Vec<&'a str>, usize) {
    let p = &patterns[m.pattern];
    let mut item_ids: Vec<&str> = m.items.iter().map(|&i| ids[i].as_str()).collect();
    item_ids.sort_unstable();
    (
        Reverse(p.priority),
        Reverse(p.size()),
        m.subject.as_str(),
        item_ids,
        m.pattern,
    )
}

// ---- partition -------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Assignment {
    pub item: String,
    pub unit: Gupri,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionResult {
    pub units: Vec<StatementUnit>,
    /// One entry per input item, sorted by item id.
    pub assignment: Vec<Assignment>,
    pub orphans: Vec<Gupri>,
}

impl PartitionResult {
    pub fn unit_of(&self, item: &str) -> Option<&Gupri> {
        self.assignment
            .binary_search_by(|a| a.item.as_str().cmp(item))
            .ok()
            .map(|i| &self.assignment[i].unit)
    }
}

#[derive(Debug, Clone)]
pub struct PartitionConfig {
    /// Meta record copied into every produced unit; the schema is filled in
    /// from the class.
    pub meta: MetaRecord,
    pub execution: Execution,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        Self {
            meta: MetaRecord::new(vocab::SYSTEM_AGENT.clone(), Timestamp::from_unix(0)),
            execution: Execution::default(),
        }
    }
}

pub fn partition(
    input: &InputCollection,
    patterns: &[ClassPattern],
    store: &UnitStore,
) -> Result<PartitionResult> {
    partition_with(input, patterns, store, &PartitionConfig::default())
}

pub fn partition_with(
    input: &InputCollection,
    patterns: &[ClassPattern],
    store: &UnitStore,
    config: &PartitionConfig,
) -> Result<PartitionResult> {
    input.check_unique()?;
    let reg = store.registries();
    let prepared = patterns
        .iter()
        .map(|p| prepare(p, reg))
        .collect::<Result<Vec<_>>>()?;
    let exec = config.execution;
    let ids = input.item_ids();

    // Candidates whose content the class schema rejects cannot be claimed.
    let candidates = raw_matches(input, &prepared, exec);
    let built = par::map(exec, &candidates, |m| {
        build_matched(m, input, &prepared, store, config).ok()
    });
    let mut admissible: Vec<(Match, StatementUnit)> = candidates
        .into_iter()
        .zip(built)
        .filter_map(|(m, u)| Some((m, u?)))
        .collect();
    admissible
        .sort_by(|(a, _), (b, _)| claim_key(a, patterns, &ids).cmp(&claim_key(b, patterns, &ids)));

    let mut claimed = vec![false; ids.len()];
    let mut units = Vec::new();
    let mut assignment = Vec::with_capacity(ids.len());
    for (m, unit) in admissible {
        if m.items.iter().any(|&i| claimed[i]) {
            continue;
        }
        for &i in &m.items {
            claimed[i] = true;
            assignment.push(Assignment {
                item: ids[i].clone(),
                unit: unit.gupri.clone(),
            });
        }
        units.push(unit);
    }

    let leftovers: Vec<usize> = (0..ids.len()).filter(|&i| !claimed[i]).collect();
    let orphans = par::try_map(exec, &leftovers, |&i| build_orphan(i, input, store, config))?;
    let mut orphan_gupris = Vec::with_capacity(orphans.len());
    for (&i, unit) in leftovers.iter().zip(orphans) {
        assignment.push(Assignment {
            item: ids[i].clone(),
            unit: unit.gupri.clone(),
        });
        orphan_gupris.push(unit.gupri.clone());
        units.push(unit);
    }
    assignment.sort();
    Ok(PartitionResult {
        units,
        assignment,
        orphans: orphan_gupris,
    })
}

fn unit_meta(
    config: &PartitionConfig,
    input: &InputCollection,
    schema: Option<Gupri>,
) -> MetaRecord {
    let mut meta = config.meta.clone();
    meta.schema_ref = schema;
    if let Some(origin) = &input.origin {
        meta.extra.insert("origin".into(), origin.to_string());
    }
    meta
}

fn build_matched(
    m: &Match,
    input: &InputCollection,
    prepared: &[Prepared<'_>],
    store: &UnitStore,
    config: &PartitionConfig,
) -> Result<StatementUnit> {
    let p = &prepared[m.pattern];
    let content = match (&input.items, &p.compiled) {
        (Items::Graph(quads), Compiled::Graph(_)) => ContentManifestation::Graph(
            GraphContent::new(m.items.iter().map(|&i| quads[i].triple.clone())),
        ),
        (Items::Tabular(records), Compiled::Tabular { columns, .. }) => {
            let r = &records[m.items[0]];
            let cells = columns
                .iter()
                .map(|c| {
                    let v = r
                        .cells
                        .iter()
                        .find(|(k, _)| k == c)
                        .map(|(_, v)| v.clone())
                        .unwrap_or_default();
                    (c.clone(), v)
                })
                .collect();
            ContentManifestation::Tabular(TabularRow {
                schema: p.schema.clone().expect("checked in prepare"),
                cells,
            })
        }
        _ => unreachable!("matches only come from patterns of the input's kind"),
    };
    store.make_statement_unit(
        &p.pattern.class_ref,
        &m.subject,
        content,
        unit_meta(config, input, p.schema.clone()),
    )
}

fn build_orphan(
    i: usize,
    input: &InputCollection,
    store: &UnitStore,
    config: &PartitionConfig,
) -> Result<StatementUnit> {
    let (content, subject, schema) = match &input.items {
        Items::Graph(quads) => {
            let t = &quads[i].triple;
            (
                ContentManifestation::Graph(GraphContent::new([t.clone()])),
                t.subject.clone(),
                vocab::ORPHAN_GRAPH_SCHEMA.clone(),
            )
        }
        Items::Tabular(records) => {
            let row = ContentManifestation::Tabular(TabularRow {
                schema: vocab::ORPHAN_ROW_SCHEMA.clone(),
                cells: records[i].cells.clone(),
            });
            let subject = Gupri::from_content(store.authority(), &canonicalize(&row)?)?;
            (row, subject, vocab::ORPHAN_ROW_SCHEMA.clone())
        }
    };
    let mut meta = unit_meta(config, input, Some(schema));
    meta.extra.insert("boundary".into(), "fiat".into());
    store.make_statement_unit(&vocab::ORPHAN_STATEMENT_CLASS, &subject, content, meta)
}

// ---- verification ----------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "code", rename_all = "kebab-case")]
pub enum PartitionIssue {
    /// An input item no unit is assigned.
    Unassigned { item: String },
    /// An item assigned, or contained, more than once.
    MultiplyAssigned { item: String, units: Vec<Gupri> },
    /// An assignment entry for something that is not an input item.
    UnknownItem { item: String },
    /// An assignment pointing at a unit the result does not contain.
    UnknownUnit { item: String, unit: Gupri },
    /// A unit whose content differs from the items assigned to it.
    ContentMismatch {
        unit: Gupri,
        content: Vec<String>,
        assigned: Vec<String>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub items: usize,
    pub units: usize,
    pub counterexamples: Vec<PartitionIssue>,
}

impl PartitionReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Item ids a unit's canonical content covers, or `None` if the content
/// names something that is not in the input.
fn content_items(
    unit: &StatementUnit,
    row_keys: &HashMap<Vec<(&str, &str)>, &str>,
) -> Option<Vec<String>> {
    let mut out = match unit.canonical() {
        ContentManifestation::Graph(g) => g.triples.iter().map(Triple::encode).collect(),
        ContentManifestation::Tabular(row) => {
            let r = Record {
                row_id: String::new(),
                cells: row.cells.clone(),
            };
            vec![row_keys.get(&r.key())?.to_string()]
        }
        _ => return None,
    };
    out.sort();
    Some(out)
}

/// Checks totality, single-valuedness and that each unit's content is
/// exactly the set of items assigned to it.
pub fn verify_partition(result: &PartitionResult, input: &InputCollection) -> PartitionReport {
    let ids = input.item_ids();
    let known: BTreeSet<&str> = ids.iter().map(String::as_str).collect();
    let mut report = PartitionReport {
        items: ids.len(),
        units: result.units.len(),
        counterexamples: Vec::new(),
    };
    let units: BTreeMap<&Gupri, &StatementUnit> =
        result.units.iter().map(|u| (&u.gupri, u)).collect();

    let mut by_item: BTreeMap<&str, Vec<Gupri>> = BTreeMap::new();
    let mut preimage: BTreeMap<&Gupri, Vec<String>> = BTreeMap::new();
    for a in &result.assignment {
        by_item
            .entry(a.item.as_str())
            .or_default()
            .push(a.unit.clone());
        if !known.contains(a.item.as_str()) {
            report.counterexamples.push(PartitionIssue::UnknownItem {
                item: a.item.clone(),
            });
        }
        if !units.contains_key(&a.unit) {
            report.counterexamples.push(PartitionIssue::UnknownUnit {
                item: a.item.clone(),
                unit: a.unit.clone(),
            });
        }
        preimage.entry(&a.unit).or_default().push(a.item.clone());
    }
    for id in &ids {
        if !by_item.contains_key(id.as_str()) {
            report
                .counterexamples
                .push(PartitionIssue::Unassigned { item: id.clone() });
        }
    }

    let records: &[Record] = match &input.items {
        Items::Tabular(r) => r,
        Items::Graph(_) => &[],
    };
    let row_keys: HashMap<Vec<(&str, &str)>, &str> = records
        .iter()
        .map(|r| (r.key(), r.row_id.as_str()))
        .collect();
    let mut contained: BTreeMap<String, Vec<Gupri>> = BTreeMap::new();
    for u in &result.units {
        let content = content_items(u, &row_keys);
        for item in content.iter().flatten() {
            contained
                .entry(item.clone())
                .or_default()
                .push(u.gupri.clone());
        }
        let mut assigned = preimage.get(&u.gupri).cloned().unwrap_or_default();
        assigned.sort();
        if content.as_ref() != Some(&assigned) {
            report
                .counterexamples
                .push(PartitionIssue::ContentMismatch {
                    unit: u.gupri.clone(),
                    content: content.unwrap_or_default(),
                    assigned,
                });
        }
    }
    let mut multiple: BTreeMap<String, BTreeSet<Gupri>> = BTreeMap::new();
    for (item, us) in by_item
        .iter()
        .map(|(i, u)| (i.to_string(), u))
        .chain(contained.iter().map(|(i, u)| (i.clone(), u)))
    {
        if us.len() > 1 {
            multiple.entry(item).or_default().extend(us.iter().cloned());
        }
    }
    for (item, us) in multiple {
        report
            .counterexamples
            .push(PartitionIssue::MultiplyAssigned {
                item,
                units: us.into_iter().collect(),
            });
    }
    report
}
