//! RO-Crate packaging: a directory with `ro-crate-metadata.json` (JSON-LD)
//! plus payload files for each content manifestation.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use super::trig::{
    from_content_triple, parse_trig, to_content_triple, write_trig, NamedGraph, TrigDocument,
};
use crate::error::{Error, Result};
use crate::gupri::Gupri;
use crate::model::{
    canonicalize, decode_canonical, ArgumentRole, CompoundKind, CompoundUnit, ContentManifestation,
    Form, Frame, GraphContent, License, LogicalFramework, Member, MetaRecord, SourceRef,
    StatementUnit, TabularRow, TextSnippet, Timestamp, Typology, Unit,
};

pub const METADATA_FILE: &str = "ro-crate-metadata.json";
const CONTEXT: &str = "https://w3id.org/ro/crate/1.1/context";
const SU: &str = "https://w3id.org/semunit/vocab#";

/// An RO-Crate held in memory: root directory name and relative file paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrateTree {
    pub root: String,
    pub files: BTreeMap<String, Vec<u8>>,
}

impl CrateTree {
    pub fn metadata(&self) -> Result<Value> {
        let bytes = self.files.get(METADATA_FILE).ok_or_else(|| {
            Error::syntax(
                0,
                0,
                format!("crate `{}` has no {METADATA_FILE}", self.root),
            )
        })?;
        serde_json::from_slice(bytes)
            .map_err(|e| Error::syntax(e.line(), e.column(), e.to_string()))
    }

    /// Writes the crate under `parent/<root>/` and returns that path.
    pub fn write_to(&self, parent: &Path) -> Result<std::path::PathBuf> {
        let dir = parent.join(&self.root);
        fs::create_dir_all(&dir)?;
        for (name, bytes) in &self.files {
            fs::write(dir.join(name), bytes)?;
        }
        Ok(dir)
    }

    /// Reads every regular file directly inside `dir`.
    pub fn read_from(dir: &Path) -> Result<Self> {
        let root = dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mut files = BTreeMap::new();
        for entry in fs::read_dir(dir)? {
            let entry = entry?;
            if entry.file_type()?.is_file() {
                files.insert(
                    entry.file_name().to_string_lossy().into_owned(),
                    fs::read(entry.path())?,
                );
            }
        }
        Ok(Self { root, files })
    }
}

fn id(g: &Gupri) -> Value {
    json!({ "@id": g.as_str() })
}

fn payload_name(form: Form) -> &'static str {
    match form {
        Form::TextSnippet => "content.txt",
        Form::Rosetta => "content.rosetta",
        Form::Graph => "content.trig",
        Form::Tabular => "row.csv",
    }
}

fn encoding(form: Form) -> &'static str {
    match form {
        Form::TextSnippet | Form::Rosetta => "text/plain",
        Form::Graph => "application/trig",
        Form::Tabular => "text/csv",
    }
}

fn row_csv(row: &TabularRow) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    w.write_record(row.cells.iter().map(|(c, _)| c))?;
    w.write_record(row.cells.iter().map(|(_, v)| v))?;
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn read_row_csv(bytes: &[u8], schema: Gupri) -> Result<TabularRow> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(bytes);
    let headers: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let mut records = r.records();
    let record = records
        .next()
        .ok_or_else(|| Error::FormatViolation("row.csv has no data row".into()))??;
    if records.next().is_some() {
        return Err(Error::FormatViolation(
            "row.csv holds more than one row".into(),
        ));
    }
    Ok(TabularRow {
        schema,
        cells: headers
            .into_iter()
            .zip(record.iter().map(str::to_string))
            .collect(),
    })
}

fn meta_properties(meta: &MetaRecord, out: &mut Map<String, Value>) -> Result<()> {
    if let Some(c) = &meta.creator {
        out.insert("creator".into(), id(c));
    }
    if let Some(a) = &meta.author {
        out.insert("author".into(), id(a));
    }
    out.insert("dateCreated".into(), json!(meta.created_at.to_string()));
    match &meta.license {
        Some(License::Gupri(g)) => {
            out.insert("license".into(), id(g));
        }
        Some(License::Token(t)) => {
            out.insert("license".into(), json!(t));
        }
        None => {}
    }
    if let Some(f) = &meta.logical_framework {
        out.insert("su:logicalFramework".into(), json!(f.token()));
    }
    if let Some(s) = &meta.schema_ref {
        out.insert("su:schema".into(), id(s));
    }
    if let Some(t) = meta.statement_typology {
        out.insert("su:statementTypology".into(), json!(t.token()));
    }
    if !meta.source_refs.is_empty() {
        out.insert(
            "su:sourceRefs".into(),
            Value::Array(meta.source_refs.iter().map(id).collect()),
        );
    }
    if !meta.extra.is_empty() {
        out.insert(
            "su:extra".into(),
            json!({ "@type": "@json", "@value": meta.extra }),
        );
    }
    Ok(())
}

/// Packages a unit. `rendering` is the human-readable label stored with it.
pub fn to_crate(unit: &Unit, rendering: &str) -> Result<CrateTree> {
    let g = unit.gupri();
    let mut files = BTreeMap::new();
    let mut parts = Vec::new();
    let mut file_entities = Vec::new();
    let mut entity = Map::new();
    entity.insert("@id".into(), json!(g.as_str()));
    entity.insert("name".into(), json!(rendering));
    entity.insert("su:rendering".into(), json!(rendering));
    entity.insert("su:instanceOf".into(), id(unit.class_ref()));
    meta_properties(unit.meta(), &mut entity)?;

    match unit {
        Unit::Statement(s) => {
            entity.insert("@type".into(), json!("su:StatementUnit"));
            entity.insert("su:hasSubject".into(), id(&s.subject_ref));
            entity.insert("su:typology".into(), json!(s.typology.token()));
            entity.insert("su:canonicalForm".into(), json!(s.canonical_form.tag()));
            for (form, m) in &s.manifestations {
                let name = payload_name(*form);
                let mut fe = Map::new();
                fe.insert("@id".into(), json!(name));
                fe.insert("@type".into(), json!("File"));
                fe.insert("encodingFormat".into(), json!(encoding(*form)));
                fe.insert("su:form".into(), json!(form.tag()));
                fe.insert("about".into(), json!({ "@id": g.as_str() }));
                let bytes = match m {
                    ContentManifestation::TextSnippet(t) => {
                        fe.insert("inLanguage".into(), json!(t.language));
                        if let Some(src) = &t.source {
                            fe.insert(
                                "su:source".into(),
                                json!({ "@id": src.document.as_str(), "su:start": src.start, "su:end": src.end }),
                            );
                        }
                        if let Some(e) = &t.embedding {
                            fe.insert("su:embedding".into(), json!(e));
                        }
                        t.text.clone().into_bytes()
                    }
                    ContentManifestation::Rosetta(_) => canonicalize(m)?,
                    ContentManifestation::Graph(gc) => write_trig(&TrigDocument {
                        graphs: vec![NamedGraph {
                            name: None,
                            triples: gc.triples.iter().map(from_content_triple).collect(),
                        }],
                    })
                    .into_bytes(),
                    ContentManifestation::Tabular(row) => {
                        fe.insert("su:rowSchema".into(), id(&row.schema));
                        row_csv(row)?
                    }
                };
                files.insert(name.to_string(), bytes);
                parts.push(json!({ "@id": name }));
                file_entities.push(Value::Object(fe));
            }
        }
        Unit::Compound(c) => {
            entity.insert("@type".into(), json!("su:CompoundUnit"));
            entity.insert("su:compoundKind".into(), json!(c.kind.token()));
            if let Some(f) = c.frame {
                entity.insert("su:frame".into(), json!(f.token()));
            }
            if let Some(k) = &c.criterion_ref {
                entity.insert("su:criterion".into(), id(k));
            }
            let members: Vec<Value> = c
                .members
                .iter()
                .map(|m| match m.role {
                    Some(r) => json!({ "@id": m.gupri.as_str(), "su:memberRole": r.token() }),
                    None => id(&m.gupri),
                })
                .collect();
            entity.insert("su:hasMember".into(), json!({ "@list": members }));
        }
    }

    let mut root = Map::new();
    root.insert("@id".into(), json!("./"));
    root.insert("@type".into(), json!("Dataset"));
    root.insert("name".into(), json!(rendering));
    root.insert("description".into(), json!(rendering));
    root.insert(
        "datePublished".into(),
        json!(unit.meta().created_at.to_string()),
    );
    if let Some(l) = &unit.meta().license {
        root.insert("license".into(), json!(l.to_string()));
    }
    root.insert("hasPart".into(), Value::Array(parts));
    root.insert("mainEntity".into(), id(g));

    let mut graph = vec![
        json!({
            "@id": METADATA_FILE,
            "@type": "CreativeWork",
            "conformsTo": { "@id": "https://w3id.org/ro/crate/1.1" },
            "about": { "@id": "./" }
        }),
        Value::Object(root),
    ];
    graph.extend(file_entities);
    graph.push(Value::Object(entity));
    let doc = json!({ "@context": [CONTEXT, { "su": SU }], "@graph": graph });
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    files.insert(METADATA_FILE.to_string(), text.into_bytes());
    let local = g.local();
    Ok(CrateTree {
        root: format!("semunit-{}", &local[..local.len().min(16)]),
        files,
    })
}

fn fv(msg: impl Into<String>) -> Error {
    Error::FormatViolation(msg.into())
}

fn str_of<'a>(v: &'a Map<String, Value>, key: &str) -> Result<Option<&'a str>> {
    match v.get(key) {
        None => Ok(None),
        Some(Value::String(s)) => Ok(Some(s)),
        Some(_) => Err(fv(format!("`{key}` must be a string"))),
    }
}

fn id_of(v: &Value) -> Result<Gupri> {
    v.get("@id")
        .and_then(Value::as_str)
        .ok_or_else(|| fv("expected an {\"@id\": ...} reference"))
        .and_then(Gupri::parse)
}

fn gupri_of(v: &Map<String, Value>, key: &str) -> Result<Option<Gupri>> {
    v.get(key).map(id_of).transpose()
}

fn read_meta(e: &Map<String, Value>) -> Result<MetaRecord> {
    let created = str_of(e, "dateCreated")?.ok_or_else(|| fv("unit entity lacks dateCreated"))?;
    Ok(MetaRecord {
        creator: gupri_of(e, "creator")?,
        author: gupri_of(e, "author")?,
        created_at: Timestamp::parse(created)?,
        license: match e.get("license") {
            Some(Value::String(t)) => Some(License::Token(t.clone())),
            Some(v) => Some(License::Gupri(id_of(v)?)),
            None => None,
        },
        logical_framework: str_of(e, "su:logicalFramework")?
            .map(LogicalFramework::parse)
            .transpose()?,
        schema_ref: gupri_of(e, "su:schema")?,
        statement_typology: str_of(e, "su:statementTypology")?
            .map(Typology::parse)
            .transpose()?,
        source_refs: match e.get("su:sourceRefs") {
            Some(Value::Array(a)) => a.iter().map(id_of).collect::<Result<_>>()?,
            Some(_) => return Err(fv("su:sourceRefs must be a list")),
            None => Vec::new(),
        },
        extra: match e.get("su:extra") {
            Some(v) => serde_json::from_value(v.get("@value").cloned().unwrap_or(Value::Null))?,
            None => BTreeMap::new(),
        },
    })
}

/// Rebuilds the unit a crate packages. A missing metadata file is a syntax
/// error; files not listed in the metadata are a format violation.
pub fn from_crate(tree: &CrateTree) -> Result<Unit> {
    let doc = tree.metadata()?;
    let graph = doc
        .get("@graph")
        .and_then(Value::as_array)
        .ok_or_else(|| fv("metadata has no @graph"))?;
    let by_id: BTreeMap<&str, &Map<String, Value>> = graph
        .iter()
        .filter_map(|e| Some((e.get("@id")?.as_str()?, e.as_object()?)))
        .collect();
    let descriptor = by_id
        .get(METADATA_FILE)
        .ok_or_else(|| fv("metadata lacks its own descriptor entity"))?;
    if descriptor.get("about").map(id_of_str) != Some(Some("./")) {
        return Err(fv("metadata descriptor is not about the root dataset"));
    }
    let root = by_id
        .get("./")
        .ok_or_else(|| fv("metadata lacks the root dataset"))?;
    let parts: Vec<&str> = match root.get("hasPart") {
        Some(Value::Array(a)) => a.iter().filter_map(id_of_str).collect(),
        _ => Vec::new(),
    };
    for name in tree.files.keys() {
        if name != METADATA_FILE && !parts.contains(&name.as_str()) {
            return Err(fv(format!(
                "payload file `{name}` is not listed in the metadata"
            )));
        }
    }
    let main = root
        .get("mainEntity")
        .ok_or_else(|| fv("root dataset lacks mainEntity"))?;
    let g = id_of(main)?;
    let e = by_id
        .get(g.as_str())
        .ok_or_else(|| fv("main entity is not described"))?;
    if str_of(e, "su:rendering")?.is_none_or(str::is_empty) {
        return Err(fv("unit entity lacks a rendering"));
    }
    let meta = read_meta(e)?;
    let class_ref =
        gupri_of(e, "su:instanceOf")?.ok_or_else(|| fv("unit entity lacks su:instanceOf"))?;

    match str_of(e, "@type")? {
        Some("su:CompoundUnit") => {
            let list = e
                .get("su:hasMember")
                .and_then(|v| v.get("@list"))
                .and_then(Value::as_array)
                .ok_or_else(|| fv("compound entity lacks su:hasMember list"))?;
            let members = list
                .iter()
                .map(|m| {
                    let role = m
                        .get("su:memberRole")
                        .and_then(Value::as_str)
                        .map(ArgumentRole::parse)
                        .transpose()?;
                    Ok(Member {
                        gupri: id_of(m)?,
                        role,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Unit::Compound(CompoundUnit {
                gupri: g,
                class_ref,
                kind: CompoundKind::parse(
                    str_of(e, "su:compoundKind")?.ok_or_else(|| fv("missing kind"))?,
                )?,
                members,
                frame: str_of(e, "su:frame")?.map(Frame::parse).transpose()?,
                criterion_ref: gupri_of(e, "su:criterion")?,
                meta,
            }))
        }
        Some("su:StatementUnit") => {
            let mut manifestations = BTreeMap::new();
            for name in &parts {
                let fe = by_id
                    .get(name)
                    .ok_or_else(|| fv(format!("`{name}` is not described")))?;
                let bytes = tree
                    .files
                    .get(*name)
                    .ok_or_else(|| fv(format!("listed file `{name}` is missing")))?;
                let form = str_of(fe, "su:form")?
                    .and_then(Form::from_tag)
                    .ok_or_else(|| fv(format!("`{name}` has no content form")))?;
                let text =
                    std::str::from_utf8(bytes).map_err(|_| fv(format!("`{name}` is not UTF-8")))?;
                let m = match form {
                    Form::TextSnippet => ContentManifestation::TextSnippet(TextSnippet {
                        text: text.to_string(),
                        language: str_of(fe, "inLanguage")?.unwrap_or_default().to_string(),
                        source: match fe.get("su:source") {
                            Some(v) => Some(SourceRef {
                                document: id_of(v)?,
                                start: v
                                    .get("su:start")
                                    .and_then(Value::as_u64)
                                    .ok_or_else(|| fv("bad start"))?,
                                end: v
                                    .get("su:end")
                                    .and_then(Value::as_u64)
                                    .ok_or_else(|| fv("bad end"))?,
                            }),
                            None => None,
                        },
                        embedding: str_of(fe, "su:embedding")?.map(str::to_string),
                    }),
                    Form::Rosetta => decode_canonical(bytes)?,
                    Form::Graph => {
                        let doc = parse_trig(text)?;
                        let triples = doc
                            .quads()
                            .map(|(_, t)| to_content_triple(t))
                            .collect::<Result<Vec<_>>>()?;
                        ContentManifestation::Graph(GraphContent::new(triples))
                    }
                    Form::Tabular => {
                        let schema = gupri_of(fe, "su:rowSchema")?
                            .ok_or_else(|| fv("row.csv lacks su:rowSchema"))?;
                        ContentManifestation::Tabular(read_row_csv(bytes, schema)?)
                    }
                };
                manifestations.insert(form, m);
            }
            let canonical_form = str_of(e, "su:canonicalForm")?
                .and_then(Form::from_tag)
                .ok_or_else(|| fv("unit entity lacks su:canonicalForm"))?;
            if !manifestations.contains_key(&canonical_form) {
                return Err(fv(format!(
                    "canonical form {canonical_form} has no payload file"
                )));
            }
            Ok(Unit::Statement(StatementUnit {
                gupri: g,
                class_ref,
                subject_ref: gupri_of(e, "su:hasSubject")?
                    .ok_or_else(|| fv("unit entity lacks su:hasSubject"))?,
                typology: Typology::parse(
                    str_of(e, "su:typology")?.ok_or_else(|| fv("missing typology"))?,
                )?,
                manifestations,
                canonical_form,
                meta,
            }))
        }
        _ => Err(fv("main entity is neither a statement nor a compound unit")),
    }
}

fn id_of_str(v: &Value) -> Option<&str> {
    v.get("@id").and_then(Value::as_str)
}
