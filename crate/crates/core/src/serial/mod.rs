//! FDO serializations: nanopublications, nested nanopublications, RO-Crates
//! and the canonical JSON form, plus whole-store export.

mod nanopub;
mod rocrate;
mod store_io;
mod trig;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use nanopub::{nested_nanopub, read_nanopub, statement_nanopub, GraphPart, NanopubDocument};
pub use rocrate::{from_crate, to_crate, CrateTree, METADATA_FILE};
pub use store_io::{export_store, import_store, MANIFEST_FILE};
pub use trig::{
    from_content_triple, parse_trig, to_content_triple, write_trig, NamedGraph, RdfTriple, Term,
    TrigDocument, PREFIXES,
};

use crate::error::{Error, Result};
use crate::gupri::Gupri;
use crate::model::Unit;
use crate::store::UnitStore;
use crate::views::unit_label;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Nanopub,
    NestedNanopub,
    Rocrate,
    Canonical,
}

impl Format {
    pub const ALL: [Format; 4] = [
        Format::Nanopub,
        Format::NestedNanopub,
        Format::Rocrate,
        Format::Canonical,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Format::Nanopub => "nanopub",
            Format::NestedNanopub => "nested-nanopub",
            Format::Rocrate => "rocrate",
            Format::Canonical => "canonical",
        }
    }

    pub fn parse(token: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.token() == token)
            .ok_or_else(|| Error::NotFound(format!("serialization format `{token}`")))
    }

    /// Whether the format can carry this kind of unit.
    pub fn accepts(self, unit: &Unit) -> bool {
        match self {
            Format::Nanopub => unit.is_statement(),
            Format::NestedNanopub => !unit.is_statement(),
            Format::Rocrate | Format::Canonical => true,
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// A serialized unit: TriG or JSON text, or an RO-Crate directory tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Text(String),
    Tree(CrateTree),
}

impl Document {
    pub fn as_text(&self) -> Option<&str> {
        match self {
            Document::Text(t) => Some(t),
            Document::Tree(_) => None,
        }
    }

    pub fn as_tree(&self) -> Option<&CrateTree> {
        match self {
            Document::Tree(t) => Some(t),
            Document::Text(_) => None,
        }
    }
}

/// A deserialized unit together with every GUPRI it mentions outside itself.
/// These may not resolve in the receiving store.
#[derive(Debug, Clone, PartialEq)]
pub struct Deserialized {
    pub unit: Unit,
    pub references: BTreeSet<Gupri>,
}

/// The tree-structured document form of any value: pretty JSON with a
/// trailing newline. Every facade body and porcelain output uses it.
pub fn to_document<T: serde::Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

pub fn serialize(unit: &Unit, format: Format, store: &UnitStore) -> Result<Document> {
    if !format.accepts(unit) {
        let kind = if unit.is_statement() {
            "statement"
        } else {
            "compound"
        };
        return Err(Error::Kind(format!("{format} cannot carry a {kind} unit")));
    }
    Ok(match (format, unit) {
        (Format::Nanopub, Unit::Statement(s)) => {
            Document::Text(write_trig(&statement_nanopub(s, store)?.to_trig()))
        }
        (Format::NestedNanopub, Unit::Compound(c)) => {
            Document::Text(write_trig(&nested_nanopub(c)?.to_trig()))
        }
        (Format::Rocrate, u) => Document::Tree(to_crate(u, &unit_label(u, store))?),
        (Format::Canonical, u) => Document::Text(to_document(u)?),
        _ => unreachable!("format acceptance checked above"),
    })
}

pub fn deserialize(doc: &Document, format: Format) -> Result<Deserialized> {
    let unit = match (format, doc) {
        (Format::Nanopub | Format::NestedNanopub, Document::Text(t)) => {
            let np = NanopubDocument::from_trig(&parse_trig(t)?)?;
            if np.is_nested() != (format == Format::NestedNanopub) {
                return Err(Error::Kind(format!("document is not a {format} document")));
            }
            read_nanopub(&np)?
        }
        (Format::Rocrate, Document::Tree(t)) => from_crate(t)?,
        (Format::Canonical, Document::Text(t)) => serde_json::from_str(t)
            .map_err(|e| Error::syntax(e.line(), e.column(), e.to_string()))?,
        _ => {
            return Err(Error::Kind(format!(
                "{format} needs a different document shape"
            )))
        }
    };
    let references = references_of(&unit);
    Ok(Deserialized { unit, references })
}

/// GUPRIs a unit points at: class, schema, members, criterion and sources.
pub fn references_of(unit: &Unit) -> BTreeSet<Gupri> {
    let mut refs = BTreeSet::from([unit.class_ref().clone()]);
    refs.extend(unit.meta().schema_ref.iter().cloned());
    match unit {
        Unit::Compound(c) => {
            refs.extend(c.member_gupris().cloned());
            refs.extend(c.criterion_ref.iter().cloned());
        }
        Unit::Statement(s) => refs.extend(s.meta.source_refs.iter().cloned()),
    }
    refs
}
