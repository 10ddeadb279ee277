//! Content manifestations and their canonical byte encoding.
//!
//! Canonical bytes are UTF-8 with LF line endings. Line 1 is the form tag;
//! every following line is one fact of the payload. Graph triples are
//! emitted sorted by their encoded `(subject, predicate, object)` lines so
//! insertion order never leaks into the encoding.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::literal::{Datatype, Decimal, Literal};
use crate::error::{Error, Result};
use crate::gupri::Gupri;
use crate::syntax::{iri, quote, tokenize, Cursor, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Form {
    TextSnippet,
    Rosetta,
    Graph,
    Tabular,
}

impl Form {
    pub const ALL: [Form; 4] = [Form::TextSnippet, Form::Rosetta, Form::Graph, Form::Tabular];

    pub fn tag(self) -> &'static str {
        match self {
            Form::TextSnippet => "text-snippet",
            Form::Rosetta => "rosetta",
            Form::Graph => "graph",
            Form::Tabular => "tabular",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.tag() == tag)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceRef {
    pub document: Gupri,
    pub start: u64,
    pub end: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextSnippet {
    pub text: String,
    pub language: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<SourceRef>,
    /// Opaque reference to an externally computed embedding file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SlotValue {
    Resource { value: Gupri },
    Literal { value: Literal },
    Quantity { value: Decimal, unit: Gupri },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RosettaStatement {
    pub metamodel: Gupri,
    pub subject: Gupri,
    pub slots: Vec<SlotValue>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Object {
    Resource(Gupri),
    Literal(Literal),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub subject: Gupri,
    pub predicate: Gupri,
    pub object: Object,
}

impl Triple {
    pub fn new(subject: Gupri, predicate: Gupri, object: Object) -> Self {
        Self {
            subject,
            predicate,
            object,
        }
    }

    /// The triple's identity string, also used as a partition item id.
    pub fn encode(&self) -> String {
        format!(
            "{} {} {}",
            iri(&self.subject),
            iri(&self.predicate),
            encode_object(&self.object)
        )
    }
}

pub(crate) fn encode_object(o: &Object) -> String {
    match o {
        Object::Resource(g) => iri(g),
        Object::Literal(l) => encode_literal(l),
    }
}

pub(crate) fn encode_literal(l: &Literal) -> String {
    format!("{}^^{}", quote(&l.lexical), l.datatype.curie())
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphContent {
    pub triples: BTreeSet<Triple>,
}

impl GraphContent {
    pub fn new(triples: impl IntoIterator<Item = Triple>) -> Self {
        Self {
            triples: triples.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TabularRow {
    pub schema: Gupri,
    /// Column name and cell value, in schema column order.
    pub cells: Vec<(String, String)>,
}

impl TabularRow {
    pub fn get(&self, column: &str) -> Option<&str> {
        self.cells
            .iter()
            .find(|(c, _)| c == column)
            .map(|(_, v)| v.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum ContentManifestation {
    TextSnippet(TextSnippet),
    Rosetta(RosettaStatement),
    Graph(GraphContent),
    Tabular(TabularRow),
}

impl ContentManifestation {
    pub fn form(&self) -> Form {
        match self {
            ContentManifestation::TextSnippet(_) => Form::TextSnippet,
            ContentManifestation::Rosetta(_) => Form::Rosetta,
            ContentManifestation::Graph(_) => Form::Graph,
            ContentManifestation::Tabular(_) => Form::Tabular,
        }
    }

    pub fn as_graph(&self) -> Option<&GraphContent> {
        match self {
            ContentManifestation::Graph(g) => Some(g),
            _ => None,
        }
    }

    pub fn as_rosetta(&self) -> Option<&RosettaStatement> {
        match self {
            ContentManifestation::Rosetta(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&TextSnippet> {
        match self {
            ContentManifestation::TextSnippet(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_tabular(&self) -> Option<&TabularRow> {
        match self {
            ContentManifestation::Tabular(t) => Some(t),
            _ => None,
        }
    }

    /// Checks the form-local invariants that need no registry.
    pub fn check(&self) -> Result<()> {
        match self {
            ContentManifestation::TextSnippet(t) => {
                if t.language.is_empty() {
                    return Err(Error::Validation(
                        "text snippet without language tag".into(),
                    ));
                }
                if let Some(src) = &t.source {
                    if src.start >= src.end {
                        return Err(Error::Validation(format!(
                            "text offsets must satisfy start < end, got {}..{}",
                            src.start, src.end
                        )));
                    }
                }
            }
            ContentManifestation::Rosetta(r) => {
                for slot in &r.slots {
                    if let SlotValue::Literal { value } = slot {
                        check_literal(value)?;
                    }
                }
            }
            ContentManifestation::Graph(g) => {
                for t in &g.triples {
                    if let Object::Literal(l) = &t.object {
                        check_literal(l)?;
                    }
                }
            }
            ContentManifestation::Tabular(t) => {
                let mut seen = HashSet::new();
                for (column, _) in &t.cells {
                    if column.is_empty() || !seen.insert(column.as_str()) {
                        return Err(Error::Validation(format!(
                            "tabular row has an empty or duplicate column `{column}`"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_literal(l: &Literal) -> Result<()> {
    if l.datatype.accepts(&l.lexical) {
        Ok(())
    } else {
        Err(Error::Validation(format!(
            "literal `{}` does not match {}",
            l.lexical,
            l.datatype.curie()
        )))
    }
}

/// Deterministic, form-tagged byte encoding of a manifestation.
pub fn canonicalize(m: &ContentManifestation) -> Result<Vec<u8>> {
    m.check()?;
    let mut lines = vec![m.form().tag().to_string()];
    match m {
        ContentManifestation::TextSnippet(t) => {
            lines.push(format!("language {}", quote(&t.language)));
            lines.push(format!("text {}", quote(&t.text)));
            if let Some(src) = &t.source {
                lines.push(format!(
                    "source {} {} {}",
                    iri(&src.document),
                    src.start,
                    src.end
                ));
            }
            if let Some(e) = &t.embedding {
                lines.push(format!("embedding {}", quote(e)));
            }
        }
        ContentManifestation::Rosetta(r) => {
            lines.push(format!("metamodel {}", iri(&r.metamodel)));
            lines.push(format!("subject {}", iri(&r.subject)));
            for (i, slot) in r.slots.iter().enumerate() {
                let body = match slot {
                    SlotValue::Resource { value } => format!("resource {}", iri(value)),
                    SlotValue::Literal { value } => format!("literal {}", encode_literal(value)),
                    SlotValue::Quantity { value, unit } => {
                        format!("quantity {} {}", quote(value.as_str()), iri(unit))
                    }
                };
                lines.push(format!("slot {i} {body}"));
            }
        }
        ContentManifestation::Graph(g) => {
            let mut encoded: Vec<String> = g.triples.iter().map(Triple::encode).collect();
            encoded.sort();
            lines.extend(encoded);
        }
        ContentManifestation::Tabular(t) => {
            lines.push(format!("schema {}", iri(&t.schema)));
            for (column, value) in &t.cells {
                lines.push(format!("cell {} {}", quote(column), quote(value)));
            }
        }
    }
    let mut out = lines.join("\n");
    out.push('\n');
    Ok(out.into_bytes())
}

fn parse_literal(cur: &mut Cursor<'_>) -> Result<Literal> {
    let lexical = cur.string()?;
    match cur.next() {
        Some(Token::Caret) => {}
        _ => return Err(cur.error("expected `^^datatype` after literal")),
    }
    let curie = cur.word()?;
    let datatype = Datatype::from_curie(curie)
        .ok_or_else(|| cur.error(format!("unknown datatype `{curie}`")))?;
    Literal::new(lexical, datatype).map_err(|e| cur.error(e.to_string()))
}

pub(crate) fn parse_object(cur: &mut Cursor<'_>) -> Result<Object> {
    match cur.peek() {
        Some(Token::Iri(_)) => Ok(Object::Resource(cur.gupri()?)),
        Some(Token::Str(_)) => Ok(Object::Literal(parse_literal(cur)?)),
        _ => Err(cur.error("expected a GUPRI or typed literal")),
    }
}

/// Inverse of [`canonicalize`].
pub fn decode_canonical(bytes: &[u8]) -> Result<ContentManifestation> {
    let text =
        std::str::from_utf8(bytes).map_err(|e| Error::syntax(1, 1, format!("not UTF-8: {e}")))?;
    let body = text
        .strip_suffix('\n')
        .ok_or_else(|| Error::syntax(1, 1, "canonical bytes must end with LF"))?;
    let mut lines = body.split('\n').enumerate().map(|(i, l)| (i + 1, l));
    let (_, tag) = lines
        .next()
        .ok_or_else(|| Error::syntax(1, 1, "empty input"))?;
    let form = Form::from_tag(tag)
        .ok_or_else(|| Error::syntax(1, 1, format!("unknown form tag `{tag}`")))?;
    let parsed: Vec<(usize, Vec<_>, usize)> = lines
        .map(|(n, l)| tokenize(l, n).map(|t| (n, t, l.chars().count())))
        .collect::<Result<_>>()?;
    let mut rows = parsed.iter().map(|(n, toks, w)| Cursor::new(toks, *n, *w));

    let m = match form {
        Form::TextSnippet => {
            let mut cur = rows
                .next()
                .ok_or_else(|| Error::syntax(2, 1, "missing language line"))?;
            cur.keyword("language")?;
            let language = cur.string()?;
            cur.finish()?;
            let mut cur = rows
                .next()
                .ok_or_else(|| Error::syntax(3, 1, "missing text line"))?;
            cur.keyword("text")?;
            let text = cur.string()?;
            cur.finish()?;
            let mut snippet = TextSnippet {
                text,
                language,
                source: None,
                embedding: None,
            };
            for mut cur in rows {
                match cur.word()? {
                    "source" if snippet.source.is_none() && snippet.embedding.is_none() => {
                        let document = cur.gupri()?;
                        let start = cur.number()?;
                        let end = cur.number()?;
                        snippet.source = Some(SourceRef {
                            document,
                            start,
                            end,
                        });
                    }
                    "embedding" if snippet.embedding.is_none() => {
                        snippet.embedding = Some(cur.string()?);
                    }
                    other => return Err(cur.error(format!("unexpected line `{other}`"))),
                }
                cur.finish()?;
            }
            ContentManifestation::TextSnippet(snippet)
        }
        Form::Rosetta => {
            let mut cur = rows
                .next()
                .ok_or_else(|| Error::syntax(2, 1, "missing metamodel line"))?;
            cur.keyword("metamodel")?;
            let metamodel = cur.gupri()?;
            cur.finish()?;
            let mut cur = rows
                .next()
                .ok_or_else(|| Error::syntax(3, 1, "missing subject line"))?;
            cur.keyword("subject")?;
            let subject = cur.gupri()?;
            cur.finish()?;
            let mut slots = Vec::new();
            for mut cur in rows {
                cur.keyword("slot")?;
                let index: usize = cur.number()?;
                if index != slots.len() {
                    return Err(cur.error("slot indices must be consecutive from 0"));
                }
                let slot = match cur.word()? {
                    "resource" => SlotValue::Resource {
                        value: cur.gupri()?,
                    },
                    "literal" => SlotValue::Literal {
                        value: parse_literal(&mut cur)?,
                    },
                    "quantity" => {
                        let value =
                            Decimal::parse(&cur.string()?).map_err(|e| cur.error(e.to_string()))?;
                        SlotValue::Quantity {
                            value,
                            unit: cur.gupri()?,
                        }
                    }
                    other => return Err(cur.error(format!("unknown slot kind `{other}`"))),
                };
                cur.finish()?;
                slots.push(slot);
            }
            ContentManifestation::Rosetta(RosettaStatement {
                metamodel,
                subject,
                slots,
            })
        }
        Form::Graph => {
            let mut triples = BTreeSet::new();
            for mut cur in rows {
                let subject = cur.gupri()?;
                let predicate = cur.gupri()?;
                let object = parse_object(&mut cur)?;
                cur.finish()?;
                if !triples.insert(Triple::new(subject, predicate, object)) {
                    return Err(cur.error("duplicate triple"));
                }
            }
            ContentManifestation::Graph(GraphContent { triples })
        }
        Form::Tabular => {
            let mut cur = rows
                .next()
                .ok_or_else(|| Error::syntax(2, 1, "missing schema line"))?;
            cur.keyword("schema")?;
            let schema = cur.gupri()?;
            cur.finish()?;
            let mut cells = Vec::new();
            for mut cur in rows {
                cur.keyword("cell")?;
                let column = cur.string()?;
                let value = cur.string()?;
                cur.finish()?;
                cells.push((column, value));
            }
            ContentManifestation::Tabular(TabularRow { schema, cells })
        }
    };
    m.check()?;
    // Reject inputs that would not re-encode to the same bytes (unsorted graphs etc.).
    if canonicalize(&m)? != bytes {
        return Err(Error::FormatViolation(
            "bytes are not in canonical form".into(),
        ));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(name: &str) -> Gupri {
        Gupri::named("test", "t", name)
    }

    #[test]
    fn graph_order_independent() {
        let t1 = Triple::new(g("a"), g("p"), Object::Resource(g("b")));
        let t2 = Triple::new(
            g("a"),
            g("q"),
            Object::Literal(Literal::new("24.76", Datatype::Decimal).unwrap()),
        );
        let m1 = ContentManifestation::Graph(GraphContent::new([t1.clone(), t2.clone()]));
        let m2 = ContentManifestation::Graph(GraphContent::new([t2, t1]));
        assert_eq!(canonicalize(&m1).unwrap(), canonicalize(&m2).unwrap());
    }

    #[test]
    fn text_bytes_embed_sentence() {
        let m = ContentManifestation::TextSnippet(TextSnippet {
            text: "Parasite X has a mass of 24.76 grams.".into(),
            language: "en".into(),
            source: None,
            embedding: None,
        });
        let bytes = String::from_utf8(canonicalize(&m).unwrap()).unwrap();
        assert!(bytes.starts_with("text-snippet\n"));
        assert!(bytes.contains("Parasite X has a mass of 24.76 grams."));
        assert_eq!(decode_canonical(bytes.as_bytes()).unwrap(), m);
    }

    #[test]
    fn bad_offsets_rejected() {
        let m = ContentManifestation::TextSnippet(TextSnippet {
            text: "x".into(),
            language: "en".into(),
            source: Some(SourceRef {
                document: g("doc"),
                start: 5,
                end: 5,
            }),
            embedding: None,
        });
        assert!(matches!(canonicalize(&m), Err(Error::Validation(_))));
    }

    #[test]
    fn duplicate_columns_rejected() {
        let m = ContentManifestation::Tabular(TabularRow {
            schema: g("s"),
            cells: vec![("a".into(), "1".into()), ("a".into(), "2".into())],
        });
        assert!(canonicalize(&m).is_err());
    }

    #[test]
    fn decode_rejects_unsorted_graph() {
        let t1 = Triple::new(g("a"), g("p"), Object::Resource(g("b")));
        let t2 = Triple::new(g("c"), g("p"), Object::Resource(g("d")));
        let mut lines = [t1.encode(), t2.encode()];
        lines.sort();
        lines.reverse();
        let text = format!("graph\n{}\n{}\n", lines[0], lines[1]);
        assert!(decode_canonical(text.as_bytes()).is_err());
    }
}
