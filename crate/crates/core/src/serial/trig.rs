//! TriG subset: named graphs, full IRIs or names from a fixed prefix table,
//! no blank nodes, one triple per line, sorted triples.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::gupri::Gupri;
use crate::model::{Datatype, Literal, Object, Triple};
use crate::syntax::{quote, tokenize, Token};

pub const PREFIXES: [(&str, &str); 6] = [
    ("dct", "http://purl.org/dc/terms/"),
    ("np", "http://www.nanopub.org/nschema#"),
    ("prov", "http://www.w3.org/ns/prov#"),
    ("rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"),
    ("su", "https://w3id.org/semunit/vocab#"),
    ("xsd", "http://www.w3.org/2001/XMLSchema#"),
];

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

/// Full IRI for a name in the fixed prefix table, e.g. `ns("su", "hasMember")`.
pub fn ns(prefix: &str, local: &str) -> String {
    let base = PREFIXES
        .iter()
        .find(|(p, _)| *p == prefix)
        .map(|(_, b)| *b)
        .expect("known prefix");
    format!("{base}{local}")
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(String),
    Literal { lexical: String, datatype: String },
}

impl Term {
    pub fn iri(s: impl Into<String>) -> Self {
        Term::Iri(s.into())
    }

    pub fn gupri(g: &Gupri) -> Self {
        Term::Iri(g.as_str().to_string())
    }

    pub fn literal(lexical: impl Into<String>, dt: Datatype) -> Self {
        Term::Literal {
            lexical: lexical.into(),
            datatype: ns("xsd", dt.curie().trim_start_matches("xsd:")),
        }
    }

    pub fn string(s: impl Into<String>) -> Self {
        Term::literal(s, Datatype::String)
    }

    pub fn from_object(o: &Object) -> Self {
        match o {
            Object::Resource(g) => Term::gupri(g),
            Object::Literal(l) => Term::literal(l.lexical.clone(), l.datatype),
        }
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(s) => Some(s),
            Term::Literal { .. } => None,
        }
    }

    pub fn as_gupri(&self) -> Result<Gupri> {
        match self {
            Term::Iri(s) => Gupri::parse(s),
            Term::Literal { lexical, .. } => Err(Error::InvalidGupri(lexical.clone())),
        }
    }

    pub fn lexical(&self) -> Option<&str> {
        match self {
            Term::Literal { lexical, .. } => Some(lexical),
            Term::Iri(_) => None,
        }
    }

    pub fn to_object(&self) -> Result<Object> {
        match self {
            Term::Iri(s) => Ok(Object::Resource(Gupri::parse(s)?)),
            Term::Literal { lexical, datatype } => {
                let dt = compact(datatype)
                    .as_deref()
                    .and_then(Datatype::from_curie)
                    .ok_or_else(|| {
                        Error::Validation(format!("unsupported datatype <{datatype}>"))
                    })?;
                Ok(Object::Literal(Literal::new(lexical.clone(), dt)?))
            }
        }
    }

    fn write(&self) -> String {
        match self {
            Term::Iri(s) => compact(s).unwrap_or_else(|| format!("<{s}>")),
            Term::Literal { lexical, datatype } => {
                let dt = compact(datatype).unwrap_or_else(|| format!("<{datatype}>"));
                format!("{}^^{dt}", quote(lexical))
            }
        }
    }
}

fn compact(iri: &str) -> Option<String> {
    PREFIXES.iter().find_map(|(p, base)| {
        let local = iri.strip_prefix(base)?;
        let mut chars = local.chars();
        let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
        ok.then(|| format!("{p}:{local}"))
    })
}

pub type RdfTriple = (Term, Term, Term);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedGraph {
    /// `None` is the default graph.
    pub name: Option<String>,
    pub triples: BTreeSet<RdfTriple>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrigDocument {
    pub graphs: Vec<NamedGraph>,
}

impl TrigDocument {
    pub fn graph(&self, name: &str) -> Option<&NamedGraph> {
        self.graphs.iter().find(|g| g.name.as_deref() == Some(name))
    }

    /// Quads in document order, sorted within each graph.
    pub fn quads(&self) -> impl Iterator<Item = (Option<&str>, &RdfTriple)> {
        self.graphs
            .iter()
            .flat_map(|g| g.triples.iter().map(move |t| (g.name.as_deref(), t)))
    }
}

fn triple_line(t: &RdfTriple) -> String {
    format!("{} {} {} .", t.0.write(), t.1.write(), t.2.write())
}

/// Writes the document with the fixed prefix table. Graphs keep their
/// order; triples inside a graph are sorted by their written line.
pub fn write_trig(doc: &TrigDocument) -> String {
    let mut out = String::new();
    for (p, base) in PREFIXES {
        out.push_str(&format!("@prefix {p}: <{base}> .\n"));
    }
    for g in &doc.graphs {
        let mut lines: Vec<String> = g.triples.iter().map(triple_line).collect();
        lines.sort();
        out.push('\n');
        match &g.name {
            Some(name) => {
                out.push_str(&format!("{} {{\n", Term::Iri(name.clone()).write()));
                for l in lines {
                    out.push_str("  ");
                    out.push_str(&l);
                    out.push('\n');
                }
                out.push_str("}\n");
            }
            None => {
                for l in lines {
                    out.push_str(&l);
                    out.push('\n');
                }
            }
        }
    }
    out
}

/// Parses the TriG subset. Errors carry 1-based line and column.
pub fn parse_trig(text: &str) -> Result<TrigDocument> {
    let mut prefixes: BTreeMap<String, String> = PREFIXES
        .iter()
        .map(|(p, b)| (p.to_string(), b.to_string()))
        .collect();
    let mut graphs: Vec<NamedGraph> = Vec::new();
    let mut current: Option<usize> = None;
    let mut seen_names = BTreeSet::new();

    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens = tokenize(line, line_no)?;
        let err = |i: usize, msg: &str| {
            let col = tokens
                .get(i)
                .map(|t| t.column)
                .unwrap_or(line.chars().count() + 1);
            Error::syntax(line_no, col, msg)
        };
        let toks: Vec<&Token> = tokens.iter().map(|t| &t.token).collect();
        match toks.as_slice() {
            [Token::Word(w), Token::Word(p), Token::Iri(base), Token::Punct('.')]
                if w == "@prefix" =>
            {
                let Some(p) = p.strip_suffix(':') else {
                    return Err(err(1, "prefix name must end with `:`"));
                };
                prefixes.insert(p.to_string(), base.clone());
            }
            [Token::Word(w), ..] if w == "@prefix" => return Err(err(0, "malformed @prefix line")),
            [name, Token::Punct('{')] => {
                if current.is_some() {
                    return Err(err(0, "nested graph blocks are not allowed"));
                }
                let name = match expand(name, &prefixes) {
                    Some(Term::Iri(n)) => n,
                    _ => return Err(err(0, "graph name must be an IRI")),
                };
                if !seen_names.insert(name.clone()) {
                    return Err(err(0, "graph name used twice"));
                }
                graphs.push(NamedGraph {
                    name: Some(name),
                    triples: BTreeSet::new(),
                });
                current = Some(graphs.len() - 1);
            }
            [Token::Punct('}')] => {
                if current.take().is_none() {
                    return Err(err(0, "`}` without an open graph"));
                }
            }
            _ => {
                let mut pos = 0;
                let mut terms = Vec::with_capacity(3);
                for slot in 0..3 {
                    let (term, used) = read_term(&toks[pos..], &prefixes).ok_or_else(|| {
                        err(
                            pos,
                            match slot {
                                0 => "expected a subject IRI",
                                1 => "expected a predicate IRI",
                                _ => "expected an object",
                            },
                        )
                    })?;
                    if slot < 2 && !matches!(term, Term::Iri(_)) {
                        return Err(err(pos, "literals may only appear as objects"));
                    }
                    terms.push(term);
                    pos += used;
                }
                if toks.get(pos) != Some(&&Token::Punct('.')) {
                    return Err(err(pos, "expected `.` after the object"));
                }
                if pos + 1 != toks.len() {
                    return Err(err(pos + 1, "one triple per line"));
                }
                let o = terms.pop().expect("three terms");
                let p = terms.pop().expect("three terms");
                let s = terms.pop().expect("three terms");
                let slot = match current {
                    Some(i) => i,
                    None => match graphs.iter().position(|g| g.name.is_none()) {
                        Some(i) => i,
                        None => {
                            graphs.push(NamedGraph {
                                name: None,
                                triples: BTreeSet::new(),
                            });
                            graphs.len() - 1
                        }
                    },
                };
                graphs[slot].triples.insert((s, p, o));
            }
        }
    }
    if current.is_some() {
        return Err(Error::syntax(
            text.split('\n').count(),
            1,
            "unclosed graph block",
        ));
    }
    Ok(TrigDocument { graphs })
}

fn expand(tok: &Token, prefixes: &BTreeMap<String, String>) -> Option<Term> {
    match tok {
        Token::Iri(s) => Some(Term::Iri(s.clone())),
        Token::Word(w) if w == "a" => Some(Term::Iri(RDF_TYPE.to_string())),
        Token::Word(w) if w.starts_with("_:") => None,
        Token::Word(w) => {
            let (p, local) = w.split_once(':')?;
            prefixes
                .get(p)
                .map(|base| Term::Iri(format!("{base}{local}")))
        }
        _ => None,
    }
}

fn read_term(toks: &[&Token], prefixes: &BTreeMap<String, String>) -> Option<(Term, usize)> {
    match toks {
        [Token::Str(s), Token::Caret, dt, ..] => {
            let Term::Iri(datatype) = expand(dt, prefixes)? else {
                return None;
            };
            Some((
                Term::Literal {
                    lexical: s.clone(),
                    datatype,
                },
                3,
            ))
        }
        [Token::Str(s), ..] => Some((Term::string(s.clone()), 1)),
        [t, ..] => expand(t, prefixes).map(|term| (term, 1)),
        [] => None,
    }
}

/// Converts parsed triples to content triples; every node must be a GUPRI.
pub fn to_content_triple(t: &RdfTriple) -> Result<Triple> {
    Ok(Triple::new(
        t.0.as_gupri()?,
        t.1.as_gupri()?,
        t.2.to_object()?,
    ))
}

pub fn from_content_triple(t: &Triple) -> RdfTriple {
    (
        Term::gupri(&t.subject),
        Term::gupri(&t.predicate),
        Term::from_object(&t.object),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_compaction() {
        let g = Gupri::named("x", "t", "a");
        let doc = TrigDocument {
            graphs: vec![NamedGraph {
                name: Some(g.to_string()),
                triples: BTreeSet::from([(
                    Term::gupri(&g),
                    Term::iri(RDF_TYPE),
                    Term::literal("1.5", Datatype::Decimal),
                )]),
            }],
        };
        let text = write_trig(&doc);
        assert!(text.contains("rdf:type \"1.5\"^^xsd:decimal ."));
        assert_eq!(parse_trig(&text).unwrap(), doc);
    }

    #[test]
    fn blank_nodes_rejected_with_position() {
        let err = parse_trig("_:b1 <urn:p> <urn:o> .").unwrap_err();
        assert!(
            matches!(
                err,
                Error::Syntax {
                    line: 1,
                    column: 1,
                    ..
                }
            ),
            "{err}"
        );
    }

    #[test]
    fn unclosed_graph() {
        assert!(parse_trig("<urn:g> {\n<urn:a> <urn:b> <urn:c> .\n").is_err());
    }
}
