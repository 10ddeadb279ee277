//! Nanopublication and nested nanopublication mapping.
//!
//! A statement unit becomes a nanopub whose assertion graph is its graph
//! content. A compound unit becomes a nested nanopub: empty assertion,
//! members listed in the head graph with an index annotation, and the
//! `su:hasCompoundStructure true` flag in the publication info.

use std::collections::{BTreeMap, BTreeSet};

use super::trig::{
    from_content_triple, ns, to_content_triple, NamedGraph, RdfTriple, Term, TrigDocument, RDF_TYPE,
};
use crate::error::{Error, Result};
use crate::gupri::Gupri;
use crate::model::{
    canonicalize, decode_canonical, ArgumentRole, CompoundKind, CompoundUnit, ContentManifestation,
    Datatype, Form, Frame, GraphContent, License, LogicalFramework, Member, MetaRecord,
    StatementUnit, Timestamp, Typology, Unit,
};
use crate::store::UnitStore;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphPart {
    pub name: Gupri,
    pub triples: BTreeSet<RdfTriple>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NanopubDocument {
    pub gupri: Gupri,
    pub head: GraphPart,
    pub assertion: GraphPart,
    pub provenance: GraphPart,
    pub pubinfo: GraphPart,
}

fn su(local: &str) -> Term {
    Term::iri(ns("su", local))
}

fn part_name(unit: &Gupri, part: &str) -> Result<Gupri> {
    Gupri::from_content(
        unit.authority(),
        format!("nanopub {part}\n{unit}\n").as_bytes(),
    )
}

impl NanopubDocument {
    pub fn is_nested(&self) -> bool {
        self.head.triples.contains(&(
            Term::gupri(&self.gupri),
            Term::iri(RDF_TYPE),
            su("NestedNanopublication"),
        ))
    }

    pub fn to_trig(&self) -> TrigDocument {
        let graph = |p: &GraphPart| NamedGraph {
            name: Some(p.name.to_string()),
            triples: p.triples.clone(),
        };
        TrigDocument {
            graphs: vec![
                graph(&self.head),
                graph(&self.assertion),
                graph(&self.provenance),
                graph(&self.pubinfo),
            ],
        }
    }

    pub fn from_trig(doc: &TrigDocument) -> Result<Self> {
        let np_type = Term::iri(ns("np", "Nanopublication"));
        let mut heads = doc.graphs.iter().filter_map(|g| {
            g.triples
                .iter()
                .find(|t| t.1 == Term::iri(RDF_TYPE) && t.2 == np_type)
                .map(|t| (g, t.0.clone()))
        });
        let (head, np) = heads.next().ok_or_else(|| {
            Error::FormatViolation("no head graph typing a np:Nanopublication".into())
        })?;
        if heads.next().is_some() {
            return Err(Error::FormatViolation("several head graphs".into()));
        }
        let gupri = np.as_gupri()?;
        let link = |p: &str| -> Result<GraphPart> {
            let target = head
                .triples
                .iter()
                .find(|t| t.0 == np && t.1 == Term::iri(ns("np", p)))
                .ok_or_else(|| Error::FormatViolation(format!("head lacks np:{p}")))?
                .2
                .clone();
            let name = target.as_gupri()?;
            let g = doc
                .graph(name.as_str())
                .ok_or_else(|| Error::FormatViolation(format!("np:{p} graph {name} is missing")))?;
            Ok(GraphPart {
                name,
                triples: g.triples.clone(),
            })
        };
        let out = NanopubDocument {
            head: GraphPart {
                name: Gupri::parse(head.name.as_deref().unwrap_or_default())?,
                triples: head.triples.clone(),
            },
            assertion: link("hasAssertion")?,
            provenance: link("hasProvenance")?,
            pubinfo: link("hasPublicationInfo")?,
            gupri,
        };
        if doc.graphs.len() != 4 {
            return Err(Error::FormatViolation(format!(
                "a nanopub has exactly four graphs, found {}",
                doc.graphs.len()
            )));
        }
        Ok(out)
    }
}

struct Builder {
    unit: Gupri,
    np: Gupri,
    assertion: Gupri,
    head: BTreeSet<RdfTriple>,
    provenance: BTreeSet<RdfTriple>,
    pubinfo: BTreeSet<RdfTriple>,
}

impl Builder {
    fn new(unit: &Gupri) -> Result<Self> {
        Ok(Self {
            unit: unit.clone(),
            np: part_name(unit, "document")?,
            assertion: part_name(unit, "assertion")?,
            head: BTreeSet::new(),
            provenance: BTreeSet::new(),
            pubinfo: BTreeSet::new(),
        })
    }

    fn unit_fact(&mut self, p: &str, o: Term) {
        self.pubinfo.insert((Term::gupri(&self.unit), su(p), o));
    }

    fn meta(&mut self, meta: &MetaRecord) -> Result<()> {
        let a = Term::gupri(&self.assertion);
        let n = Term::gupri(&self.np);
        if let Some(c) = &meta.creator {
            self.provenance.insert((
                a.clone(),
                Term::iri(ns("prov", "wasAttributedTo")),
                Term::gupri(c),
            ));
        }
        if let Some(author) = &meta.author {
            self.provenance.insert((
                a.clone(),
                Term::iri(ns("dct", "creator")),
                Term::gupri(author),
            ));
        }
        if let Some(s) = &meta.schema_ref {
            self.provenance
                .insert((a.clone(), su("schema"), Term::gupri(s)));
        }
        if let Some(f) = &meta.logical_framework {
            self.provenance
                .insert((a.clone(), su("logicalFramework"), Term::string(f.token())));
        }
        if let Some(t) = meta.statement_typology {
            self.provenance
                .insert((a.clone(), su("statementTypology"), Term::string(t.token())));
        }
        for s in &meta.source_refs {
            self.provenance.insert((
                a.clone(),
                Term::iri(ns("prov", "wasDerivedFrom")),
                Term::gupri(s),
            ));
        }
        if !meta.source_refs.is_empty() {
            let list: Vec<&str> = meta.source_refs.iter().map(Gupri::as_str).collect();
            self.provenance
                .insert((a, su("sourceRefList"), Term::string(list.join(" "))));
        }
        self.pubinfo.insert((
            n.clone(),
            Term::iri(ns("dct", "created")),
            Term::literal(meta.created_at.to_string(), Datatype::DateTime),
        ));
        match &meta.license {
            Some(License::Gupri(g)) => {
                self.pubinfo
                    .insert((n.clone(), Term::iri(ns("dct", "license")), Term::gupri(g)));
            }
            Some(License::Token(t)) => {
                self.pubinfo.insert((
                    n.clone(),
                    Term::iri(ns("dct", "license")),
                    Term::string(t.clone()),
                ));
            }
            None => {}
        }
        if !meta.extra.is_empty() {
            self.pubinfo.insert((
                n.clone(),
                su("extra"),
                Term::string(serde_json::to_string(&meta.extra)?),
            ));
        }
        self.pubinfo
            .insert((n, su("unit"), Term::gupri(&self.unit)));
        Ok(())
    }

    fn finish(self, assertion: BTreeSet<RdfTriple>, nested: bool) -> Result<NanopubDocument> {
        let n = Term::gupri(&self.np);
        let prov = part_name(&self.unit, "provenance")?;
        let info = part_name(&self.unit, "pubinfo")?;
        let mut head = self.head;
        head.insert((
            n.clone(),
            Term::iri(RDF_TYPE),
            Term::iri(ns("np", "Nanopublication")),
        ));
        if nested {
            head.insert((n.clone(), Term::iri(RDF_TYPE), su("NestedNanopublication")));
        }
        head.insert((
            n.clone(),
            Term::iri(ns("np", "hasAssertion")),
            Term::gupri(&self.assertion),
        ));
        head.insert((
            n.clone(),
            Term::iri(ns("np", "hasProvenance")),
            Term::gupri(&prov),
        ));
        head.insert((
            n,
            Term::iri(ns("np", "hasPublicationInfo")),
            Term::gupri(&info),
        ));
        Ok(NanopubDocument {
            head: GraphPart {
                name: part_name(&self.unit, "head")?,
                triples: head,
            },
            assertion: GraphPart {
                name: self.assertion,
                triples: assertion,
            },
            provenance: GraphPart {
                name: prov,
                triples: self.provenance,
            },
            pubinfo: GraphPart {
                name: info,
                triples: self.pubinfo,
            },
            gupri: self.np,
        })
    }
}

/// Statement unit to nanopub. Units without stored graph content are
/// crosswalked; the publication info then marks the assertion as derived.
pub fn statement_nanopub(s: &StatementUnit, store: &UnitStore) -> Result<NanopubDocument> {
    let mut b = Builder::new(&s.gupri)?;
    let stored = s
        .manifestation(Form::Graph)
        .and_then(ContentManifestation::as_graph);
    let triples = match stored {
        Some(g) => g.triples.iter().cloned().collect(),
        None => store.graph_of(s).map_err(|_| {
            Error::NoCrosswalk(format!(
                "{} has no graph content and cannot be crosswalked to graph",
                s.gupri
            ))
        })?,
    };
    if triples.is_empty() {
        return Err(Error::FormatViolation(
            "a statement nanopub needs a nonempty assertion".into(),
        ));
    }
    if stored.is_none() {
        b.unit_fact("derivedAssertion", Term::literal("true", Datatype::Boolean));
    }
    b.meta(&s.meta)?;
    b.unit_fact("instanceOf", Term::gupri(&s.class_ref));
    b.unit_fact("hasSubject", Term::gupri(&s.subject_ref));
    b.unit_fact("typology", Term::string(s.typology.token()));
    b.unit_fact("canonicalForm", Term::string(s.canonical_form.tag()));
    b.pubinfo.insert((
        Term::gupri(&s.gupri),
        Term::iri(RDF_TYPE),
        su("StatementUnit"),
    ));
    for (form, m) in &s.manifestations {
        if *form != Form::Graph {
            let bytes = String::from_utf8(canonicalize(m)?).expect("canonical bytes are UTF-8");
            b.unit_fact("manifestation", Term::string(bytes));
        }
    }
    let assertion = triples.iter().map(from_content_triple).collect();
    b.finish(assertion, false)
}

/// Compound unit to nested nanopub.
pub fn nested_nanopub(c: &CompoundUnit) -> Result<NanopubDocument> {
    let mut b = Builder::new(&c.gupri)?;
    b.meta(&c.meta)?;
    b.unit_fact("instanceOf", Term::gupri(&c.class_ref));
    b.unit_fact("compoundKind", Term::string(c.kind.token()));
    if let Some(f) = c.frame {
        b.unit_fact("frame", Term::string(f.token()));
    }
    if let Some(k) = &c.criterion_ref {
        b.unit_fact("criterion", Term::gupri(k));
    }
    b.pubinfo.insert((
        Term::gupri(&c.gupri),
        Term::iri(RDF_TYPE),
        su("CompoundUnit"),
    ));
    b.pubinfo.insert((
        Term::gupri(&b.np),
        su("hasCompoundStructure"),
        Term::literal("true", Datatype::Boolean),
    ));
    let n = Term::gupri(&b.np);
    for (i, m) in c.members.iter().enumerate() {
        let mt = Term::gupri(&m.gupri);
        b.head.insert((n.clone(), su("hasMember"), mt.clone()));
        b.head.insert((
            mt.clone(),
            su("memberIndex"),
            Term::literal(i.to_string(), Datatype::Integer),
        ));
        if let Some(role) = m.role {
            b.head
                .insert((mt, su("memberRole"), Term::string(role.token())));
        }
    }
    b.finish(BTreeSet::new(), true)
}

/// Reads graph facts by subject and predicate.
struct Facts<'a> {
    triples: Vec<&'a RdfTriple>,
}

impl<'a> Facts<'a> {
    fn new(parts: &[&'a GraphPart]) -> Self {
        Self {
            triples: parts.iter().flat_map(|p| p.triples.iter()).collect(),
        }
    }

    fn all(&self, s: &Term, p: &Term) -> Vec<&'a Term> {
        self.triples
            .iter()
            .filter(|t| t.0 == *s && t.1 == *p)
            .map(|t| &t.2)
            .collect()
    }

    fn opt(&self, s: &Term, p: &Term) -> Result<Option<&'a Term>> {
        match self.all(s, p).as_slice() {
            [] => Ok(None),
            [one] => Ok(Some(*one)),
            _ => Err(Error::FormatViolation(format!(
                "{p:?} given more than once"
            ))),
        }
    }

    fn one(&self, s: &Term, p: &Term) -> Result<&'a Term> {
        self.opt(s, p)?
            .ok_or_else(|| Error::FormatViolation(format!("missing {p:?}")))
    }
}

fn lexical(t: &Term) -> Result<&str> {
    t.lexical()
        .ok_or_else(|| Error::FormatViolation(format!("expected a literal, found {t:?}")))
}

fn read_meta(doc: &NanopubDocument, facts: &Facts<'_>) -> Result<MetaRecord> {
    let a = Term::gupri(&doc.assertion.name);
    let n = Term::gupri(&doc.gupri);
    let g = |t: Option<&Term>| t.map(Term::as_gupri).transpose();
    let created = lexical(facts.one(&n, &Term::iri(ns("dct", "created")))?)?;
    let source_refs = match facts.opt(&a, &su("sourceRefList"))? {
        Some(t) => lexical(t)?
            .split(' ')
            .map(Gupri::parse)
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    Ok(MetaRecord {
        creator: g(facts.opt(&a, &Term::iri(ns("prov", "wasAttributedTo")))?)?,
        author: g(facts.opt(&a, &Term::iri(ns("dct", "creator")))?)?,
        created_at: Timestamp::parse(created)?,
        license: match facts.opt(&n, &Term::iri(ns("dct", "license")))? {
            Some(Term::Iri(s)) => Some(License::Gupri(Gupri::parse(s)?)),
            Some(Term::Literal { lexical, .. }) => Some(License::Token(lexical.clone())),
            None => None,
        },
        logical_framework: facts
            .opt(&a, &su("logicalFramework"))?
            .map(|t| lexical(t).and_then(LogicalFramework::parse))
            .transpose()?,
        schema_ref: g(facts.opt(&a, &su("schema"))?)?,
        statement_typology: facts
            .opt(&a, &su("statementTypology"))?
            .map(|t| lexical(t).and_then(Typology::parse))
            .transpose()?,
        source_refs,
        extra: match facts.opt(&n, &su("extra"))? {
            Some(t) => serde_json::from_str::<BTreeMap<String, String>>(lexical(t)?)?,
            None => BTreeMap::new(),
        },
    })
}

/// Rebuilds the unit a nanopub or nested nanopub carries.
pub fn read_nanopub(doc: &NanopubDocument) -> Result<Unit> {
    let facts = Facts::new(&[&doc.head, &doc.provenance, &doc.pubinfo]);
    let n = Term::gupri(&doc.gupri);
    let unit = facts.one(&n, &su("unit"))?.as_gupri()?;
    let u = Term::gupri(&unit);
    let meta = read_meta(doc, &facts)?;
    let class_ref = facts.one(&u, &su("instanceOf"))?.as_gupri()?;
    let flagged = facts
        .opt(&n, &su("hasCompoundStructure"))?
        .map(lexical)
        .transpose()?
        == Some("true");

    if doc.is_nested() {
        if !doc.assertion.triples.is_empty() {
            return Err(Error::FormatViolation(format!(
                "nested nanopub carries {} assertion triples",
                doc.assertion.triples.len()
            )));
        }
        if !flagged {
            return Err(Error::FormatViolation(
                "nested nanopub lacks hasCompoundStructure true".into(),
            ));
        }
        let mut members = Vec::new();
        for m in facts.all(&n, &su("hasMember")) {
            let idx: usize = lexical(facts.one(m, &su("memberIndex"))?)?
                .parse()
                .map_err(|_| Error::FormatViolation("member index is not an integer".into()))?;
            let role = facts
                .opt(m, &su("memberRole"))?
                .map(|t| lexical(t).and_then(ArgumentRole::parse))
                .transpose()?;
            members.push((
                idx,
                Member {
                    gupri: m.as_gupri()?,
                    role,
                },
            ));
        }
        members.sort_by_key(|(i, _)| *i);
        if members.iter().enumerate().any(|(pos, (i, _))| pos != *i) {
            return Err(Error::FormatViolation("member indexes are not 0..n".into()));
        }
        return Ok(Unit::Compound(CompoundUnit {
            gupri: unit,
            class_ref,
            kind: CompoundKind::parse(lexical(facts.one(&u, &su("compoundKind"))?)?)?,
            members: members.into_iter().map(|(_, m)| m).collect(),
            frame: facts
                .opt(&u, &su("frame"))?
                .map(|t| lexical(t).and_then(Frame::parse))
                .transpose()?,
            criterion_ref: facts
                .opt(&u, &su("criterion"))?
                .map(Term::as_gupri)
                .transpose()?,
            meta,
        }));
    }

    if flagged {
        return Err(Error::FormatViolation(
            "statement nanopub flagged as compound".into(),
        ));
    }
    if doc.assertion.triples.is_empty() {
        return Err(Error::FormatViolation(
            "statement nanopub with an empty assertion".into(),
        ));
    }
    let mut manifestations = BTreeMap::new();
    for t in facts.all(&u, &su("manifestation")) {
        let m = decode_canonical(lexical(t)?.as_bytes())?;
        manifestations.insert(m.form(), m);
    }
    let derived = facts
        .opt(&u, &su("derivedAssertion"))?
        .map(lexical)
        .transpose()?
        == Some("true");
    if !derived {
        let triples = doc
            .assertion
            .triples
            .iter()
            .map(to_content_triple)
            .collect::<Result<Vec<_>>>()?;
        manifestations.insert(
            Form::Graph,
            ContentManifestation::Graph(GraphContent::new(triples)),
        );
    }
    let canonical_form = Form::from_tag(lexical(facts.one(&u, &su("canonicalForm"))?)?)
        .ok_or_else(|| Error::FormatViolation("unknown canonical form".into()))?;
    if !manifestations.contains_key(&canonical_form) {
        return Err(Error::FormatViolation(format!(
            "canonical form {canonical_form} is not carried"
        )));
    }
    Ok(Unit::Statement(StatementUnit {
        gupri: unit,
        class_ref,
        subject_ref: facts.one(&u, &su("hasSubject"))?.as_gupri()?,
        typology: Typology::parse(lexical(facts.one(&u, &su("typology"))?)?)?,
        manifestations,
        canonical_form,
        meta,
    }))
}
