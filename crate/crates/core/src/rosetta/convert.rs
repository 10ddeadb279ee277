use std::collections::BTreeMap;

use super::check_bindings;
use super::metamodel::{RosettaMetamodel, SlotKind};
use super::normalize::normalize_with;
use super::render::render_rosetta_label;
use crate::error::{Error, Result};
use crate::gupri::Gupri;
use crate::model::{
    canonicalize, ContentManifestation, Datatype, Decimal, Form, GraphContent, Literal, Object,
    RosettaStatement, SlotValue, StatementUnit, TabularRow, TextSnippet, Triple,
};
use crate::registry::Registries;
use crate::vocab;

pub const LOSSY_TEXT_NOTE: &str = "lossy: surface wording normalized";

/// GUPRI of the statement node in the graph form of `r`.
pub fn statement_node(r: &RosettaStatement) -> Result<Gupri> {
    let mut seed = b"statement-node\n".to_vec();
    seed.extend(canonicalize(&ContentManifestation::Rosetta(r.clone()))?);
    Gupri::from_content(r.subject.authority(), &seed)
}

/// Lifts any manifestation into the rosetta pivot form.
pub fn to_rosetta(
    m: &ContentManifestation,
    metamodel: &RosettaMetamodel,
    reg: &Registries,
) -> Result<RosettaStatement> {
    let r = match m {
        ContentManifestation::Rosetta(r) => {
            if r.metamodel != metamodel.gupri {
                return Err(Error::NoCrosswalk(format!(
                    "rosetta statement instantiates {}, not {}",
                    r.metamodel, metamodel.gupri
                )));
            }
            r.clone()
        }
        ContentManifestation::TextSnippet(t) => {
            normalize_with(&t.text, std::slice::from_ref(&metamodel), reg)
                .map(|(_, r)| r)
                .ok_or_else(|| Error::UnparseableSentence(t.text.clone()))?
        }
        ContentManifestation::Graph(g) => graph_to_rosetta(g, metamodel)?,
        ContentManifestation::Tabular(t) => tabular_to_rosetta(t, metamodel)?,
    };
    check_bindings(metamodel, &r.slots)?;
    Ok(r)
}

/// Lowers a rosetta statement into the target form.
pub fn from_rosetta(
    r: &RosettaStatement,
    metamodel: &RosettaMetamodel,
    target: Form,
    reg: &Registries,
) -> Result<ContentManifestation> {
    check_bindings(metamodel, &r.slots)?;
    Ok(match target {
        Form::Rosetta => ContentManifestation::Rosetta(r.clone()),
        Form::TextSnippet => ContentManifestation::TextSnippet(TextSnippet {
            text: render_rosetta_label(r, metamodel, reg)?.text,
            language: "en".into(),
            source: None,
            embedding: None,
        }),
        Form::Graph => ContentManifestation::Graph(rosetta_to_graph(r, metamodel)?),
        Form::Tabular => ContentManifestation::Tabular(rosetta_to_tabular(r, metamodel)),
    })
}

fn rosetta_to_graph(r: &RosettaStatement, m: &RosettaMetamodel) -> Result<GraphContent> {
    let node = statement_node(r)?;
    let mut triples = vec![
        Triple::new(
            node.clone(),
            vocab::STATEMENT_OF.clone(),
            Object::Resource(m.gupri.clone()),
        ),
        Triple::new(
            node.clone(),
            m.graph_binding.subject_predicate.clone(),
            Object::Resource(r.subject.clone()),
        ),
    ];
    for b in &m.graph_binding.slots {
        let idx = m.slot_index(&b.slot).expect("validated binding");
        match &r.slots[idx] {
            SlotValue::Resource { value } => triples.push(Triple::new(
                node.clone(),
                b.predicate.clone(),
                Object::Resource(value.clone()),
            )),
            SlotValue::Literal { value } => triples.push(Triple::new(
                node.clone(),
                b.predicate.clone(),
                Object::Literal(value.clone()),
            )),
            SlotValue::Quantity { value, unit } => {
                let lit = Literal {
                    lexical: value.as_str().to_string(),
                    datatype: Datatype::Decimal,
                };
                triples.push(Triple::new(
                    node.clone(),
                    b.predicate.clone(),
                    Object::Literal(lit),
                ));
                let unit_pred = b.unit_predicate.clone().expect("validated binding");
                triples.push(Triple::new(
                    node.clone(),
                    unit_pred,
                    Object::Resource(unit.clone()),
                ));
            }
        }
    }
    Ok(GraphContent::new(triples))
}

fn graph_to_rosetta(g: &GraphContent, m: &RosettaMetamodel) -> Result<RosettaStatement> {
    let typed: Vec<&Triple> = g
        .triples
        .iter()
        .filter(|t| {
            t.predicate == *vocab::STATEMENT_OF && t.object == Object::Resource(m.gupri.clone())
        })
        .collect();
    let node = match typed.as_slice() {
        [t] => t.subject.clone(),
        [] => {
            return Err(Error::NoCrosswalk(format!(
                "graph has no statement node for {}",
                m.name
            )))
        }
        _ => {
            return Err(Error::NoCrosswalk(
                "graph has several statement nodes".into(),
            ))
        }
    };
    let mut by_pred: BTreeMap<&Gupri, Vec<&Object>> = BTreeMap::new();
    for t in &g.triples {
        if t.subject != node {
            return Err(Error::NoCrosswalk(format!(
                "triple outside the statement node: {}",
                t.encode()
            )));
        }
        by_pred.entry(&t.predicate).or_default().push(&t.object);
    }
    let single = |p: &Gupri| -> Result<&Object> {
        match by_pred.get(p).map(Vec::as_slice) {
            Some([o]) => Ok(o),
            Some(_) => Err(Error::NoCrosswalk(format!(
                "predicate {p} repeated on statement node"
            ))),
            None => Err(Error::NoCrosswalk(format!(
                "statement node lacks predicate {p}"
            ))),
        }
    };
    let resource = |p: &Gupri| -> Result<Gupri> {
        match single(p)? {
            Object::Resource(g) => Ok(g.clone()),
            Object::Literal(_) => Err(Error::NoCrosswalk(format!(
                "predicate {p} should point at a resource"
            ))),
        }
    };
    let literal = |p: &Gupri| -> Result<Literal> {
        match single(p)? {
            Object::Literal(l) => Ok(l.clone()),
            Object::Resource(_) => Err(Error::NoCrosswalk(format!(
                "predicate {p} should carry a literal"
            ))),
        }
    };

    let subject = resource(&m.graph_binding.subject_predicate)?;
    let mut used = 2;
    let mut slots = Vec::with_capacity(m.slots.len());
    for def in &m.slots {
        let b = m
            .graph_binding
            .slots
            .iter()
            .find(|b| b.slot == def.name)
            .expect("validated binding");
        let value = match &def.kind {
            SlotKind::Resource => SlotValue::Resource {
                value: resource(&b.predicate)?,
            },
            SlotKind::Literal { .. } => SlotValue::Literal {
                value: literal(&b.predicate)?,
            },
            SlotKind::Quantity { .. } => {
                let lit = literal(&b.predicate)?;
                let value =
                    Decimal::parse(&lit.lexical).map_err(|e| Error::NoCrosswalk(e.to_string()))?;
                let unit = resource(b.unit_predicate.as_ref().expect("validated binding"))?;
                used += 1;
                SlotValue::Quantity { value, unit }
            }
        };
        used += 1;
        slots.push(value);
    }
    if used != g.triples.len() {
        return Err(Error::NoCrosswalk(format!(
            "{} graph triples are not covered by the {} binding",
            g.triples.len() - used,
            m.name
        )));
    }
    let r = RosettaStatement {
        metamodel: m.gupri.clone(),
        subject,
        slots,
    };
    if statement_node(&r)? != node {
        return Err(Error::NoCrosswalk(format!(
            "statement node {node} is not the content-derived node of its statement"
        )));
    }
    Ok(r)
}

fn rosetta_to_tabular(r: &RosettaStatement, m: &RosettaMetamodel) -> TabularRow {
    let mut cells = vec![(
        m.tabular_binding.subject_column.clone(),
        r.subject.to_string(),
    )];
    for c in &m.tabular_binding.columns {
        let idx = m.slot_index(&c.slot).expect("validated binding");
        match &r.slots[idx] {
            SlotValue::Resource { value } => cells.push((c.column.clone(), value.to_string())),
            SlotValue::Literal { value } => cells.push((c.column.clone(), value.lexical.clone())),
            SlotValue::Quantity { value, unit } => {
                cells.push((c.column.clone(), value.to_string()));
                cells.push((
                    c.unit_column.clone().expect("validated binding"),
                    unit.to_string(),
                ));
            }
        }
    }
    TabularRow {
        schema: m.gupri.clone(),
        cells,
    }
}

fn tabular_to_rosetta(t: &TabularRow, m: &RosettaMetamodel) -> Result<RosettaStatement> {
    if t.schema != m.gupri {
        return Err(Error::NoCrosswalk(format!(
            "row schema {} is not {}",
            t.schema, m.gupri
        )));
    }
    let expected = m.tabular_binding.column_names();
    let actual: Vec<&str> = t.cells.iter().map(|(c, _)| c.as_str()).collect();
    if expected != actual {
        return Err(Error::NoCrosswalk(format!(
            "row columns {actual:?} do not match schema order {expected:?}"
        )));
    }
    let cell = |col: &str| t.get(col).expect("columns checked");
    let gupri = |col: &str| {
        Gupri::parse(cell(col))
            .map_err(|_| Error::NoCrosswalk(format!("column `{col}` must hold a GUPRI")))
    };
    let subject = gupri(&m.tabular_binding.subject_column)?;
    let mut slots = Vec::with_capacity(m.slots.len());
    for def in &m.slots {
        let c = m
            .tabular_binding
            .columns
            .iter()
            .find(|c| c.slot == def.name)
            .expect("validated binding");
        slots.push(match &def.kind {
            SlotKind::Resource => SlotValue::Resource {
                value: gupri(&c.column)?,
            },
            SlotKind::Literal { datatype } => SlotValue::Literal {
                value: Literal::new(cell(&c.column), *datatype)
                    .map_err(|e| Error::NoCrosswalk(e.to_string()))?,
            },
            SlotKind::Quantity { .. } => SlotValue::Quantity {
                value: Decimal::parse(cell(&c.column))
                    .map_err(|e| Error::NoCrosswalk(e.to_string()))?,
                unit: gupri(c.unit_column.as_deref().expect("validated binding"))?,
            },
        });
    }
    Ok(RosettaStatement {
        metamodel: m.gupri.clone(),
        subject,
        slots,
    })
}

/// Adds a `target` manifestation to a copy of `unit`, pivoting through the
/// rosetta form of its canonical manifestation.
pub fn crosswalk(unit: &StatementUnit, target: Form, reg: &Registries) -> Result<StatementUnit> {
    if unit.manifestations.contains_key(&target) {
        return Ok(unit.clone());
    }
    let schema = unit
        .meta
        .schema_ref
        .as_ref()
        .ok_or_else(|| Error::NoCrosswalk(format!("unit {} declares no schema", unit.gupri)))?;
    let metamodel = reg
        .metamodel(schema)
        .ok_or_else(|| Error::NoCrosswalk(format!("schema {schema} is not a rosetta metamodel")))?;
    let source = unit.canonical();
    let pivot = to_rosetta(source, metamodel, reg)?;
    if pivot.subject != unit.subject_ref {
        return Err(Error::NoCrosswalk(format!(
            "content subject {} differs from unit subject {}",
            pivot.subject, unit.subject_ref
        )));
    }
    let produced = from_rosetta(&pivot, metamodel, target, reg)?;
    let mut out = unit.clone();
    out.manifestations.insert(target, produced);
    if source.form() == Form::TextSnippet {
        out.meta.extra.insert(
            format!("crosswalk.{}", target.tag()),
            LOSSY_TEXT_NOTE.to_string(),
        );
    }
    Ok(out)
}
