use serde::{Deserialize, Serialize};

use super::convert::{from_rosetta, to_rosetta};
use super::metamodel::{parse_template, RosettaMetamodel, Segment, SUBJECT_PLACEHOLDER};
use crate::error::{Error, Result};
use crate::gupri::Gupri;
use crate::model::{Form, RosettaStatement, SlotValue, StatementUnit};
use crate::registry::Registries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RenderMode {
    Label,
    Graph,
    Table,
}

impl RenderMode {
    pub fn parse(token: &str) -> Result<Self> {
        match token {
            "label" => Ok(RenderMode::Label),
            "graph" => Ok(RenderMode::Graph),
            "table" => Ok(RenderMode::Table),
            _ => Err(Error::Validation(format!("unknown render mode `{token}`"))),
        }
    }
}

/// Dynamic label. `degenerate` is set when every slot filled in blank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rendering {
    pub text: String,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisplayNode {
    pub id: String,
    pub label: String,
    pub role: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisplayEdge {
    pub from: String,
    pub to: String,
    pub label: String,
}

/// Node/edge structure for a dynamic graph, in template order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisplayGraph {
    pub nodes: Vec<DisplayNode>,
    pub edges: Vec<DisplayEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableView {
    pub schema: Gupri,
    pub columns: Vec<String>,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum RenderOutput {
    Label(Rendering),
    Graph(DisplayGraph),
    Table(TableView),
}

fn label_for(g: &Gupri, reg: &Registries) -> String {
    reg.label_of(g)
        .map(str::to_string)
        .unwrap_or_else(|| g.to_string())
}

fn unit_symbol(unit: &Gupri, reg: &Registries) -> String {
    match reg.term(unit) {
        Some(t) => t.symbol.clone().unwrap_or_else(|| t.label.clone()),
        None => unit.to_string(),
    }
}

/// `24.76 grams`, `37°C`: symbols starting with a degree or percent sign attach directly.
pub(crate) fn quantity_text(
    value: &crate::model::Decimal,
    unit: &Gupri,
    reg: &Registries,
) -> String {
    let symbol = unit_symbol(unit, reg);
    let sep = if symbol.starts_with('°') || symbol.starts_with('%') || symbol.is_empty() {
        ""
    } else {
        " "
    };
    format!("{}{sep}{symbol}", value.display_6sig())
}

fn slot_text(v: &SlotValue, reg: &Registries) -> String {
    match v {
        SlotValue::Resource { value } => label_for(value, reg),
        SlotValue::Literal { value } => value.lexical.clone(),
        SlotValue::Quantity { value, unit } => quantity_text(value, unit, reg),
    }
}

pub(crate) fn render_rosetta_label(
    r: &RosettaStatement,
    m: &RosettaMetamodel,
    reg: &Registries,
) -> Result<Rendering> {
    let mut text = String::new();
    let mut fills = Vec::new();
    for seg in parse_template(&m.label_template)? {
        match seg {
            Segment::Text(t) => text.push_str(&t),
            Segment::Placeholder(p) if p == SUBJECT_PLACEHOLDER => {
                text.push_str(&label_for(&r.subject, reg))
            }
            Segment::Placeholder(p) => {
                let idx = m
                    .slot_index(&p)
                    .ok_or_else(|| Error::NoTemplate(format!("placeholder `{p}` has no slot")))?;
                let fill = slot_text(&r.slots[idx], reg);
                text.push_str(&fill);
                fills.push(fill);
            }
        }
    }
    let degenerate = !fills.is_empty() && fills.iter().all(|f| f.is_empty());
    Ok(Rendering { text, degenerate })
}

fn render_rosetta_graph(
    r: &RosettaStatement,
    m: &RosettaMetamodel,
    reg: &Registries,
) -> Result<DisplayGraph> {
    let mut g = DisplayGraph::default();
    g.nodes.push(DisplayNode {
        id: "subject".into(),
        label: label_for(&r.subject, reg),
        role: "subject".into(),
    });
    for seg in parse_template(&m.label_template)? {
        let Segment::Placeholder(p) = seg else {
            continue;
        };
        if p == SUBJECT_PLACEHOLDER {
            continue;
        }
        let idx = m.slot_index(&p).expect("validated template");
        let id = format!("slot:{p}");
        match &r.slots[idx] {
            SlotValue::Quantity { value, unit } => {
                g.nodes.push(DisplayNode {
                    id: id.clone(),
                    label: value.display_6sig(),
                    role: "value".into(),
                });
                g.nodes.push(DisplayNode {
                    id: format!("{id}:unit"),
                    label: unit_symbol(unit, reg),
                    role: "unit".into(),
                });
                g.edges.push(DisplayEdge {
                    from: "subject".into(),
                    to: id.clone(),
                    label: p.clone(),
                });
                g.edges.push(DisplayEdge {
                    from: id.clone(),
                    to: format!("{id}:unit"),
                    label: "unit".into(),
                });
            }
            other => {
                let role = if matches!(other, SlotValue::Resource { .. }) {
                    "resource"
                } else {
                    "literal"
                };
                g.nodes.push(DisplayNode {
                    id: id.clone(),
                    label: slot_text(other, reg),
                    role: role.into(),
                });
                g.edges.push(DisplayEdge {
                    from: "subject".into(),
                    to: id,
                    label: p.clone(),
                });
            }
        }
    }
    Ok(g)
}

/// Renders a rosetta statement directly.
pub fn render_rosetta(
    r: &RosettaStatement,
    mode: RenderMode,
    reg: &Registries,
) -> Result<RenderOutput> {
    let m = reg
        .metamodel(&r.metamodel)
        .ok_or_else(|| Error::NoTemplate(r.metamodel.to_string()))?;
    Ok(match mode {
        RenderMode::Label => RenderOutput::Label(render_rosetta_label(r, m, reg)?),
        RenderMode::Graph => RenderOutput::Graph(render_rosetta_graph(r, m, reg)?),
        RenderMode::Table => {
            let row = from_rosetta(r, m, Form::Tabular, reg)?;
            let row = row.as_tabular().expect("tabular requested");
            RenderOutput::Table(TableView {
                schema: row.schema.clone(),
                columns: row.cells.iter().map(|(c, _)| c.clone()).collect(),
                values: row.cells.iter().map(|(_, v)| v.clone()).collect(),
            })
        }
    })
}

/// Renders a statement unit's content as a dynamic label, graph or table.
pub fn render(unit: &StatementUnit, mode: RenderMode, reg: &Registries) -> Result<RenderOutput> {
    let schema = unit
        .meta
        .schema_ref
        .as_ref()
        .ok_or_else(|| Error::NoTemplate(format!("unit {} declares no schema", unit.gupri)))?;
    let m = reg
        .metamodel(schema)
        .ok_or_else(|| Error::NoTemplate(schema.to_string()))?;
    let r = match unit.manifestation(Form::Rosetta) {
        Some(rosetta) => to_rosetta(rosetta, m, reg)?,
        None => to_rosetta(unit.canonical(), m, reg)?,
    };
    render_rosetta(&r, mode, reg)
}
