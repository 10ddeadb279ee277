//! Read-only views over stored units: labels, member listings, renderings
//! and class inventories. These are the bodies the facade serves.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fairness::inventory_classes;
use crate::gupri::Gupri;
use crate::model::{ArgumentRole, CompoundKind, Unit};
use crate::rosetta::{
    render, DisplayEdge, DisplayGraph, DisplayNode, RenderMode, RenderOutput, Rendering,
};
use crate::store::UnitStore;

/// A one-line label: the rendered statement where possible, otherwise a
/// description built from class and subject labels.
pub fn unit_label(unit: &Unit, store: &UnitStore) -> String {
    let reg = store.registries();
    let label = |g| {
        reg.label_of(g)
            .map(str::to_string)
            .unwrap_or_else(|| g.to_string())
    };
    match unit {
        Unit::Statement(s) => {
            if let Ok(RenderOutput::Label(r)) = render(s, RenderMode::Label, reg) {
                return r.text;
            }
            if let Some(t) = s.manifestations.values().find_map(|m| m.as_text()) {
                return t.text.clone();
            }
            format!("{} about {}", label(&s.class_ref), label(&s.subject_ref))
        }
        Unit::Compound(c) if c.kind == CompoundKind::Item => {
            let subject = c.members.iter().find_map(|m| {
                store
                    .get(&m.gupri)?
                    .as_statement()
                    .map(|s| s.subject_ref.clone())
            });
            match subject {
                Some(s) => format!("{} item unit", label(&s)),
                None => format!("{} with {} members", label(&c.class_ref), c.members.len()),
            }
        }
        Unit::Compound(c) => format!("{} with {} members", label(&c.class_ref), c.members.len()),
    }
}

fn unit_kind(unit: &Unit) -> String {
    match unit {
        Unit::Statement(_) => "statement".into(),
        Unit::Compound(c) => c.kind.token().to_string(),
    }
}

/// One member of a compound, one level deep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberView {
    pub gupri: Gupri,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub role: Option<ArgumentRole>,
    /// `statement` or the compound kind token.
    pub kind: String,
    pub class: Gupri,
    pub class_label: String,
    pub label: String,
    /// Number of direct members; zero for statements.
    pub members: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitView {
    pub gupri: Gupri,
    pub kind: String,
    pub label: String,
    pub class_label: String,
    pub members: Vec<MemberView>,
    pub unit: Unit,
}

fn member_view(g: &Gupri, role: Option<ArgumentRole>, store: &UnitStore) -> Result<MemberView> {
    let unit = store
        .get(g)
        .ok_or_else(|| Error::DanglingMember(g.clone()))?;
    let reg = store.registries();
    Ok(MemberView {
        gupri: g.clone(),
        role,
        kind: unit_kind(unit),
        class: unit.class_ref().clone(),
        class_label: reg
            .label_of(unit.class_ref())
            .unwrap_or(unit.class_ref().as_str())
            .to_string(),
        label: unit_label(unit, store),
        members: match unit {
            Unit::Compound(c) => c.members.len(),
            Unit::Statement(_) => 0,
        },
    })
}

/// Direct members of a unit in declared order; empty for statements.
pub fn members(g: &Gupri, store: &UnitStore) -> Result<Vec<MemberView>> {
    match store.resolve(g)? {
        Unit::Statement(_) => Ok(Vec::new()),
        Unit::Compound(c) => c
            .members
            .iter()
            .map(|m| member_view(&m.gupri, m.role, store))
            .collect(),
    }
}

pub fn unit_view(g: &Gupri, store: &UnitStore) -> Result<UnitView> {
    let unit = store.resolve(g)?;
    let reg = store.registries();
    Ok(UnitView {
        gupri: g.clone(),
        kind: unit_kind(unit),
        label: unit_label(unit, store),
        class_label: reg
            .label_of(unit.class_ref())
            .unwrap_or(unit.class_ref().as_str())
            .to_string(),
        members: members(g, store)?,
        unit: unit.clone(),
    })
}

/// Renders any unit. Statements use their metamodel templates; compounds
/// render as their label or as a star of member labels.
pub fn render_unit(g: &Gupri, mode: RenderMode, store: &UnitStore) -> Result<RenderOutput> {
    let unit = store.resolve(g)?;
    match (unit, mode) {
        (Unit::Statement(s), _) => render(s, mode, store.registries()),
        (Unit::Compound(_), RenderMode::Label) => Ok(RenderOutput::Label(Rendering {
            text: unit_label(unit, store),
            degenerate: false,
        })),
        (Unit::Compound(_), RenderMode::Graph) => {
            let mut graph = DisplayGraph::default();
            graph.nodes.push(DisplayNode {
                id: g.to_string(),
                label: unit_label(unit, store),
                role: "unit".into(),
            });
            for m in members(g, store)? {
                graph.edges.push(DisplayEdge {
                    from: g.to_string(),
                    to: m.gupri.to_string(),
                    label: match m.role {
                        Some(r) => format!("has {}", r.token()),
                        None => "has member".into(),
                    },
                });
                graph.nodes.push(DisplayNode {
                    id: m.gupri.to_string(),
                    label: m.label,
                    role: "member".into(),
                });
            }
            Ok(RenderOutput::Graph(graph))
        }
        (Unit::Compound(_), RenderMode::Table) => Err(Error::Kind(format!(
            "compound unit {g} has no table rendering"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InventoryEntry {
    pub class: Gupri,
    pub label: String,
    pub count: usize,
}

/// Classes instantiated under `root`, most frequent first, ties by label.
pub fn inventory(root: &Gupri, store: &UnitStore) -> Result<Vec<InventoryEntry>> {
    let reg = store.registries();
    let mut out: Vec<InventoryEntry> = inventory_classes(root, store)?
        .into_iter()
        .map(|(class, count)| InventoryEntry {
            label: reg.label_of(&class).unwrap_or(class.as_str()).to_string(),
            class,
            count,
        })
        .collect();
    out.sort_by(|a, b| {
        b.count
            .cmp(&a.count)
            .then_with(|| a.label.cmp(&b.label))
            .then_with(|| a.class.cmp(&b.class))
    });
    Ok(out)
}
