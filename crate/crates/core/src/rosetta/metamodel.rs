use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gupri::Gupri;
use crate::model::Datatype;
use crate::vocab;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SlotKind {
    Resource,
    Literal { datatype: Datatype },
    Quantity { unit_category: Gupri },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotDef {
    pub name: String,
    #[serde(flatten)]
    pub kind: SlotKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct GraphSlotBinding {
    pub slot: String,
    pub predicate: Gupri,
    /// Quantity slots only: predicate linking the statement node to the unit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_predicate: Option<Gupri>,
}

/// Graph layout: one statement node typed by the metamodel, linked to the
/// subject and to every slot value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct GraphBinding {
    pub subject_predicate: Gupri,
    pub slots: Vec<GraphSlotBinding>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct TabularColumn {
    pub slot: String,
    pub column: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_column: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct TabularBinding {
    pub subject_column: String,
    pub columns: Vec<TabularColumn>,
}

impl TabularBinding {
    /// Column names in schema order.
    pub fn column_names(&self) -> Vec<&str> {
        let mut out = vec![self.subject_column.as_str()];
        for c in &self.columns {
            out.push(&c.column);
            if let Some(u) = &c.unit_column {
                out.push(u);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct RosettaMetamodel {
    pub gupri: Gupri,
    pub name: String,
    pub label_template: String,
    pub slots: Vec<SlotDef>,
    #[serde(default)]
    pub surface_patterns: Vec<String>,
    pub graph_binding: GraphBinding,
    pub tabular_binding: TabularBinding,
    #[serde(default)]
    pub version: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Text(String),
    Placeholder(String),
}

pub const SUBJECT_PLACEHOLDER: &str = "subject";

/// Splits a template into literal text and `{name}` placeholders.
pub fn parse_template(template: &str) -> Result<Vec<Segment>> {
    let mut out = Vec::new();
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        if open > 0 {
            out.push(Segment::Text(rest[..open].to_string()));
        }
        let after = &rest[open + 1..];
        let close = after.find('}').ok_or_else(|| {
            Error::SchemaViolation(format!("unclosed placeholder in `{template}`"))
        })?;
        let name = &after[..close];
        if name.is_empty()
            || !name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            return Err(Error::SchemaViolation(format!(
                "bad placeholder `{{{name}}}` in `{template}`"
            )));
        }
        if matches!(out.last(), Some(Segment::Placeholder(_))) {
            return Err(Error::SchemaViolation(format!(
                "adjacent placeholders without separating text in `{template}`"
            )));
        }
        out.push(Segment::Placeholder(name.to_string()));
        rest = &after[close + 1..];
    }
    if rest.contains('}') {
        return Err(Error::SchemaViolation(format!(
            "stray `}}` in `{template}`"
        )));
    }
    if !rest.is_empty() {
        out.push(Segment::Text(rest.to_string()));
    }
    Ok(out)
}

impl RosettaMetamodel {
    pub fn slot_index(&self, name: &str) -> Option<usize> {
        self.slots.iter().position(|s| s.name == name)
    }

    pub fn expected_placeholders(&self) -> BTreeSet<String> {
        let mut set: BTreeSet<String> = self.slots.iter().map(|s| s.name.clone()).collect();
        set.insert(SUBJECT_PLACEHOLDER.to_string());
        set
    }

    fn check_template(&self, template: &str) -> Result<()> {
        let segments = parse_template(template)?;
        let mut found = BTreeSet::new();
        for s in &segments {
            if let Segment::Placeholder(p) = s {
                if !found.insert(p.clone()) {
                    return Err(Error::SchemaViolation(format!(
                        "placeholder `{p}` repeated in `{template}`"
                    )));
                }
            }
        }
        if found != self.expected_placeholders() {
            return Err(Error::SchemaViolation(format!(
                "template `{template}` placeholders {found:?} differ from slots plus subject"
            )));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let mut names = BTreeSet::new();
        for s in &self.slots {
            if s.name == SUBJECT_PLACEHOLDER || !names.insert(s.name.as_str()) {
                return Err(Error::SchemaViolation(format!(
                    "duplicate or reserved slot name `{}`",
                    s.name
                )));
            }
        }
        self.check_template(&self.label_template)?;
        for p in &self.surface_patterns {
            self.check_template(p)?;
        }

        let mut predicates = BTreeSet::from([
            self.graph_binding.subject_predicate.clone(),
            vocab::STATEMENT_OF.clone(),
        ]);
        if predicates.len() != 2 {
            return Err(Error::SchemaViolation(
                "subject predicate is reserved".into(),
            ));
        }
        let mut covered = BTreeSet::new();
        for b in &self.graph_binding.slots {
            let slot = self
                .slots
                .iter()
                .find(|s| s.name == b.slot)
                .ok_or_else(|| {
                    Error::SchemaViolation(format!("graph binding for unknown slot `{}`", b.slot))
                })?;
            if !covered.insert(b.slot.as_str()) {
                return Err(Error::SchemaViolation(format!(
                    "slot `{}` bound twice in graph binding",
                    b.slot
                )));
            }
            let is_quantity = matches!(slot.kind, SlotKind::Quantity { .. });
            if is_quantity != b.unit_predicate.is_some() {
                return Err(Error::SchemaViolation(format!(
                    "slot `{}`: unit predicate required exactly for quantity slots",
                    b.slot
                )));
            }
            for p in std::iter::once(&b.predicate).chain(b.unit_predicate.as_ref()) {
                if !predicates.insert(p.clone()) {
                    return Err(Error::SchemaViolation(format!(
                        "predicate {p} reused in graph binding"
                    )));
                }
            }
        }
        if covered.len() != self.slots.len() {
            return Err(Error::SchemaViolation(
                "graph binding does not cover every slot".into(),
            ));
        }

        let mut columns = BTreeSet::from([self.tabular_binding.subject_column.as_str()]);
        let mut covered = BTreeSet::new();
        for c in &self.tabular_binding.columns {
            let slot = self
                .slots
                .iter()
                .find(|s| s.name == c.slot)
                .ok_or_else(|| {
                    Error::SchemaViolation(format!("tabular binding for unknown slot `{}`", c.slot))
                })?;
            if !covered.insert(c.slot.as_str()) {
                return Err(Error::SchemaViolation(format!(
                    "slot `{}` bound twice in tabular binding",
                    c.slot
                )));
            }
            let is_quantity = matches!(slot.kind, SlotKind::Quantity { .. });
            if is_quantity != c.unit_column.is_some() {
                return Err(Error::SchemaViolation(format!(
                    "slot `{}`: unit column required exactly for quantity slots",
                    c.slot
                )));
            }
            for col in std::iter::once(&c.column).chain(c.unit_column.as_ref()) {
                if col.is_empty() || !columns.insert(col.as_str()) {
                    return Err(Error::SchemaViolation(format!(
                        "column `{col}` empty or reused"
                    )));
                }
            }
        }
        if covered.len() != self.slots.len() {
            return Err(Error::SchemaViolation(
                "tabular binding does not cover every slot".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn template_segments() {
        let segs = parse_template("{subject} has a {quality} of {value}.").unwrap();
        assert_eq!(
            segs,
            vec![
                Segment::Placeholder("subject".into()),
                Segment::Text(" has a ".into()),
                Segment::Placeholder("quality".into()),
                Segment::Text(" of ".into()),
                Segment::Placeholder("value".into()),
                Segment::Text(".".into()),
            ]
        );
        assert!(parse_template("{a}{b}").is_err());
        assert!(parse_template("{open").is_err());
        assert!(parse_template("x } y").is_err());
    }
}
