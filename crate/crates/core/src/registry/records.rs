use serde::{Deserialize, Serialize};

use crate::gupri::Gupri;
use crate::model::{CompoundKind, Form};
use crate::rosetta::RosettaMetamodel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MappingKind {
    Exact,
    Close,
    Broad,
    Narrow,
    Related,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct EntityMapping {
    pub target: Gupri,
    pub kind: MappingKind,
    /// GUPRI of the mapping's own record.
    pub record: Gupri,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct TermRecord {
    pub gupri: Gupri,
    pub label: String,
    #[serde(default)]
    pub definition: String,
    #[serde(default)]
    pub synonyms: Vec<String>,
    #[serde(default)]
    pub languages: Vec<String>,
    /// Rendering symbol for units of measure, e.g. `grams` or `°C`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<String>,
    #[serde(default)]
    pub mappings: Vec<EntityMapping>,
}

impl TermRecord {
    pub fn new(gupri: Gupri, label: impl Into<String>) -> Self {
        Self {
            gupri,
            label: label.into(),
            definition: String::new(),
            synonyms: Vec::new(),
            languages: vec!["en".into()],
            symbol: None,
            mappings: Vec::new(),
        }
    }

    pub fn with_symbol(mut self, symbol: impl Into<String>) -> Self {
        self.symbol = Some(symbol.into());
        self
    }
}

/// A first-class record for one entity mapping.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct MappingRecord {
    pub gupri: Gupri,
    pub source: Gupri,
    pub target: Gupri,
    pub kind: MappingKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "category", content = "kind", rename_all = "kebab-case")]
pub enum ClassCategory {
    Statement,
    Compound(CompoundKind),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ClassRecord {
    pub gupri: Gupri,
    pub label: String,
    pub category: ClassCategory,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<Gupri>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
#[allow(clippy::large_enum_variant)]
pub enum SchemaBody {
    RosettaMetamodel(RosettaMetamodel),
    /// A schema we only point at (SHACL shape, SQL DDL, JSON Schema...).
    ExternalOpaque {
        pointer: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangelogEntry {
    pub version: u32,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct SchemaRecord {
    pub gupri: Gupri,
    pub label: String,
    pub body: SchemaBody,
    #[serde(default)]
    pub version: u32,
    #[serde(default)]
    pub crosswalk_records: Vec<Gupri>,
    #[serde(default)]
    pub changelog: Vec<ChangelogEntry>,
}

impl SchemaRecord {
    pub fn rosetta(metamodel: RosettaMetamodel) -> Self {
        Self {
            gupri: metamodel.gupri.clone(),
            label: metamodel.name.clone(),
            body: SchemaBody::RosettaMetamodel(metamodel),
            version: 0,
            crosswalk_records: Vec::new(),
            changelog: Vec::new(),
        }
    }

    pub fn external(gupri: Gupri, label: impl Into<String>, pointer: impl Into<String>) -> Self {
        Self {
            gupri,
            label: label.into(),
            body: SchemaBody::ExternalOpaque {
                pointer: pointer.into(),
            },
            version: 0,
            crosswalk_records: Vec::new(),
            changelog: Vec::new(),
        }
    }

    pub fn metamodel(&self) -> Option<&RosettaMetamodel> {
        match &self.body {
            SchemaBody::RosettaMetamodel(m) => Some(m),
            SchemaBody::ExternalOpaque { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "reason", rename_all = "kebab-case")]
pub enum Lossiness {
    Lossless,
    Lossy(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct CrosswalkRecord {
    pub gupri: Gupri,
    pub source_schema: Gupri,
    pub target_schema: Gupri,
    /// Source slot name to target slot (or column/field) name.
    pub slot_map: Vec<(String, String)>,
    pub lossiness: Lossiness,
}

/// Built-in operation keys. Operations are never uploaded code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", content = "to", rename_all = "kebab-case")]
pub enum BuiltinOp {
    Normalize,
    Crosswalk(Form),
    Render,
    Score,
    Validate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct OperationRecord {
    pub gupri: Gupri,
    pub name: String,
    pub compatible_schemas: Vec<Gupri>,
    pub executable: BuiltinOp,
    #[serde(default)]
    pub description: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepBinding {
    /// The step consumes the previous step's output units.
    Previous,
    /// The step consumes the workflow's original inputs.
    Inputs,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct WorkflowRecord {
    pub gupri: Gupri,
    pub name: String,
    pub steps: Vec<Gupri>,
    /// One binding per step; the first step always reads the inputs.
    #[serde(default)]
    pub bindings: Vec<StepBinding>,
}
