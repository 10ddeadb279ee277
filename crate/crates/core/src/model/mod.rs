//! Semantic units: statement units carry content, compound units only
//! reference other units by GUPRI.

mod literal;
mod manifestation;

use std::collections::BTreeMap;
use std::fmt;

use chrono::{DateTime, TimeZone, Utc};
use serde::{Deserialize, Serialize};

pub use literal::{Datatype, Decimal, Literal};
pub use manifestation::{
    canonicalize, decode_canonical, ContentManifestation, Form, GraphContent, Object,
    RosettaStatement, SlotValue, SourceRef, TabularRow, TextSnippet, Triple,
};

use crate::error::{Error, Result};
use crate::gupri::Gupri;
use crate::syntax::iri;

/// UTC timestamp with second resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(i64);

impl Timestamp {
    pub fn from_unix(seconds: i64) -> Self {
        Timestamp(seconds)
    }

    pub fn now() -> Self {
        Timestamp(Utc::now().timestamp())
    }

    pub fn unix(self) -> i64 {
        self.0
    }

    pub fn parse(text: &str) -> Result<Self> {
        let dt = DateTime::parse_from_rfc3339(text)
            .map_err(|e| Error::Validation(format!("bad timestamp `{text}`: {e}")))?;
        let ts = Timestamp(dt.timestamp());
        if ts.to_string() != text {
            return Err(Error::Validation(format!(
                "timestamp `{text}` must be UTC with second resolution (YYYY-MM-DDTHH:MM:SSZ)"
            )));
        }
        Ok(ts)
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dt = Utc.timestamp_opt(self.0, 0).single().expect("in range");
        write!(f, "{}", dt.format("%Y-%m-%dT%H:%M:%SZ"))
    }
}

impl Serialize for Timestamp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Timestamp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Timestamp::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// A license given either as a GUPRI or as a plain token such as `CC-BY-4.0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum License {
    Gupri(Gupri),
    Token(String),
}

impl License {
    pub fn parse(text: &str) -> Self {
        Gupri::parse(text)
            .map(License::Gupri)
            .unwrap_or_else(|_| License::Token(text.to_string()))
    }
}

impl fmt::Display for License {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            License::Gupri(g) => write!(f, "{g}"),
            License::Token(t) => f.write_str(t),
        }
    }
}

impl Serialize for License {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for License {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(License::parse(&String::deserialize(d)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LogicalFramework {
    None,
    DescriptionLogic,
    FirstOrder,
    Other(String),
}

impl LogicalFramework {
    pub fn token(&self) -> String {
        match self {
            LogicalFramework::None => "none".into(),
            LogicalFramework::DescriptionLogic => "description-logic".into(),
            LogicalFramework::FirstOrder => "first-order".into(),
            LogicalFramework::Other(t) => format!("other:{t}"),
        }
    }

    pub fn parse(token: &str) -> Result<Self> {
        Ok(match token {
            "none" => LogicalFramework::None,
            "description-logic" => LogicalFramework::DescriptionLogic,
            "first-order" => LogicalFramework::FirstOrder,
            _ => match token.strip_prefix("other:") {
                Some(t) if !t.is_empty() => LogicalFramework::Other(t.to_string()),
                _ => {
                    return Err(Error::Validation(format!(
                        "unknown logical framework `{token}`"
                    )))
                }
            },
        })
    }
}

impl Serialize for LogicalFramework {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.token())
    }
}

impl<'de> Deserialize<'de> for LogicalFramework {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        LogicalFramework::parse(&String::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

macro_rules! token_enum {
    ($(#[$m:meta])* $name:ident { $($variant:ident => $tok:literal),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $tok)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn token(self) -> &'static str {
                match self { $($name::$variant => $tok),+ }
            }

            pub fn parse(token: &str) -> Result<Self> {
                match token {
                    $($tok => Ok($name::$variant),)+
                    _ => Err(Error::Validation(format!(
                        concat!("unknown ", stringify!($name), " `{}`"), token
                    ))),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.token())
            }
        }
    };
}

token_enum!(
    /// Semantic type of the proposition a statement unit carries.
    Typology {
        Assertional => "assertional",
        Contingent => "contingent",
        Prototypical => "prototypical",
        Universal => "universal",
        Interrogative => "interrogative",
        Directive => "directive",
        DirectiveConditional => "directive-conditional",
        Epistemic => "epistemic",
    }
);

token_enum!(CompoundKind {
    Item => "item",
    ItemGroup => "item-group",
    GranularityTree => "granularity-tree",
    GranularItemGroup => "granular-item-group",
    Context => "context",
    LogicalArgument => "logical-argument",
    StandardInformation => "standard-information",
});

token_enum!(Frame {
    SpatioStructural => "spatio-structural",
    Functional => "functional",
    Historical => "historical",
});

token_enum!(ArgumentRole {
    Premise => "premise",
    Conclusion => "conclusion",
});

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct MetaRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub creator: Option<Gupri>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub author: Option<Gupri>,
    pub created_at: Timestamp,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub license: Option<License>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logical_framework: Option<LogicalFramework>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_ref: Option<Gupri>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub statement_typology: Option<Typology>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub source_refs: Vec<Gupri>,
    /// Opaque key/value pairs; never scored.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, String>,
}

impl MetaRecord {
    pub fn new(creator: Gupri, created_at: Timestamp) -> Self {
        Self {
            creator: Some(creator),
            author: None,
            created_at,
            license: None,
            logical_framework: None,
            schema_ref: None,
            statement_typology: None,
            source_refs: Vec::new(),
            extra: BTreeMap::new(),
        }
    }

    pub fn with_license(mut self, license: License) -> Self {
        self.license = Some(license);
        self
    }

    pub fn with_schema(mut self, schema: Gupri) -> Self {
        self.schema_ref = Some(schema);
        self
    }

    pub fn with_framework(mut self, framework: LogicalFramework) -> Self {
        self.logical_framework = Some(framework);
        self
    }

    pub fn with_typology(mut self, typology: Typology) -> Self {
        self.statement_typology = Some(typology);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct StatementUnit {
    pub gupri: Gupri,
    pub class_ref: Gupri,
    pub subject_ref: Gupri,
    pub typology: Typology,
    pub manifestations: BTreeMap<Form, ContentManifestation>,
    pub canonical_form: Form,
    pub meta: MetaRecord,
}

impl StatementUnit {
    pub fn canonical(&self) -> &ContentManifestation {
        self.manifestations
            .get(&self.canonical_form)
            .expect("canonical form is always present")
    }

    pub fn manifestation(&self, form: Form) -> Option<&ContentManifestation> {
        self.manifestations.get(&form)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Member {
    pub gupri: Gupri,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<ArgumentRole>,
}

impl Member {
    pub fn plain(gupri: Gupri) -> Self {
        Self { gupri, role: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct CompoundUnit {
    pub gupri: Gupri,
    pub class_ref: Gupri,
    pub kind: CompoundKind,
    pub members: Vec<Member>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<Frame>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criterion_ref: Option<Gupri>,
    pub meta: MetaRecord,
}

impl CompoundUnit {
    pub fn member_gupris(&self) -> impl Iterator<Item = &Gupri> {
        self.members.iter().map(|m| &m.gupri)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "unit", rename_all = "kebab-case")]
pub enum Unit {
    Statement(StatementUnit),
    Compound(CompoundUnit),
}

impl Unit {
    pub fn gupri(&self) -> &Gupri {
        match self {
            Unit::Statement(s) => &s.gupri,
            Unit::Compound(c) => &c.gupri,
        }
    }

    pub fn class_ref(&self) -> &Gupri {
        match self {
            Unit::Statement(s) => &s.class_ref,
            Unit::Compound(c) => &c.class_ref,
        }
    }

    pub fn meta(&self) -> &MetaRecord {
        match self {
            Unit::Statement(s) => &s.meta,
            Unit::Compound(c) => &c.meta,
        }
    }

    pub fn as_statement(&self) -> Option<&StatementUnit> {
        match self {
            Unit::Statement(s) => Some(s),
            Unit::Compound(_) => None,
        }
    }

    pub fn as_compound(&self) -> Option<&CompoundUnit> {
        match self {
            Unit::Compound(c) => Some(c),
            Unit::Statement(_) => None,
        }
    }

    pub fn is_statement(&self) -> bool {
        matches!(self, Unit::Statement(_))
    }

    /// Full deterministic encoding of the unit, meta-record included.
    pub fn fingerprint(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("units always serialize")
    }
}

/// Digest input for a statement unit's deterministic GUPRI. Only the class
/// and the canonical content take part; the meta-record never does.
pub fn statement_seed(class_ref: &Gupri, content: &ContentManifestation) -> Result<Vec<u8>> {
    let mut seed = format!("statement-unit\nclass {}\n", iri(class_ref)).into_bytes();
    seed.extend(canonicalize(content)?);
    Ok(seed)
}

/// Digest input for a compound unit's deterministic GUPRI.
pub fn compound_seed(
    kind: CompoundKind,
    class_ref: &Gupri,
    members: &[Member],
    frame: Option<Frame>,
    criterion: Option<&Gupri>,
) -> Vec<u8> {
    let mut s = format!("compound-unit\nkind {kind}\nclass {}\n", iri(class_ref));
    if let Some(f) = frame {
        s.push_str(&format!("frame {f}\n"));
    }
    if let Some(c) = criterion {
        s.push_str(&format!("criterion {}\n", iri(c)));
    }
    for m in members {
        match m.role {
            Some(role) => s.push_str(&format!("member {} {role}\n", iri(&m.gupri))),
            None => s.push_str(&format!("member {}\n", iri(&m.gupri))),
        }
    }
    s.into_bytes()
}
