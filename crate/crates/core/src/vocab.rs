//! Built-in vocabulary. All entries live under the `semunit` authority and
//! are derived from their names, so they are identical in every store.

use std::sync::LazyLock;

use crate::gupri::Gupri;
use crate::model::CompoundKind;

pub const AUTHORITY: &str = "semunit";

pub fn term(name: &str) -> Gupri {
    Gupri::named(AUTHORITY, "vocab", name)
}

macro_rules! vocab {
    ($($name:ident => $key:literal),+ $(,)?) => {
        $(pub static $name: LazyLock<Gupri> = LazyLock::new(|| term($key));)+
    };
}

vocab! {
    // Statement-node predicates used by graph manifestations of rosetta content.
    STATEMENT_OF => "statement-of",
    HAS_SUBJECT => "has-subject",
    // Fallback class and schemas for items no pattern claims.
    ORPHAN_STATEMENT_CLASS => "orphan-statement-unit",
    ORPHAN_GRAPH_SCHEMA => "orphan-graph-schema",
    ORPHAN_ROW_SCHEMA => "orphan-row-schema",
    SYSTEM_AGENT => "system-agent",
}

/// Default class for a compound unit of the given kind.
pub fn compound_class(kind: CompoundKind) -> Gupri {
    term(&format!("{}-unit", kind.token()))
}

pub fn compound_class_label(kind: CompoundKind) -> String {
    format!("{} unit", kind.token().replace('-', " "))
}
