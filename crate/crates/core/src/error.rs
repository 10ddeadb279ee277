use std::path::PathBuf;

use thiserror::Error;

use crate::gupri::Gupri;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("missing input: {0}")]
    MissingInput(&'static str),
    #[error("invalid identifier `{0}`")]
    InvalidGupri(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("unknown class {0}")]
    UnknownClass(Gupri),
    #[error("schema violation: {0}")]
    SchemaViolation(String),
    #[error("membership cycle through {0}")]
    Cycle(Gupri),
    #[error("item members do not share one subject: {0} vs {1}")]
    SubjectMismatch(Gupri, Gupri),
    #[error("dangling member {0}")]
    DanglingMember(Gupri),
    #[error("member {0} has no mergeable graph content")]
    NonMergeableMember(Gupri),
    #[error("malformed pattern: {0}")]
    Pattern(String),
    #[error("not a tree: {0}")]
    Structural(String),
    #[error("criterion violation: {0}")]
    CriterionViolation(String),
    #[error("unclassified entity category {0}")]
    Unclassified(Gupri),
    #[error("binding error: {0}")]
    Binding(String),
    #[error("no crosswalk: {0}")]
    NoCrosswalk(String),
    #[error("unparseable sentence: {0:?}")]
    UnparseableSentence(String),
    #[error("no label template for schema {0}")]
    NoTemplate(String),
    #[error("kind error: {0}")]
    Kind(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("format violation: {0}")]
    FormatViolation(String),
    #[error("corrupted store file {file}: {reason}")]
    Corruption { file: PathBuf, reason: String },
    #[error("weight count mismatch: expected {expected}, got {got}")]
    Weight { expected: usize, got: usize },
    #[error("not found: {0}")]
    NotFound(String),
    #[error("rejected: {0}")]
    Rejected(String),
    #[error("workflow step {step} failed: {message}")]
    Step { step: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Stable kebab-case name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MissingInput(_) => "missing-input",
            Error::InvalidGupri(_) => "invalid-gupri",
            Error::Validation(_) => "validation",
            Error::UnknownClass(_) => "unknown-class",
            Error::SchemaViolation(_) => "schema-violation",
            Error::Cycle(_) => "cycle",
            Error::SubjectMismatch(..) => "subject-mismatch",
            Error::DanglingMember(_) => "dangling-member",
            Error::NonMergeableMember(_) => "non-mergeable-member",
            Error::Pattern(_) => "pattern",
            Error::Structural(_) => "structural",
            Error::CriterionViolation(_) => "criterion-violation",
            Error::Unclassified(_) => "unclassified",
            Error::Binding(_) => "binding",
            Error::NoCrosswalk(_) => "no-crosswalk",
            Error::UnparseableSentence(_) => "unparseable-sentence",
            Error::NoTemplate(_) => "no-template",
            Error::Kind(_) => "kind",
            Error::Syntax { .. } => "syntax",
            Error::FormatViolation(_) => "format-violation",
            Error::Corruption { .. } => "corruption",
            Error::Weight { .. } => "weight",
            Error::NotFound(_) => "not-found",
            Error::Rejected(_) => "rejected",
            Error::Step { .. } => "step",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }

    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}
