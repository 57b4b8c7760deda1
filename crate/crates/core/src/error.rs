use std::io;

use thiserror::Error;

use crate::rdf::Iri;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("undeclared prefix '{prefix}:' at line {line}, column {column}")]
    UnknownPrefix {
        prefix: String,
        line: usize,
        column: usize,
    },

    #[error("inconsistent ontology: {0}")]
    Model(String),

    #[error("unknown class {0}")]
    UnknownClass(Iri),

    #[error("unknown individual {0}")]
    UnknownIndividual(Iri),

    #[error("individual {individual} is not an instance of {expected}")]
    TypeMismatch { individual: Iri, expected: Iri },

    #[error("forms for different classes: {left} and {right}")]
    MismatchedClass { left: Iri, right: Iri },

    #[error("invalid value for {}: {reason}", property.as_ref().map_or("submission", |p| p.as_str()))]
    Validation {
        property: Option<Iri>,
        reason: String,
    },

    #[error("cannot retract intermediate {intermediate}: still referenced by {referrer}")]
    OrphanRetractionConflict { intermediate: Iri, referrer: String },

    #[error("no ontology with id '{0}'")]
    NotFound(String),

    #[error("storage failure: {0}")]
    Storage(#[from] io::Error),

    #[error("malformed stored document: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(property: &Iri, reason: impl Into<String>) -> Self {
        Error::Validation {
            property: Some(property.clone()),
            reason: reason.into(),
        }
    }

    /// True for errors raised while reading a Turtle document.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::UnknownPrefix { .. })
    }
}
