//! Form generation and knowledge base population driven by an OWL ontology.
//!
//! The pipeline: parse a Turtle document into a [`Graph`], extract an
//! [`OntologyModel`], generate a [`FormStructure`] for a main class, and turn
//! filled-in [`Submission`]s back into triples.

pub mod detail;
pub mod error;
pub mod form;
pub mod model;
pub mod populate;
pub mod rdf;
pub mod repository;
pub mod vocab;

pub use error::{Error, Result};
pub use model::{
    extract_model, ApplicableProperty, ClassDecl, DomainExpr, Individual, OntologyModel,
    PropertyDecl, PropertyKind, PropertySource,
};
pub use rdf::{graph_union, parse_turtle, serialize_turtle, Graph, Iri, Literal, Subject, Term, Triple};
pub use form::{
    diff_forms, generate_form, Choice, CycleDegraded, FormConfig, FormElement, FormStructure,
    GeneratedForm, InlinePair, Widget,
};
pub use populate::{
    mint_iri, populate, prefill, update, LiteralValue, Minted, PopulationResult, Submission,
    ValueEntry,
};
pub use detail::{ontology_detail, ClassNode, IndividualRow, OntologyDetail, PropertyRow};
pub use repository::{OntologyRecord, Repository, Upload};
