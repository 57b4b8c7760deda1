//! RDF terms, triples and an in-memory graph with set semantics.
//!
//! Graphs are ordered: triples iterate by subject, then predicate, then
//! object. Terms order first by kind (literal, IRI, blank node, which is the
//! order of their first rendered character) and then by content.

mod turtle;
mod writer;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use turtle::parse_turtle;
pub use writer::serialize_turtle;

/// An absolute IRI. Equality is byte equality of the string form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Self {
        Iri(value.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The part after the last `#`, or after the last `/` when there is no `#`.
    pub fn local_name(&self) -> &str {
        let s = self.0.as_str();
        if let Some(pos) = s.rfind('#') {
            &s[pos + 1..]
        } else if let Some(pos) = s.rfind('/') {
            &s[pos + 1..]
        } else {
            s
        }
    }

    /// Everything up to and including the last `#` or `/`.
    pub fn namespace(&self) -> &str {
        let s = self.0.as_str();
        let cut = s.rfind('#').or_else(|| s.rfind('/')).map_or(0, |p| p + 1);
        &s[..cut]
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Iri {
    fn from(value: &str) -> Self {
        Iri::new(value)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// A literal value. A literal carries either a datatype or a language tag,
/// never both; with neither it is a plain string.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Option<Iri>,
    language: Option<String>,
}

impl Literal {
    pub fn plain(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: None,
            language: None,
        }
    }

    /// A typed literal. `xsd:string` is folded into a plain literal since
    /// the two denote the same value.
    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        let datatype = (datatype.as_str() != crate::vocab::xsd::STRING).then_some(datatype);
        Literal {
            lexical: lexical.into(),
            datatype,
            language: None,
        }
    }

    /// A language-tagged string. Tags are lowercased.
    pub fn lang(lexical: impl Into<String>, language: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: None,
            language: Some(language.into().to_ascii_lowercase()),
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> Option<&Iri> {
        self.datatype.as_ref()
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    /// Datatype IRI as seen by RDF 1.1: plain literals are `xsd:string`,
    /// tagged ones `rdf:langString`.
    pub fn effective_datatype(&self) -> Iri {
        match (&self.datatype, &self.language) {
            (Some(dt), _) => dt.clone(),
            (None, Some(_)) => Iri::new(crate::vocab::rdf::LANG_STRING),
            (None, None) => Iri::new(crate::vocab::xsd::STRING),
        }
    }
}

/// Any RDF term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Literal(Literal),
    Iri(Iri),
    BlankNode(String),
}

impl Term {
    pub fn iri(value: impl Into<String>) -> Self {
        Term::Iri(Iri::new(value))
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::BlankNode(_))
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

impl From<Subject> for Term {
    fn from(s: Subject) -> Self {
        match s {
            Subject::Iri(iri) => Term::Iri(iri),
            Subject::BlankNode(b) => Term::BlankNode(b),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "<{iri}>"),
            Term::BlankNode(label) => write!(f, "_:{label}"),
            Term::Literal(lit) => {
                write!(f, "\"{}\"", writer::escape_string(lit.lexical()))?;
                if let Some(lang) = lit.language() {
                    write!(f, "@{lang}")
                } else if let Some(dt) = lit.datatype() {
                    write!(f, "^^<{dt}>")
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Subject position: an IRI or a blank node, never a literal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subject {
    Iri(Iri),
    BlankNode(String),
}

impl Subject {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Subject::Iri(iri) => Some(iri),
            Subject::BlankNode(_) => None,
        }
    }

    /// The same node in object position.
    pub fn to_term(&self) -> Term {
        self.clone().into()
    }
}

impl From<Iri> for Subject {
    fn from(iri: Iri) -> Self {
        Subject::Iri(iri)
    }
}

impl TryFrom<Term> for Subject {
    type Error = Literal;

    fn try_from(term: Term) -> Result<Self, Literal> {
        match term {
            Term::Iri(iri) => Ok(Subject::Iri(iri)),
            Term::BlankNode(b) => Ok(Subject::BlankNode(b)),
            Term::Literal(lit) => Err(lit),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Subject,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: impl Into<Subject>, predicate: Iri, object: impl Into<Term>) -> Self {
        Triple {
            subject: subject.into(),
            predicate,
            object: object.into(),
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <{}> {} .", self.subject.to_term(), self.predicate, self.object)
    }
}

/// A set of triples plus the prefix bindings declared by the document it
/// came from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    triples: BTreeSet<Triple>,
    prefixes: BTreeMap<String, Iri>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a triple. Returns false when it was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        self.triples.remove(triple)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn triples(&self) -> &BTreeSet<Triple> {
        &self.triples
    }

    pub fn prefixes(&self) -> &BTreeMap<String, Iri> {
        &self.prefixes
    }

    /// Binds `prefix`, replacing any previous binding.
    pub fn bind_prefix(&mut self, prefix: impl Into<String>, namespace: Iri) {
        self.prefixes.insert(prefix.into(), namespace);
    }

    /// Triples with the given subject, in graph order.
    pub fn with_subject<'a>(&'a self, subject: &'a Subject) -> impl Iterator<Item = &'a Triple> + 'a {
        let start = Triple {
            subject: subject.clone(),
            predicate: Iri(String::new()),
            object: Term::Literal(Literal::plain("")),
        };
        self.triples
            .range(start..)
            .take_while(move |t| &t.subject == subject)
    }

    /// Objects of `(subject, predicate, ?)`, in graph order.
    pub fn objects<'a>(
        &'a self,
        subject: &'a Subject,
        predicate: &'a str,
    ) -> impl Iterator<Item = &'a Term> + 'a {
        self.with_subject(subject)
            .filter(move |t| t.predicate.as_str() == predicate)
            .map(|t| &t.object)
    }

    /// Set union. Prefix bindings of `self` win over those of `other`.
    pub fn union(&self, other: &Graph) -> Graph {
        let mut out = self.clone();
        out.triples.extend(other.triples.iter().cloned());
        for (prefix, ns) in &other.prefixes {
            out.prefixes.entry(prefix.clone()).or_insert_with(|| ns.clone());
        }
        out
    }

    /// Every IRI in any position, used to avoid collisions when minting.
    pub fn iris(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        for t in &self.triples {
            if let Subject::Iri(s) = &t.subject {
                out.insert(s.as_str());
            }
            out.insert(t.predicate.as_str());
            match &t.object {
                Term::Iri(o) => {
                    out.insert(o.as_str());
                }
                Term::Literal(lit) => {
                    if let Some(dt) = lit.datatype() {
                        out.insert(dt.as_str());
                    }
                }
                Term::BlankNode(_) => {}
            }
        }
        out
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        self.triples.extend(iter);
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        Graph {
            triples: iter.into_iter().collect(),
            prefixes: BTreeMap::new(),
        }
    }
}

impl<'a> IntoIterator for &'a Graph {
    type Item = &'a Triple;
    type IntoIter = std::collections::btree_set::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

/// Free-function form of [`Graph::union`].
pub fn graph_union(a: &Graph, b: &Graph) -> Graph {
    a.union(b)
}
