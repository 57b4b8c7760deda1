//! Deterministic Turtle output.

use std::fmt::Write;

use super::{Graph, Iri, Literal, Subject, Term, Triple};
use crate::vocab::rdf;

/// Renders `graph` as Turtle. Prefixes declared on the graph are emitted in
/// name order and used to abbreviate IRIs; subjects are grouped and emitted in
/// graph order. Output depends only on the graph value.
pub fn serialize_turtle(graph: &Graph) -> String {
    let mut out = String::new();
    let prefixes: Vec<(&str, &str)> = graph
        .prefixes()
        .iter()
        .map(|(p, ns)| (p.as_str(), ns.as_str()))
        .collect();
    for (prefix, ns) in &prefixes {
        let _ = writeln!(out, "@prefix {prefix}: <{}> .", escape_iri(ns));
    }

    let mut current: Option<&Subject> = None;
    let mut current_predicate: Option<&Iri> = None;
    for Triple {
        subject,
        predicate,
        object,
    } in graph.iter()
    {
        if current != Some(subject) {
            if current.is_some() {
                out.push_str(" .\n");
            }
            out.push('\n');
            out.push_str(&render_subject(subject, &prefixes));
            out.push(' ');
            out.push_str(&render_predicate(predicate, &prefixes));
            current = Some(subject);
            current_predicate = Some(predicate);
        } else if current_predicate != Some(predicate) {
            out.push_str(" ;\n    ");
            out.push_str(&render_predicate(predicate, &prefixes));
            current_predicate = Some(predicate);
        } else {
            out.push_str(" ,\n        ");
            out.push_str(&render_term(object, &prefixes));
            continue;
        }
        out.push(' ');
        out.push_str(&render_term(object, &prefixes));
    }
    if current.is_some() {
        out.push_str(" .\n");
    }
    out
}

fn render_subject(subject: &Subject, prefixes: &[(&str, &str)]) -> String {
    match subject {
        Subject::Iri(iri) => render_iri(iri, prefixes),
        Subject::BlankNode(label) => format!("_:{label}"),
    }
}

fn render_predicate(predicate: &Iri, prefixes: &[(&str, &str)]) -> String {
    if predicate.as_str() == rdf::TYPE {
        "a".to_owned()
    } else {
        render_iri(predicate, prefixes)
    }
}

fn render_term(term: &Term, prefixes: &[(&str, &str)]) -> String {
    match term {
        Term::Iri(iri) => render_iri(iri, prefixes),
        Term::BlankNode(label) => format!("_:{label}"),
        Term::Literal(lit) => render_literal(lit, prefixes),
    }
}

fn render_literal(lit: &Literal, prefixes: &[(&str, &str)]) -> String {
    let mut out = format!("\"{}\"", escape_string(lit.lexical()));
    if let Some(lang) = lit.language() {
        out.push('@');
        out.push_str(lang);
    } else if let Some(dt) = lit.datatype() {
        out.push_str("^^");
        out.push_str(&render_iri(dt, prefixes));
    }
    out
}

/// Uses the longest matching namespace whose remainder is a plain local name.
fn render_iri(iri: &Iri, prefixes: &[(&str, &str)]) -> String {
    let s = iri.as_str();
    prefixes
        .iter()
        .filter(|(_, ns)| !ns.is_empty() && s.starts_with(ns) && is_simple_local(&s[ns.len()..]))
        .max_by_key(|(_, ns)| ns.len())
        .map(|(prefix, ns)| format!("{prefix}:{}", &s[ns.len()..]))
        .unwrap_or_else(|| format!("<{}>", escape_iri(s)))
}

fn is_simple_local(local: &str) -> bool {
    let mut chars = local.chars();
    match chars.next() {
        None => true,
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {
            chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        }
        Some(_) => false,
    }
}

fn escape_iri(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if c <= ' ' || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\') {
            let _ = write!(out, "\\u{:04X}", c as u32);
        } else {
            out.push(c);
        }
    }
    out
}

pub(super) fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}
