#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};
use std::path::PathBuf;

use ontoforms_core::vocab::{owl, rdfs};
use ontoforms_core::{extract_model, parse_turtle, DomainExpr, Graph, Iri, OntologyModel, Subject, Term};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
}

pub fn fixture_graph(name: &str) -> Graph {
    parse_turtle(&fixture_text(name)).unwrap()
}

pub fn fixture_model(name: &str) -> OntologyModel {
    extract_model(fixture_graph(name)).unwrap()
}

pub const FOOD: &str = "http://www.w3.org/TR/2003/PR-owl-guide-20031209/food#";
pub const WINE: &str = "http://www.w3.org/TR/2003/PR-owl-guide-20031209/wine#";

pub fn food(local: &str) -> Iri {
    Iri::new(format!("{FOOD}{local}"))
}

pub fn wine(local: &str) -> Iri {
    Iri::new(format!("{WINE}{local}"))
}

/// Named-to-named edges of `predicate` read straight from the graph.
pub fn raw_edges(graph: &Graph, predicate: &str) -> Vec<(Iri, Iri)> {
    graph
        .iter()
        .filter(|t| t.predicate.as_str() == predicate)
        .filter_map(|t| match (&t.subject, &t.object) {
            (Subject::Iri(s), Term::Iri(o)) => Some((s.clone(), o.clone())),
            _ => None,
        })
        .collect()
}

/// Breadth-first search over subclass edges and equivalence edges in both
/// directions, plus owl:Thing.
pub fn bfs_subsumers(graph: &Graph, class: &Iri) -> BTreeSet<Iri> {
    let sub = raw_edges(graph, rdfs::SUB_CLASS_OF);
    let eq = raw_edges(graph, owl::EQUIVALENT_CLASS);
    let mut seen = BTreeSet::from([class.clone()]);
    let mut queue = VecDeque::from([class.clone()]);
    while let Some(c) = queue.pop_front() {
        let mut next: Vec<Iri> = sub.iter().filter(|(s, _)| *s == c).map(|(_, o)| o.clone()).collect();
        next.extend(eq.iter().filter(|(s, _)| *s == c).map(|(_, o)| o.clone()));
        next.extend(eq.iter().filter(|(_, o)| *o == c).map(|(s, _)| s.clone()));
        for n in next {
            if seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    seen.insert(Iri::new(owl::THING));
    seen
}

/// Straightforward recursive reading of a domain expression.
pub fn oracle_admits(domain: &DomainExpr, supers: &BTreeSet<Iri>) -> bool {
    match domain {
        DomainExpr::Unspecified | DomainExpr::Thing => true,
        DomainExpr::Named(c) => supers.contains(c),
        DomainExpr::UnionOf(ms) => ms.iter().any(|m| oracle_admits(m, supers)),
        DomainExpr::IntersectionOf(ms) => ms.iter().all(|m| oracle_admits(m, supers)),
    }
}
