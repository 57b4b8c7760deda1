//! Read-only overview of a model: class tree, properties table, individuals.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::model::{DomainExpr, OntologyModel, PropertyKind};
use crate::rdf::Iri;
use crate::vocab::owl;

pub const UNDEFINED: &str = "<undefined>";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassNode {
    pub iri: Iri,
    pub label: String,
    pub children: Vec<ClassNode>,
}

impl ClassNode {
    pub fn find(&self, iri: &Iri) -> Option<&ClassNode> {
        if &self.iri == iri {
            return Some(self);
        }
        self.children.iter().find_map(|c| c.find(iri))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyRow {
    pub property: Iri,
    pub domain: String,
    pub label: String,
    pub range: String,
    #[serde(rename = "type")]
    pub kind: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndividualRow {
    pub label: String,
    pub uri: Iri,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OntologyDetail {
    pub classes: ClassNode,
    pub properties: Vec<PropertyRow>,
    pub individuals: Vec<IndividualRow>,
}

pub fn ontology_detail(model: &OntologyModel) -> OntologyDetail {
    OntologyDetail {
        classes: class_tree(model),
        properties: property_rows(model),
        individuals: model
            .individuals_of(&Iri::new(owl::THING))
            .unwrap_or_default()
            .into_iter()
            .map(|(uri, label)| IndividualRow { label, uri })
            .collect(),
    }
}

fn sorted_by_label(model: &OntologyModel, mut classes: Vec<Iri>) -> Vec<Iri> {
    classes.sort_by_cached_key(|c| (model.label_of(c), c.clone()));
    classes
}

/// Tree under owl:Thing. A class with several parents appears under each;
/// classes only reachable through a subclass cycle hang off the root, and
/// the cycle is cut where it would revisit a class on the current path.
pub fn class_tree(model: &OntologyModel) -> ClassNode {
    let thing = Iri::new(owl::THING);
    let mut seen = BTreeSet::new();
    let mut path = Vec::new();
    let roots: Vec<Iri> = model
        .classes
        .values()
        .filter(|c| c.direct_supers.is_empty())
        .map(|c| c.iri.clone())
        .collect();
    let mut children: Vec<ClassNode> = sorted_by_label(model, roots)
        .into_iter()
        .map(|c| expand(model, c, &mut path, &mut seen))
        .collect();
    while let Some(stray) = model.classes.keys().find(|c| !seen.contains(*c)).cloned() {
        children.push(expand(model, stray, &mut path, &mut seen));
    }
    ClassNode {
        label: model.label_of(&thing),
        iri: thing,
        children,
    }
}

fn expand(model: &OntologyModel, class: Iri, path: &mut Vec<Iri>, seen: &mut BTreeSet<Iri>) -> ClassNode {
    seen.insert(class.clone());
    path.push(class.clone());
    let subs: Vec<Iri> = model
        .direct_subclasses_of(&class)
        .into_iter()
        .filter(|s| !path.contains(s))
        .collect();
    let children = sorted_by_label(model, subs)
        .into_iter()
        .map(|s| expand(model, s, path, seen))
        .collect();
    path.pop();
    ClassNode {
        label: model.label_of(&class),
        iri: class,
        children,
    }
}

pub fn render_domain(model: &OntologyModel, domain: &DomainExpr) -> String {
    match domain {
        DomainExpr::Unspecified => UNDEFINED.to_owned(),
        DomainExpr::Thing => "Thing".to_owned(),
        DomainExpr::Named(class) => model.label_of(class),
        DomainExpr::UnionOf(ms) => join(model, ms, " or "),
        DomainExpr::IntersectionOf(ms) => join(model, ms, " and "),
    }
}

fn join(model: &OntologyModel, members: &[DomainExpr], op: &str) -> String {
    let parts: Vec<String> = members.iter().map(|m| render_domain(model, m)).collect();
    format!("({})", parts.join(op))
}

pub fn property_rows(model: &OntologyModel) -> Vec<PropertyRow> {
    let mut rows: Vec<PropertyRow> = model
        .properties
        .values()
        .map(|p| PropertyRow {
            property: p.iri.clone(),
            domain: render_domain(model, &p.domain),
            label: model.label_of(&p.iri),
            range: p
                .range
                .as_ref()
                .map(|r| model.label_of(r))
                .unwrap_or_else(|| UNDEFINED.to_owned()),
            kind: match p.kind {
                PropertyKind::Object => "Object Prop",
                PropertyKind::Data => "Data Prop",
            }
            .to_owned(),
        })
        .collect();
    rows.sort_by(|a, b| a.label.cmp(&b.label).then_with(|| a.property.cmp(&b.property)));
    rows
}
