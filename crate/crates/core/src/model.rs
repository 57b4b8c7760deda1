//! Typed view of an ontology and the frame view of its classes.
//!
//! A property applies to a class when its domain admits every member of the
//! class: the domain is absent or `owl:Thing`, or it names one of the class's
//! subsumers. Conjunctive domains require every conjunct to be a subsumer, so
//! a class that merely equals one conjunct does not get the property.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rdf::{Graph, Iri, Subject, Term};
use crate::vocab::{owl, rdf, rdfs};

/// Namespace used for minting when the graph names no ontology.
pub const FALLBACK_ONTOLOGY_IRI: &str = "http://ontoforms.org/default";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DomainExpr {
    Unspecified,
    Thing,
    Named(Iri),
    UnionOf(Vec<DomainExpr>),
    IntersectionOf(Vec<DomainExpr>),
}

impl DomainExpr {
    /// Evaluates the expression against a set of subsumers.
    fn admits_with(&self, supers: &BTreeSet<Iri>) -> bool {
        match self {
            DomainExpr::Unspecified | DomainExpr::Thing => true,
            DomainExpr::Named(class) => supers.contains(class),
            DomainExpr::UnionOf(members) => members.iter().any(|m| m.admits_with(supers)),
            DomainExpr::IntersectionOf(members) => members.iter().all(|m| m.admits_with(supers)),
        }
    }

    pub fn is_global(&self) -> bool {
        matches!(self, DomainExpr::Unspecified | DomainExpr::Thing)
    }

    /// Named classes mentioned anywhere in the expression.
    pub fn named_classes(&self) -> Vec<&Iri> {
        let mut out = Vec::new();
        self.collect_named(&mut out);
        out
    }

    fn collect_named<'a>(&'a self, out: &mut Vec<&'a Iri>) {
        match self {
            DomainExpr::Named(iri) => out.push(iri),
            DomainExpr::UnionOf(ms) | DomainExpr::IntersectionOf(ms) => {
                ms.iter().for_each(|m| m.collect_named(out))
            }
            DomainExpr::Unspecified | DomainExpr::Thing => {}
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PropertyKind {
    Object,
    Data,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyDecl {
    pub iri: Iri,
    pub kind: PropertyKind,
    pub domain: DomainExpr,
    /// Class IRI for object properties, datatype IRI for data properties.
    pub range: Option<Iri>,
    pub functional: bool,
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassDecl {
    pub iri: Iri,
    pub label: Option<String>,
    pub direct_supers: Vec<Iri>,
    pub equivalents: Vec<Iri>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Individual {
    pub iri: Iri,
    /// Asserted named types.
    pub types: Vec<Iri>,
    pub label: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PropertySource {
    Declared,
    Inherited,
    Global,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApplicableProperty {
    pub property: Iri,
    pub source: PropertySource,
}

/// T-box and A-box extracted from a graph. Immutable once built.
#[derive(Clone, Debug)]
pub struct OntologyModel {
    pub iri: Iri,
    pub classes: BTreeMap<Iri, ClassDecl>,
    pub properties: BTreeMap<Iri, PropertyDecl>,
    pub individuals: BTreeMap<Iri, Individual>,
    pub source: Graph,
    warnings: Vec<String>,
    labels: BTreeMap<Iri, String>,
    closure: BTreeMap<Iri, BTreeSet<Iri>>,
    descendants: BTreeMap<Iri, BTreeSet<Iri>>,
}

/// Builds the model for `graph`.
pub fn extract_model(graph: Graph) -> Result<OntologyModel> {
    OntologyModel::from_graph(graph)
}

fn thing() -> Iri {
    Iri::new(owl::THING)
}

impl OntologyModel {
    pub fn from_graph(graph: Graph) -> Result<Self> {
        let mut model = Extractor::new(&graph).run()?;
        model.source = graph;
        Ok(model)
    }

    /// Non-fatal problems found during extraction.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn is_known_class(&self, class: &Iri) -> bool {
        class.as_str() == owl::THING || self.classes.contains_key(class)
    }

    fn check_class(&self, class: &Iri) -> Result<()> {
        if self.is_known_class(class) {
            Ok(())
        } else {
            Err(Error::UnknownClass(class.clone()))
        }
    }

    fn closure_of(&self, class: &Iri) -> BTreeSet<Iri> {
        self.closure
            .get(class)
            .cloned()
            .unwrap_or_else(|| [class.clone(), thing()].into_iter().collect())
    }

    /// Reflexive-transitive closure of the subclass relation with named
    /// equivalences in both directions. Always contains `class` and `owl:Thing`.
    pub fn subsumers(&self, class: &Iri) -> Result<BTreeSet<Iri>> {
        self.check_class(class)?;
        Ok(self.closure_of(class))
    }

    /// Whether every member of `class` falls inside `domain`.
    pub fn domain_admits(&self, domain: &DomainExpr, class: &Iri) -> bool {
        match self.closure.get(class) {
            Some(supers) => domain.admits_with(supers),
            None => domain.admits_with(&self.closure_of(class)),
        }
    }

    /// Properties of the frame view of `class`, ordered by property IRI.
    pub fn applicable_properties(&self, class: &Iri) -> Result<Vec<ApplicableProperty>> {
        self.check_class(class)?;
        let supers = self.closure_of(class);
        // classes that subsume `class` and are subsumed by it
        let same: BTreeSet<Iri> = supers
            .iter()
            .filter(|s| *s == class || self.closure_of(s).contains(class))
            .cloned()
            .collect();
        Ok(self
            .properties
            .values()
            .filter(|p| p.domain.admits_with(&supers))
            .map(|p| {
                let source = if p.domain.is_global() {
                    PropertySource::Global
                } else if p.domain.admits_with(&same) {
                    PropertySource::Declared
                } else {
                    PropertySource::Inherited
                };
                ApplicableProperty {
                    property: p.iri.clone(),
                    source,
                }
            })
            .collect())
    }

    /// Individuals with an asserted type subsumed by `class`, sorted by label
    /// and then IRI.
    pub fn individuals_of(&self, class: &Iri) -> Result<Vec<(Iri, String)>> {
        self.check_class(class)?;
        let mut out: Vec<(Iri, String)> = self
            .individuals
            .values()
            .filter(|ind| {
                class.as_str() == owl::THING
                    || ind.types.iter().any(|t| self.closure_of(t).contains(class))
            })
            .map(|ind| (ind.iri.clone(), self.label_of(&ind.iri)))
            .collect();
        out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        Ok(out)
    }

    /// Strict descendants of `class`, sorted by IRI.
    pub fn subclasses_of(&self, class: &Iri) -> Result<Vec<Iri>> {
        self.check_class(class)?;
        if class.as_str() == owl::THING {
            return Ok(self.classes.keys().cloned().collect());
        }
        Ok(self
            .descendants
            .get(class)
            .map(|d| d.iter().cloned().collect())
            .unwrap_or_default())
    }

    /// Classes listing `class` among their direct superclasses.
    pub fn direct_subclasses_of(&self, class: &Iri) -> Vec<Iri> {
        self.classes
            .values()
            .filter(|c| c.direct_supers.contains(class))
            .map(|c| c.iri.clone())
            .collect()
    }

    /// Preferred label (untagged or English), else the IRI's local name.
    pub fn label_of(&self, entity: &Iri) -> String {
        self.labels
            .get(entity)
            .cloned()
            .unwrap_or_else(|| entity.local_name().to_owned())
    }

    /// Whether `individual` carries the intermediate marker.
    pub fn is_intermediate(&self, individual: &Iri) -> bool {
        let subject = Subject::Iri(individual.clone());
        let marked = self
            .source
            .objects(&subject, crate::vocab::ontoforms::CREATED_AS_INTERMEDIATE)
            .any(|o| o.as_literal().is_some_and(|l| l.lexical() == "true" || l.lexical() == "1"));
        marked
    }

    /// `ns#` for minting individual IRIs.
    pub fn namespace(&self) -> String {
        let base = self.iri.as_str().trim_end_matches('#');
        format!("{base}#")
    }
}

struct Extractor<'g> {
    graph: &'g Graph,
    warnings: Vec<String>,
}

impl<'g> Extractor<'g> {
    fn new(graph: &'g Graph) -> Self {
        Extractor {
            graph,
            warnings: Vec::new(),
        }
    }

    fn warn(&mut self, message: String) {
        log::debug!("{message}");
        self.warnings.push(message);
    }

    fn run(mut self) -> Result<OntologyModel> {
        let g = self.graph;
        let mut types: BTreeMap<&Subject, Vec<&Iri>> = BTreeMap::new();
        for t in g.iter().filter(|t| t.predicate.as_str() == rdf::TYPE) {
            if let Term::Iri(o) = &t.object {
                types.entry(&t.subject).or_default().push(o);
            }
        }
        let has_type = |s: &Subject, ty: &str| {
            types
                .get(s)
                .is_some_and(|ts| ts.iter().any(|t| t.as_str() == ty))
        };

        // classes
        let mut classes: BTreeMap<Iri, ClassDecl> = BTreeMap::new();
        let new_class = |iri: &Iri| ClassDecl {
            iri: iri.clone(),
            label: None,
            direct_supers: Vec::new(),
            equivalents: Vec::new(),
        };
        for (subject, ts) in &types {
            if let Subject::Iri(iri) = subject {
                if iri.as_str() != owl::THING
                    && ts.iter().any(|t| t.as_str() == owl::CLASS || t.as_str() == rdfs::CLASS)
                {
                    classes.entry(iri.clone()).or_insert_with(|| new_class(iri));
                }
            }
        }
        for t in g.iter() {
            let p = t.predicate.as_str();
            if p != rdfs::SUB_CLASS_OF && p != owl::EQUIVALENT_CLASS {
                continue;
            }
            for end in [t.subject.as_iri(), t.object.as_iri()].into_iter().flatten() {
                if end.as_str() != owl::THING {
                    classes.entry(end.clone()).or_insert_with(|| new_class(end));
                }
            }
        }
        for t in g.iter() {
            let Subject::Iri(sub) = &t.subject else { continue };
            match t.predicate.as_str() {
                rdfs::SUB_CLASS_OF => {
                    if let Term::Iri(sup) = &t.object {
                        if sup != sub && sup.as_str() != owl::THING {
                            if let Some(decl) = classes.get_mut(sub) {
                                decl.direct_supers.push(sup.clone());
                            }
                        }
                    }
                }
                owl::EQUIVALENT_CLASS => match &t.object {
                    Term::Iri(other) if other != sub => {
                        if sub.as_str() != owl::THING && other.as_str() != owl::THING {
                            if let Some(decl) = classes.get_mut(sub) {
                                decl.equivalents.push(other.clone());
                            }
                            if let Some(decl) = classes.get_mut(other) {
                                decl.equivalents.push(sub.clone());
                            }
                        }
                    }
                    Term::Iri(_) => {}
                    _ => self.warn(format!(
                        "complex equivalent class expression for {sub} ignored"
                    )),
                },
                _ => {}
            }
        }
        for decl in classes.values_mut() {
            decl.direct_supers.sort();
            decl.direct_supers.dedup();
            decl.equivalents.sort();
            decl.equivalents.dedup();
        }

        // properties
        let mut properties = BTreeMap::new();
        for subject in types.keys() {
            let Subject::Iri(iri) = subject else { continue };
            let object = has_type(subject, owl::OBJECT_PROPERTY);
            let data = has_type(subject, owl::DATATYPE_PROPERTY);
            let kind = match (object, data) {
                (true, true) => {
                    return Err(Error::Model(format!(
                        "{iri} is typed both owl:ObjectProperty and owl:DatatypeProperty"
                    )))
                }
                (true, false) => PropertyKind::Object,
                (false, true) => PropertyKind::Data,
                (false, false) => continue,
            };
            let domains: Vec<&Term> = g.objects(subject, rdfs::DOMAIN).collect();
            let mut decoded = Vec::with_capacity(domains.len());
            for d in domains {
                decoded.push(self.decode_domain(d, &mut classes, &mut HashSet::new()));
            }
            let domain = match decoded.len() {
                0 => DomainExpr::Unspecified,
                1 => decoded.pop().unwrap_or(DomainExpr::Unspecified),
                _ => DomainExpr::IntersectionOf(decoded),
            };

            let mut range = None;
            for r in g.objects(subject, rdfs::RANGE) {
                match r {
                    Term::Iri(r) if range.is_none() => range = Some(r.clone()),
                    Term::Iri(r) => self.warn(format!("{iri}: extra range {r} ignored")),
                    _ => self.warn(format!("{iri}: complex range expression ignored")),
                }
            }
            if kind == PropertyKind::Object {
                if let Some(r) = &range {
                    if r.as_str() != owl::THING && !classes.contains_key(r) {
                        self.warn(format!("{iri}: range {r} is not a declared class"));
                        classes.insert(r.clone(), new_class(r));
                    }
                }
            }
            properties.insert(
                iri.clone(),
                PropertyDecl {
                    iri: iri.clone(),
                    kind,
                    domain,
                    range,
                    functional: has_type(subject, owl::FUNCTIONAL_PROPERTY),
                    label: None,
                },
            );
        }

        // labels
        let mut labels: BTreeMap<Iri, String> = BTreeMap::new();
        let mut english: BTreeMap<Iri, String> = BTreeMap::new();
        for t in g.iter().filter(|t| t.predicate.as_str() == rdfs::LABEL) {
            let (Subject::Iri(s), Term::Literal(lit)) = (&t.subject, &t.object) else {
                continue;
            };
            match lit.language() {
                None if lit.datatype().is_none() => {
                    labels.entry(s.clone()).or_insert_with(|| lit.lexical().to_owned());
                }
                Some(lang) if lang == "en" || lang.starts_with("en-") => {
                    english.entry(s.clone()).or_insert_with(|| lit.lexical().to_owned());
                }
                _ => {}
            }
        }
        for (iri, label) in english {
            labels.entry(iri).or_insert(label);
        }
        for decl in classes.values_mut() {
            decl.label = labels.get(&decl.iri).cloned();
        }
        for decl in properties.values_mut() {
            decl.label = labels.get(&decl.iri).cloned();
        }

        // individuals
        let mut individuals = BTreeMap::new();
        for (subject, ts) in &types {
            let Subject::Iri(iri) = subject else { continue };
            if classes.contains_key(iri) || properties.contains_key(iri) {
                continue;
            }
            let mut named: Vec<Iri> = ts
                .iter()
                .filter(|t| t.as_str() == owl::THING || classes.contains_key(**t))
                .map(|t| (*t).clone())
                .collect();
            if named.is_empty() {
                continue;
            }
            named.sort();
            named.dedup();
            individuals.insert(
                iri.clone(),
                Individual {
                    iri: iri.clone(),
                    types: named,
                    label: labels.get(iri).cloned(),
                },
            );
        }

        let iri = types
            .iter()
            .find(|(s, ts)| s.as_iri().is_some() && ts.iter().any(|t| t.as_str() == owl::ONTOLOGY))
            .and_then(|(s, _)| s.as_iri().cloned())
            .or_else(|| g.prefixes().get("").cloned())
            .unwrap_or_else(|| Iri::new(FALLBACK_ONTOLOGY_IRI));

        let closure = compute_closure(&classes);
        let mut descendants: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
        for (class, supers) in &closure {
            for s in supers.iter().filter(|s| *s != class) {
                descendants.entry(s.clone()).or_default().insert(class.clone());
            }
        }

        let warnings = self.warnings;
        Ok(OntologyModel {
            iri,
            classes,
            properties,
            individuals,
            source: Graph::new(),
            warnings,
            labels,
            closure,
            descendants,
        })
    }

    fn decode_domain(
        &mut self,
        term: &Term,
        classes: &mut BTreeMap<Iri, ClassDecl>,
        visiting: &mut HashSet<String>,
    ) -> DomainExpr {
        match term {
            Term::Iri(iri) if iri.as_str() == owl::THING => DomainExpr::Thing,
            Term::Iri(iri) => {
                if !classes.contains_key(iri) {
                    self.warn(format!("domain class {iri} is not a declared class"));
                    classes.insert(
                        iri.clone(),
                        ClassDecl {
                            iri: iri.clone(),
                            label: None,
                            direct_supers: Vec::new(),
                            equivalents: Vec::new(),
                        },
                    );
                }
                DomainExpr::Named(iri.clone())
            }
            Term::BlankNode(label) => {
                if !visiting.insert(label.clone()) {
                    self.warn(format!("cyclic class expression _:{label}"));
                    return DomainExpr::Unspecified;
                }
                let node = Subject::BlankNode(label.clone());
                let union = self.graph.objects(&node, owl::UNION_OF).next();
                let inter = self.graph.objects(&node, owl::INTERSECTION_OF).next();
                let (list, is_union) = match (union, inter) {
                    (Some(l), _) => (l, true),
                    (None, Some(l)) => (l, false),
                    (None, None) => {
                        self.warn(format!(
                            "unsupported domain expression _:{label} treated as unspecified"
                        ));
                        return DomainExpr::Unspecified;
                    }
                };
                let items = read_list(self.graph, list);
                let mut members: Vec<DomainExpr> = items
                    .iter()
                    .map(|m| self.decode_domain(m, classes, visiting))
                    .collect();
                visiting.remove(label);
                match members.len() {
                    0 => {
                        self.warn(format!("empty class expression _:{label} treated as unspecified"));
                        DomainExpr::Unspecified
                    }
                    1 => members.pop().unwrap_or(DomainExpr::Unspecified),
                    _ if is_union => DomainExpr::UnionOf(members),
                    _ => DomainExpr::IntersectionOf(members),
                }
            }
            Term::Literal(_) => {
                self.warn("literal used as a domain".to_owned());
                DomainExpr::Unspecified
            }
        }
    }
}

/// Items of an RDF collection starting at `head`. Stops on malformed or
/// cyclic lists.
pub(crate) fn read_list(graph: &Graph, head: &Term) -> Vec<Term> {
    let mut items = Vec::new();
    let mut seen = HashSet::new();
    let mut node = head.clone();
    while let Ok(subject) = Subject::try_from(node.clone()) {
        if node == Term::iri(rdf::NIL) || !seen.insert(subject.clone()) {
            break;
        }
        match graph.objects(&subject, rdf::FIRST).next() {
            Some(item) => items.push(item.clone()),
            None => break,
        }
        match graph.objects(&subject, rdf::REST).next() {
            Some(next) => node = next.clone(),
            None => break,
        }
    }
    items
}

fn compute_closure(classes: &BTreeMap<Iri, ClassDecl>) -> BTreeMap<Iri, BTreeSet<Iri>> {
    classes
        .keys()
        .map(|start| {
            let mut seen: BTreeSet<Iri> = BTreeSet::new();
            let mut queue = VecDeque::from([start.clone()]);
            while let Some(c) = queue.pop_front() {
                if !seen.insert(c.clone()) {
                    continue;
                }
                if let Some(decl) = classes.get(&c) {
                    queue.extend(decl.direct_supers.iter().cloned());
                    queue.extend(decl.equivalents.iter().cloned());
                }
            }
            seen.insert(thing());
            (start.clone(), seen)
        })
        .collect()
}
