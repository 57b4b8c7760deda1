//! Turning filled forms into A-box triples, and back.
//!
//! Individuals created through inline sections are tagged with a marker
//! triple so that a later prefill can show them as nested creations rather
//! than as selections of pre-existing individuals.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::{FormElement, FormStructure, Widget};
use crate::model::OntologyModel;
use crate::rdf::{Graph, Iri, Literal, Subject, Term, Triple};
use crate::vocab::{ontoforms, rdf, rdfs, xsd};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Submission {
    pub chosen_class: Iri,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub display_label: Option<String>,
    #[serde(default)]
    pub values: Vec<ValueEntry>,
}

impl Submission {
    pub fn new(chosen_class: Iri) -> Self {
        Submission {
            chosen_class,
            display_label: None,
            values: Vec::new(),
        }
    }

    pub fn value(&self, property: &Iri) -> Option<&ValueEntry> {
        self.values.iter().find(|v| &v.property == property)
    }
}

/// Values entered for one property. Data properties use `literals`; object
/// properties use `individuals` (existing) and `creations` (minted).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ValueEntry {
    pub property: Iri,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub literals: Vec<LiteralValue>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub individuals: Vec<Iri>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub creations: Vec<Submission>,
}

impl ValueEntry {
    pub fn new(property: Iri) -> Self {
        ValueEntry {
            property,
            literals: Vec::new(),
            individuals: Vec::new(),
            creations: Vec::new(),
        }
    }

    pub fn literals(property: Iri, values: impl IntoIterator<Item = LiteralValue>) -> Self {
        ValueEntry {
            literals: values.into_iter().collect(),
            ..Self::new(property)
        }
    }

    pub fn individuals(property: Iri, values: impl IntoIterator<Item = Iri>) -> Self {
        ValueEntry {
            individuals: values.into_iter().collect(),
            ..Self::new(property)
        }
    }

    pub fn creations(property: Iri, values: impl IntoIterator<Item = Submission>) -> Self {
        ValueEntry {
            creations: values.into_iter().collect(),
            ..Self::new(property)
        }
    }

    pub fn count(&self) -> usize {
        self.literals.len() + self.individuals.len() + self.creations.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiteralValue {
    pub value: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub datatype: Option<Iri>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
}

impl LiteralValue {
    pub fn new(value: impl Into<String>) -> Self {
        LiteralValue {
            value: value.into(),
            datatype: None,
            language: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Minted {
    pub iri: Iri,
    pub class: Iri,
}

/// Changes computed by [`populate`] or [`update`]. Nothing has been written
/// yet; [`PopulationResult::apply`] performs the change on a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PopulationResult {
    pub root_iri: Iri,
    pub minted: Vec<Minted>,
    pub added_triples: BTreeSet<Triple>,
    pub removed_triples: BTreeSet<Triple>,
}

impl PopulationResult {
    pub fn apply(&self, graph: &mut Graph) {
        for t in &self.removed_triples {
            graph.remove(t);
        }
        graph.extend(self.added_triples.iter().cloned());
    }
}

/// Lowercase-free sanitization: ASCII letters, digits and `_` are kept,
/// anything else becomes `_`.
fn sanitize(text: &str) -> String {
    text.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect()
}

fn mint_local(base: &str, used: &HashSet<String>, namespace: &str) -> Iri {
    (1u64..)
        .map(|n| format!("{namespace}{base}_{n}"))
        .find(|candidate| !used.contains(candidate))
        .map(Iri::new)
        .expect("unbounded counter")
}

fn mint_base(class: &Iri, display_label: Option<&str>) -> String {
    match display_label.filter(|l| !l.is_empty()) {
        Some(label) => sanitize(label),
        None => sanitize(class.local_name()),
    }
}

/// First unused IRI of the form `<ontology ns>#<name>_<n>`, `n >= 1`.
pub fn mint_iri(model: &OntologyModel, class: &Iri, display_label: Option<&str>) -> Iri {
    let used: HashSet<String> = model.source.iris().into_iter().map(str::to_owned).collect();
    mint_local(&mint_base(class, display_label), &used, &model.namespace())
}

/// Checks a lexical form against the datatypes that have dedicated widgets.
pub fn validate_lexical(datatype: &Iri, lexical: &str) -> std::result::Result<(), String> {
    let ok = match datatype.as_str() {
        xsd::INTEGER => is_integer(lexical),
        xsd::INT => lexical.parse::<i32>().is_ok() && is_integer(lexical),
        xsd::NON_NEGATIVE_INTEGER => is_integer(lexical) && !is_negative_nonzero(lexical),
        xsd::POSITIVE_INTEGER => {
            is_integer(lexical) && !lexical.starts_with('-') && lexical.trim_start_matches('+').bytes().any(|b| b != b'0')
        }
        xsd::DECIMAL => is_decimal(lexical),
        xsd::FLOAT | xsd::DOUBLE => {
            matches!(lexical, "INF" | "+INF" | "-INF" | "NaN")
                || (lexical.bytes().all(|b| b.is_ascii_digit() || b"+-.eE".contains(&b))
                    && lexical.parse::<f64>().is_ok())
        }
        xsd::BOOLEAN => matches!(lexical, "true" | "false"),
        xsd::DATE => lexical.len() >= 10
            && lexical.is_char_boundary(10)
            && chrono::NaiveDate::parse_from_str(&lexical[..10], "%Y-%m-%d").is_ok()
            && is_timezone(&lexical[10..]),
        xsd::DATE_TIME => {
            chrono::DateTime::parse_from_rfc3339(lexical).is_ok()
                || chrono::NaiveDateTime::parse_from_str(lexical, "%Y-%m-%dT%H:%M:%S%.f").is_ok()
        }
        xsd::G_YEAR => {
            let (year, tz) = split_year(lexical);
            year.len() >= 4 && year.bytes().all(|b| b.is_ascii_digit()) && is_timezone(tz)
        }
        _ => true,
    };
    if ok {
        Ok(())
    } else {
        Err(format!("'{lexical}' is not a valid {}", datatype.local_name()))
    }
}

fn is_integer(s: &str) -> bool {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

fn is_negative_nonzero(s: &str) -> bool {
    s.starts_with('-') && s[1..].bytes().any(|b| b != b'0')
}

fn is_decimal(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    (!int.is_empty() || !frac.is_empty())
        && int.bytes().all(|b| b.is_ascii_digit())
        && frac.bytes().all(|b| b.is_ascii_digit())
        && body != "."
}

fn split_year(s: &str) -> (&str, &str) {
    let body = s.strip_prefix('-').unwrap_or(s);
    let end = body.find(|c: char| !c.is_ascii_digit()).unwrap_or(body.len());
    (&body[..end], &body[end..])
}

fn is_timezone(s: &str) -> bool {
    if s.is_empty() || s == "Z" {
        return true;
    }
    let b = s.as_bytes();
    b.len() == 6
        && (b[0] == b'+' || b[0] == b'-')
        && b[1].is_ascii_digit()
        && b[2].is_ascii_digit()
        && b[3] == b':'
        && b[4].is_ascii_digit()
        && b[5].is_ascii_digit()
}

fn marker_triple(iri: &Iri) -> Triple {
    Triple::new(
        iri.clone(),
        Iri::new(ontoforms::CREATED_AS_INTERMEDIATE),
        Literal::typed("true", Iri::new(xsd::BOOLEAN)),
    )
}

/// Accumulates minted individuals and triples; discarded on error.
struct Writer<'a> {
    model: &'a OntologyModel,
    namespace: String,
    used: HashSet<String>,
    minted: Vec<Minted>,
    triples: BTreeSet<Triple>,
    /// Existing intermediates reused by an update, per (subject, property).
    reusable: BTreeMap<(Iri, Iri), Vec<(Iri, Submission)>>,
}

impl<'a> Writer<'a> {
    fn new(model: &'a OntologyModel) -> Self {
        Writer {
            model,
            namespace: model.namespace(),
            used: model.source.iris().into_iter().map(str::to_owned).collect(),
            minted: Vec::new(),
            triples: BTreeSet::new(),
            reusable: BTreeMap::new(),
        }
    }

    fn mint(&mut self, class: &Iri, label: Option<&str>) -> Iri {
        let iri = mint_local(&mint_base(class, label), &self.used, &self.namespace);
        self.used.insert(iri.as_str().to_owned());
        self.minted.push(Minted {
            iri: iri.clone(),
            class: class.clone(),
        });
        iri
    }

    fn add(&mut self, subject: &Iri, predicate: &Iri, object: impl Into<Term>) {
        self.triples
            .insert(Triple::new(subject.clone(), predicate.clone(), object));
    }

    /// Mints a new individual for `submission` and asserts its values.
    fn create(&mut self, form: &FormStructure, submission: &Submission, intermediate: bool) -> Result<Iri> {
        check_class(form, submission)?;
        check_unique_properties(submission)?;
        let iri = self.mint(&submission.chosen_class, submission.display_label.as_deref());
        self.add(&iri, &Iri::new(rdf::TYPE), submission.chosen_class.clone());
        if intermediate {
            self.triples.insert(marker_triple(&iri));
        }
        if let Some(label) = submission.display_label.as_deref().filter(|l| !l.is_empty()) {
            self.add(&iri, &Iri::new(rdfs::LABEL), Literal::plain(label));
        }
        for entry in &submission.values {
            self.assert_entry(form, &iri, entry)?;
        }
        Ok(iri)
    }

    fn assert_entry(&mut self, form: &FormStructure, subject: &Iri, entry: &ValueEntry) -> Result<()> {
        let property = &entry.property;
        let element = form
            .element(property)
            .ok_or_else(|| Error::validation(property, "property is not part of the form"))?;
        let functional = match element {
            FormElement::Field { functional, .. } => *functional,
            FormElement::Selector { multiple, .. } => !*multiple,
            FormElement::Section { .. } => self
                .model
                .properties
                .get(property)
                .is_some_and(|p| p.functional),
        };
        if functional && entry.count() > 1 {
            return Err(Error::validation(
                property,
                format!("functional property given {} values", entry.count()),
            ));
        }
        match element {
            FormElement::Field { datatype, widget, .. } => {
                if !entry.individuals.is_empty() || !entry.creations.is_empty() {
                    return Err(Error::validation(property, "data property takes literal values"));
                }
                for value in &entry.literals {
                    let literal = build_literal(property, datatype, *widget, value)?;
                    self.add(subject, property, literal);
                }
            }
            FormElement::Selector { options, .. } => {
                if !entry.literals.is_empty() {
                    return Err(Error::validation(property, "object property takes individuals"));
                }
                if !entry.creations.is_empty() {
                    return Err(Error::validation(
                        property,
                        "new individuals can only be created in a form section",
                    ));
                }
                for individual in &entry.individuals {
                    if !options.iter().any(|o| &o.iri == individual) {
                        return Err(Error::validation(
                            property,
                            format!("{individual} is not an individual of the range"),
                        ));
                    }
                    self.add(subject, property, individual.clone());
                }
            }
            FormElement::Section { range_class, form: inner, .. } => {
                if !entry.literals.is_empty() {
                    return Err(Error::validation(property, "object property takes individuals"));
                }
                if !entry.individuals.is_empty() {
                    let allowed: HashSet<Iri> = self
                        .model
                        .individuals_of(range_class)?
                        .into_iter()
                        .map(|(iri, _)| iri)
                        .collect();
                    for individual in &entry.individuals {
                        if !allowed.contains(individual) {
                            return Err(Error::validation(
                                property,
                                format!("{individual} is not an individual of the range"),
                            ));
                        }
                        self.add(subject, property, individual.clone());
                    }
                }
                for creation in &entry.creations {
                    let key = (subject.clone(), property.clone());
                    let wanted = canonical(inner, creation);
                    let reused = self.reusable.get_mut(&key).and_then(|candidates| {
                        let pos = candidates
                            .iter()
                            .position(|(_, existing)| canonical(inner, existing) == wanted)?;
                        Some(candidates.remove(pos).0)
                    });
                    let target = match reused {
                        Some(existing) => {
                            let kept = subtree(&self.model.source, &existing);
                            self.triples.extend(kept);
                            existing
                        }
                        None => self.create(inner, creation, true)?,
                    };
                    self.add(subject, property, target);
                }
            }
        }
        Ok(())
    }
}

fn check_class(form: &FormStructure, submission: &Submission) -> Result<()> {
    if form.accepts_class(&submission.chosen_class) {
        Ok(())
    } else {
        Err(Error::Validation {
            property: None,
            reason: format!(
                "{} is neither {} nor one of its subclasses",
                submission.chosen_class, form.main_class
            ),
        })
    }
}

fn check_unique_properties(submission: &Submission) -> Result<()> {
    let mut seen = HashSet::new();
    for entry in &submission.values {
        if !seen.insert(&entry.property) {
            return Err(Error::validation(&entry.property, "property listed twice"));
        }
    }
    Ok(())
}

fn build_literal(property: &Iri, datatype: &Iri, widget: Widget, value: &LiteralValue) -> Result<Literal> {
    if let Some(given) = &value.datatype {
        let same = given == datatype
            || (given.as_str() == xsd::STRING && datatype.as_str() == rdf::LANG_STRING);
        if !same {
            return Err(Error::validation(
                property,
                format!("datatype {given} does not match the field datatype {datatype}"),
            ));
        }
    }
    if let Some(lang) = &value.language {
        let textual = matches!(datatype.as_str(), xsd::STRING | rdf::LANG_STRING);
        if !textual || lang.is_empty() {
            return Err(Error::validation(property, "language tags only apply to text"));
        }
        return Ok(Literal::lang(value.value.clone(), lang.clone()));
    }
    if widget != Widget::Text {
        validate_lexical(datatype, &value.value).map_err(|reason| Error::validation(property, reason))?;
    }
    Ok(Literal::typed(value.value.clone(), datatype.clone()))
}

/// All triples about `root` and, recursively, about intermediates it links to.
fn subtree(graph: &Graph, root: &Iri) -> BTreeSet<Triple> {
    let mut out = BTreeSet::new();
    let mut stack = vec![root.clone()];
    let mut seen = HashSet::new();
    while let Some(node) = stack.pop() {
        if !seen.insert(node.clone()) {
            continue;
        }
        let subject = Subject::Iri(node);
        for t in graph.with_subject(&subject) {
            if let Term::Iri(o) = &t.object {
                if is_marked(graph, o) {
                    stack.push(o.clone());
                }
            }
            out.insert(t.clone());
        }
    }
    out
}

fn is_marked(graph: &Graph, iri: &Iri) -> bool {
    graph.contains(&marker_triple(iri))
}

type CanonicalValues = (Vec<Literal>, Vec<Iri>, Vec<Canonical>);

/// Order-insensitive normal form used to compare submissions.
#[derive(Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Canonical {
    class: Iri,
    label: Option<String>,
    values: BTreeMap<Iri, CanonicalValues>,
}

fn canonical(form: &FormStructure, submission: &Submission) -> Canonical {
    let mut values = BTreeMap::new();
    for entry in &submission.values {
        let element = form.element(&entry.property);
        let mut literals: Vec<Literal> = entry
            .literals
            .iter()
            .map(|v| match (&v.language, element) {
                (Some(lang), _) => Literal::lang(v.value.clone(), lang.clone()),
                (None, Some(FormElement::Field { datatype, .. })) => {
                    Literal::typed(v.value.clone(), v.datatype.clone().unwrap_or_else(|| datatype.clone()))
                }
                (None, _) => Literal::typed(v.value.clone(), v.datatype.clone().unwrap_or_else(|| Iri::new(xsd::STRING))),
            })
            .collect();
        literals.sort();
        let mut individuals = entry.individuals.clone();
        individuals.sort();
        let mut creations: Vec<Canonical> = match element {
            Some(FormElement::Section { form: inner, .. }) => {
                entry.creations.iter().map(|c| canonical(inner, c)).collect()
            }
            _ => Vec::new(),
        };
        creations.sort();
        if !(literals.is_empty() && individuals.is_empty() && creations.is_empty()) {
            values.insert(entry.property.clone(), (literals, individuals, creations));
        }
    }
    Canonical {
        class: submission.chosen_class.clone(),
        label: submission.display_label.clone().filter(|l| !l.is_empty()),
        values,
    }
}

/// Whether two submissions describe the same values for `form`, ignoring
/// ordering.
pub fn equivalent_submissions(form: &FormStructure, a: &Submission, b: &Submission) -> bool {
    canonical(form, a) == canonical(form, b)
}

/// Computes the triples for a new individual described by `submission`.
pub fn populate(model: &OntologyModel, form: &FormStructure, submission: &Submission) -> Result<PopulationResult> {
    let mut writer = Writer::new(model);
    let root = writer.create(form, submission, false)?;
    Ok(PopulationResult {
        root_iri: root,
        minted: writer.minted,
        added_triples: writer.triples,
        removed_triples: BTreeSet::new(),
    })
}

fn plain_label(graph: &Graph, iri: &Iri) -> Option<String> {
    let subject = Subject::Iri(iri.clone());
    let label = graph
        .objects(&subject, rdfs::LABEL)
        .filter_map(Term::as_literal)
        .find(|l| l.language().is_none() && l.datatype().is_none())
        .map(|l| l.lexical().to_owned());
    label
}

/// Asserted type of `individual` that `form` accepts, most specific first.
fn chosen_type(model: &OntologyModel, form: &FormStructure, individual: &Iri) -> Result<Iri> {
    let ind = model
        .individuals
        .get(individual)
        .ok_or_else(|| Error::UnknownIndividual(individual.clone()))?;
    let legal: Vec<&Iri> = ind.types.iter().filter(|t| form.accepts_class(t)).collect();
    let most_specific = legal.iter().find(|t| {
        legal.iter().all(|other| {
            other == *t || !model.subsumers(other).map(|s| s.contains(**t)).unwrap_or(false)
        })
    });
    most_specific
        .or(legal.first())
        .map(|t| (*t).clone())
        .ok_or_else(|| Error::TypeMismatch {
            individual: individual.clone(),
            expected: form.main_class.clone(),
        })
}

/// Reconstructs the submission that describes `individual` under `form`.
pub fn prefill(model: &OntologyModel, form: &FormStructure, individual: &Iri) -> Result<Submission> {
    let chosen_class = chosen_type(model, form, individual)?;
    let graph = &model.source;
    let subject = Subject::Iri(individual.clone());
    let mut values = Vec::new();
    for element in &form.elements {
        let property = element.property();
        let objects: Vec<&Term> = graph.objects(&subject, property.as_str()).collect();
        let mut entry = ValueEntry::new(property.clone());
        match element {
            FormElement::Field { .. } => {
                entry.literals = objects
                    .iter()
                    .filter_map(|o| o.as_literal())
                    .map(|l| LiteralValue {
                        value: l.lexical().to_owned(),
                        datatype: l.datatype().cloned(),
                        language: l.language().map(str::to_owned),
                    })
                    .collect();
            }
            FormElement::Selector { .. } => {
                entry.individuals = objects.iter().filter_map(|o| o.as_iri()).cloned().collect();
            }
            FormElement::Section { form: inner, .. } => {
                for object in objects.iter().filter_map(|o| o.as_iri()) {
                    let nested = is_marked(graph, object)
                        .then(|| prefill(model, inner, object).ok())
                        .flatten();
                    match nested {
                        Some(creation) => entry.creations.push(creation),
                        None => entry.individuals.push(object.clone()),
                    }
                }
            }
        }
        if entry.count() > 0 {
            values.push(entry);
        }
    }
    Ok(Submission {
        chosen_class,
        display_label: plain_label(graph, individual),
        values,
    })
}

/// Replaces the values of every property named in `submission` on an
/// existing individual. Intermediates that lose their only link are
/// retracted with everything they assert.
pub fn update(
    model: &OntologyModel,
    form: &FormStructure,
    individual: &Iri,
    submission: &Submission,
) -> Result<PopulationResult> {
    let ind = model
        .individuals
        .get(individual)
        .ok_or_else(|| Error::UnknownIndividual(individual.clone()))?;
    chosen_type(model, form, individual)?;
    if !ind.types.contains(&submission.chosen_class) {
        return Err(Error::TypeMismatch {
            individual: individual.clone(),
            expected: submission.chosen_class.clone(),
        });
    }
    check_class(form, submission)?;
    check_unique_properties(submission)?;

    let graph = &model.source;
    let subject = Subject::Iri(individual.clone());
    let mut old = BTreeSet::new();
    let mut writer = Writer::new(model);

    if let Some(label) = &submission.display_label {
        let predicate = Iri::new(rdfs::LABEL);
        old.extend(graph.with_subject(&subject).filter(|t| t.predicate == predicate).cloned());
        if !label.is_empty() {
            writer.add(individual, &predicate, Literal::plain(label.clone()));
        }
    }

    for entry in &submission.values {
        let property = &entry.property;
        let element = form
            .element(property)
            .ok_or_else(|| Error::validation(property, "property is not part of the form"))?;
        for t in graph.with_subject(&subject).filter(|t| &t.predicate == property) {
            old.insert(t.clone());
            if let Term::Iri(o) = &t.object {
                if is_marked(graph, o) {
                    old.extend(subtree(graph, o));
                    if let FormElement::Section { form: inner, .. } = element {
                        if let Ok(existing) = prefill(model, inner, o) {
                            writer
                                .reusable
                                .entry((individual.clone(), property.clone()))
                                .or_default()
                                .push((o.clone(), existing));
                        }
                    }
                }
            }
        }
        writer.assert_entry(form, individual, entry)?;
    }

    let new = writer.triples;
    let removed: BTreeSet<Triple> = old.difference(&new).cloned().collect();
    let added: BTreeSet<Triple> = new.difference(&old).cloned().collect();

    // intermediates losing their type triple are being retracted; nothing
    // outside the retracted set may still point at them
    let type_predicate = Iri::new(rdf::TYPE);
    let retracted: BTreeSet<Iri> = removed
        .iter()
        .filter(|t| t.predicate == type_predicate)
        .filter_map(|t| t.subject.as_iri().cloned())
        .collect();
    for t in graph.iter() {
        let Term::Iri(o) = &t.object else { continue };
        if !retracted.contains(o) || removed.contains(t) {
            continue;
        }
        return Err(Error::OrphanRetractionConflict {
            intermediate: o.clone(),
            referrer: t.subject.to_term().to_string(),
        });
    }

    Ok(PopulationResult {
        root_iri: individual.clone(),
        minted: writer.minted,
        added_triples: added,
        removed_triples: removed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::{generate_form, FormConfig, InlinePair};
    use crate::model::extract_model;
    use crate::rdf::parse_turtle;

    const ONTO: &str = "@prefix owl: <http://www.w3.org/2002/07/owl#> .
        @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
        @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
        @prefix : <http://ex.org/t#> .
        <http://ex.org/t> a owl:Ontology .
        :Person a owl:Class . :Student rdfs:subClassOf :Person . :Address a owl:Class .
        :name a owl:DatatypeProperty , owl:FunctionalProperty ; rdfs:domain :Person ; rdfs:range xsd:string .
        :age a owl:DatatypeProperty ; rdfs:domain :Person ; rdfs:range xsd:nonNegativeInteger .
        :born a owl:DatatypeProperty ; rdfs:domain :Person ; rdfs:range xsd:date .
        :knows a owl:ObjectProperty ; rdfs:domain :Person ; rdfs:range :Person .
        :lives a owl:ObjectProperty , owl:FunctionalProperty ; rdfs:domain :Person ; rdfs:range :Address .
        :street a owl:DatatypeProperty ; rdfs:domain :Address ; rdfs:range xsd:string .
        :ana a :Student . :bo a :Person . :home a :Address .";

    fn iri(local: &str) -> Iri {
        Iri::new(format!("http://ex.org/t#{local}"))
    }

    fn setup(inline: bool) -> (OntologyModel, FormStructure) {
        let m = extract_model(parse_turtle(ONTO).unwrap()).unwrap();
        let mut config = FormConfig::default();
        if inline {
            config.inline_pairs.insert(InlinePair::new(iri("Person"), iri("Address")));
        }
        let f = generate_form(&m, &iri("Person"), &config).unwrap().form;
        (m, f)
    }

    #[test]
    fn mint_counter_and_sanitization() {
        let (m, _) = setup(false);
        assert_eq!(mint_iri(&m, &iri("Person"), None).as_str(), "http://ex.org/t#Person_1");
        assert_eq!(
            mint_iri(&m, &iri("Person"), Some("My Meal!")).local_name(),
            "My_Meal__1"
        );
        let mut g = m.source.clone();
        g.insert(Triple::new(iri("Person_1"), Iri::new(rdf::TYPE), iri("Person")));
        let m2 = extract_model(g).unwrap();
        assert_eq!(mint_iri(&m2, &iri("Person"), None).local_name(), "Person_2");
    }

    #[test]
    fn minimal_insert() {
        let (m, f) = setup(false);
        let r = populate(&m, &f, &Submission::new(iri("Person"))).unwrap();
        assert_eq!(r.minted.len(), 1);
        assert_eq!(r.added_triples.len(), 1);
        assert_eq!(r.minted[0].iri, r.root_iri);
    }

    #[test]
    fn literal_validation() {
        let (m, f) = setup(false);
        let mut s = Submission::new(iri("Person"));
        s.values.push(ValueEntry::literals(iri("age"), [LiteralValue::new("-3")]));
        assert!(matches!(populate(&m, &f, &s), Err(Error::Validation { .. })));
        s.values[0] = ValueEntry::literals(iri("age"), [LiteralValue::new("42")]);
        let r = populate(&m, &f, &s).unwrap();
        assert!(r.added_triples.iter().any(|t| t.object
            == Term::Literal(Literal::typed("42", Iri::new(xsd::NON_NEGATIVE_INTEGER)))));
        s.values[0] = ValueEntry::literals(iri("born"), [LiteralValue::new("2024-02-30")]);
        assert!(populate(&m, &f, &s).is_err());
        s.values[0] = ValueEntry::literals(iri("born"), [LiteralValue::new("2024-02-29")]);
        assert!(populate(&m, &f, &s).is_ok());
    }

    #[test]
    fn lexical_rules() {
        let ok = |dt: &str, v: &str| validate_lexical(&Iri::new(dt), v).is_ok();
        assert!(ok(xsd::INTEGER, "-12") && ok(xsd::INTEGER, "+0") && !ok(xsd::INTEGER, "1.0"));
        assert!(ok(xsd::POSITIVE_INTEGER, "7") && !ok(xsd::POSITIVE_INTEGER, "0"));
        assert!(ok(xsd::NON_NEGATIVE_INTEGER, "-0") && !ok(xsd::NON_NEGATIVE_INTEGER, "-1"));
        assert!(ok(xsd::DECIMAL, "1.") && ok(xsd::DECIMAL, ".5") && !ok(xsd::DECIMAL, "."));
        assert!(ok(xsd::DOUBLE, "1e3") && ok(xsd::DOUBLE, "NaN") && !ok(xsd::DOUBLE, "inf"));
        assert!(ok(xsd::BOOLEAN, "true") && !ok(xsd::BOOLEAN, "yes"));
        assert!(ok(xsd::DATE, "2024-01-05Z") && ok(xsd::DATE, "2024-01-05+02:00"));
        assert!(!ok(xsd::DATE, "05/01/2024"));
        assert!(ok(xsd::DATE_TIME, "2017-04-01T10:00:00Z") && ok(xsd::DATE_TIME, "2017-04-01T10:00:00"));
        assert!(ok(xsd::G_YEAR, "1998") && ok(xsd::G_YEAR, "-0044") && !ok(xsd::G_YEAR, "98"));
        assert!(ok(xsd::INT, "2147483647") && !ok(xsd::INT, "2147483648"));
    }

    #[test]
    fn carrier_and_range_errors() {
        let (m, f) = setup(false);
        let cases = [
            ValueEntry::individuals(iri("name"), [iri("ana")]),
            ValueEntry::literals(iri("knows"), [LiteralValue::new("x")]),
            ValueEntry::creations(iri("lives"), [Submission::new(iri("Address"))]),
            ValueEntry::individuals(iri("lives"), [iri("ana")]),
            ValueEntry::individuals(iri("nope"), [iri("ana")]),
            ValueEntry::literals(iri("name"), [LiteralValue::new("a"), LiteralValue::new("b")]),
            ValueEntry::literals(
                iri("name"),
                [LiteralValue { datatype: Some(Iri::new(xsd::INTEGER)), ..LiteralValue::new("1") }],
            ),
        ];
        for entry in cases {
            let mut s = Submission::new(iri("Person"));
            s.values.push(entry.clone());
            assert!(
                matches!(populate(&m, &f, &s), Err(Error::Validation { .. })),
                "{entry:?}"
            );
        }
        assert!(populate(&m, &f, &Submission::new(iri("Address"))).is_err());
        assert!(populate(&m, &f, &Submission::new(iri("Student"))).is_ok());
    }

    #[test]
    fn section_creation_and_prefill_round_trip() {
        let (m, f) = setup(true);
        let mut address = Submission::new(iri("Address"));
        address.values.push(ValueEntry::literals(iri("street"), [LiteralValue::new("Main St")]));
        let mut s = Submission::new(iri("Person"));
        s.display_label = Some("Carla".into());
        s.values.push(ValueEntry::creations(iri("lives"), [address]));
        s.values.push(ValueEntry::individuals(iri("knows"), [iri("ana"), iri("bo")]));
        let r = populate(&m, &f, &s).unwrap();
        assert_eq!(r.root_iri.local_name(), "Carla_1");
        assert_eq!(r.minted[1].iri.local_name(), "Address_1");
        // type + label + 2 knows + link + (type + marker + street)
        assert_eq!(r.added_triples.len(), 8);

        let mut g = m.source.clone();
        r.apply(&mut g);
        let m2 = extract_model(g).unwrap();
        let f2 = generate_form(&m2, &iri("Person"), &{
            let mut c = FormConfig::default();
            c.inline_pairs.insert(InlinePair::new(iri("Person"), iri("Address")));
            c
        })
        .unwrap()
        .form;
        let back = prefill(&m2, &f2, &r.root_iri).unwrap();
        assert!(equivalent_submissions(&f2, &back, &s), "{back:#?}");

        let fixed = update(&m2, &f2, &r.root_iri, &back).unwrap();
        assert!(fixed.added_triples.is_empty() && fixed.removed_triples.is_empty());
        assert!(fixed.minted.is_empty());
    }

    #[test]
    fn update_replaces_and_retracts_intermediates() {
        let (m, f) = setup(true);
        let mut s = Submission::new(iri("Person"));
        s.values.push(ValueEntry::creations(iri("lives"), [Submission::new(iri("Address"))]));
        s.values.push(ValueEntry::individuals(iri("knows"), [iri("ana")]));
        let r = populate(&m, &f, &s).unwrap();
        let mut g = m.source.clone();
        r.apply(&mut g);
        let m2 = extract_model(g).unwrap();

        let mut address = Submission::new(iri("Address"));
        address.values.push(ValueEntry::literals(iri("street"), [LiteralValue::new("Elm")]));
        let mut change = Submission::new(iri("Person"));
        change.values.push(ValueEntry::creations(iri("lives"), [address]));
        let u = update(&m2, &f, &r.root_iri, &change).unwrap();
        let old = iri("Address_1");
        // link + type + marker of the old address go away
        assert_eq!(u.removed_triples.len(), 3);
        assert!(u.removed_triples.iter().all(|t| t.subject == Subject::Iri(old.clone())
            || t.object == Term::Iri(old.clone())));
        assert_eq!(u.minted.len(), 1);
        assert_eq!(u.minted[0].iri.local_name(), "Address_2");
        // knows is untouched
        assert!(!u.removed_triples.iter().any(|t| t.predicate == iri("knows")));
    }

    #[test]
    fn update_conflict_when_intermediate_is_shared() {
        let (m, f) = setup(true);
        let mut s = Submission::new(iri("Person"));
        s.values.push(ValueEntry::creations(iri("lives"), [Submission::new(iri("Address"))]));
        let r = populate(&m, &f, &s).unwrap();
        let mut g = m.source.clone();
        r.apply(&mut g);
        g.insert(Triple::new(iri("bo"), iri("lives"), iri("Address_1")));
        let m2 = extract_model(g).unwrap();
        let clear = Submission {
            values: vec![ValueEntry::new(iri("lives"))],
            ..Submission::new(iri("Person"))
        };
        assert!(matches!(
            update(&m2, &f, &r.root_iri, &clear),
            Err(Error::OrphanRetractionConflict { .. })
        ));
    }

    #[test]
    fn update_rejects_retyping_and_unknowns() {
        let (m, f) = setup(false);
        assert!(matches!(
            update(&m, &f, &iri("bo"), &Submission::new(iri("Student"))),
            Err(Error::TypeMismatch { .. })
        ));
        assert!(matches!(
            prefill(&m, &f, &iri("ghost")),
            Err(Error::UnknownIndividual(_))
        ));
        assert!(matches!(prefill(&m, &f, &iri("home")), Err(Error::TypeMismatch { .. })));
        let empty = prefill(&m, &f, &iri("bo")).unwrap();
        assert!(empty.values.is_empty());
        assert_eq!(prefill(&m, &f, &iri("ana")).unwrap().chosen_class, iri("Student"));
    }
}
