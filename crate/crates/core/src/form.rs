//! Form structure generation.
//!
//! Generation walks the frame view of the main class depth first. Data
//! properties become fields. Object properties become selectors over the
//! existing individuals of their range, unless the administrator configured
//! the (context class, range class) pair for inline creation, in which case
//! the range class's own form is nested as a section. An inline pair that
//! would revisit a (class, property) pair already on the current path is
//! rendered as a selector instead and reported.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{OntologyModel, PropertyKind};
use crate::rdf::Iri;
use crate::vocab::{owl, xsd};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InlinePair {
    pub context_class: Iri,
    pub range_class: Iri,
}

impl InlinePair {
    pub fn new(context_class: Iri, range_class: Iri) -> Self {
        InlinePair {
            context_class,
            range_class,
        }
    }
}

/// Administrator declarations applied on top of the default form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FormConfig {
    /// Properties left out of every form, at every nesting level.
    #[serde(default)]
    pub hidden_properties: BTreeSet<Iri>,
    #[serde(default)]
    pub inline_pairs: BTreeSet<InlinePair>,
    #[serde(default)]
    pub label_overrides: BTreeMap<Iri, String>,
}

impl FormConfig {
    pub fn is_inline(&self, context_class: &Iri, range_class: &Iri) -> bool {
        self.inline_pairs.iter().any(|p| {
            &p.context_class == context_class && &p.range_class == range_class
        })
    }

    /// IRIs mentioned by the configuration that the model does not know.
    pub fn unknown_references(&self, model: &OntologyModel) -> Vec<Iri> {
        let mut out: Vec<Iri> = self
            .hidden_properties
            .iter()
            .filter(|p| !model.properties.contains_key(*p))
            .cloned()
            .collect();
        for pair in &self.inline_pairs {
            for class in [&pair.context_class, &pair.range_class] {
                if !model.is_known_class(class) {
                    out.push(class.clone());
                }
            }
        }
        for entity in self.label_overrides.keys() {
            let known = model.is_known_class(entity)
                || model.properties.contains_key(entity)
                || model.individuals.contains_key(entity);
            if !known {
                out.push(entity.clone());
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Widget {
    Text,
    Number,
    Checkbox,
    Date,
}

/// Input widget for a datatype; unknown datatypes get a text box.
pub fn widget_for(datatype: &Iri) -> Widget {
    match datatype.as_str() {
        xsd::INTEGER | xsd::INT | xsd::DECIMAL | xsd::FLOAT | xsd::DOUBLE
        | xsd::NON_NEGATIVE_INTEGER | xsd::POSITIVE_INTEGER => Widget::Number,
        xsd::BOOLEAN => Widget::Checkbox,
        xsd::DATE | xsd::DATE_TIME | xsd::G_YEAR => Widget::Date,
        _ => Widget::Text,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Choice {
    pub iri: Iri,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", rename_all_fields = "camelCase")]
pub enum FormElement {
    Field {
        property: Iri,
        label: String,
        datatype: Iri,
        widget: Widget,
        functional: bool,
    },
    Selector {
        property: Iri,
        label: String,
        range_class: Iri,
        multiple: bool,
        options: Vec<Choice>,
    },
    Section {
        property: Iri,
        label: String,
        range_class: Iri,
        form: FormStructure,
    },
}

impl FormElement {
    pub fn property(&self) -> &Iri {
        match self {
            FormElement::Field { property, .. }
            | FormElement::Selector { property, .. }
            | FormElement::Section { property, .. } => property,
        }
    }

    pub fn label(&self) -> &str {
        match self {
            FormElement::Field { label, .. }
            | FormElement::Selector { label, .. }
            | FormElement::Section { label, .. } => label,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FormStructure {
    pub main_class: Iri,
    pub label: String,
    pub subclass_options: Vec<Choice>,
    pub elements: Vec<FormElement>,
}

impl FormStructure {
    pub fn element(&self, property: &Iri) -> Option<&FormElement> {
        self.elements.iter().find(|e| e.property() == property)
    }

    /// Top-level element properties.
    pub fn properties(&self) -> BTreeSet<Iri> {
        self.elements.iter().map(|e| e.property().clone()).collect()
    }

    /// Whether a submission may pick `class` as its concrete class.
    pub fn accepts_class(&self, class: &Iri) -> bool {
        &self.main_class == class || self.subclass_options.iter().any(|c| &c.iri == class)
    }

    /// Visits every element at every depth.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a FormStructure, &'a FormElement)) {
        for element in &self.elements {
            visit(self, element);
            if let FormElement::Section { form, .. } = element {
                form.walk(visit);
            }
        }
    }
}

/// An inline pair rendered as a selector because following it would repeat
/// a (class, property) pair already on the path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CycleDegraded {
    pub context_class: Iri,
    pub property: Iri,
    pub range_class: Iri,
    /// (class, property) pairs inlined above the degraded element.
    pub path: Vec<(Iri, Iri)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedForm {
    pub form: FormStructure,
    pub warnings: Vec<CycleDegraded>,
}

/// Builds the form for creating or editing an individual of `main_class`.
pub fn generate_form(
    model: &OntologyModel,
    main_class: &Iri,
    config: &FormConfig,
) -> Result<GeneratedForm> {
    if !model.is_known_class(main_class) {
        return Err(Error::UnknownClass(main_class.clone()));
    }
    let mut generator = Generator {
        model,
        config,
        warnings: Vec::new(),
    };
    let form = generator.build(main_class, &mut Vec::new())?;
    Ok(GeneratedForm {
        form,
        warnings: generator.warnings,
    })
}

struct Generator<'a> {
    model: &'a OntologyModel,
    config: &'a FormConfig,
    warnings: Vec<CycleDegraded>,
}

impl Generator<'_> {
    fn label(&self, iri: &Iri) -> String {
        self.config
            .label_overrides
            .get(iri)
            .cloned()
            .unwrap_or_else(|| self.model.label_of(iri))
    }

    fn choices(&self, iris: impl IntoIterator<Item = Iri>) -> Vec<Choice> {
        iris.into_iter()
            .map(|iri| Choice {
                label: self.label(&iri),
                iri,
            })
            .collect()
    }

    fn build(&mut self, class: &Iri, path: &mut Vec<(Iri, Iri)>) -> Result<FormStructure> {
        let model = self.model;
        let mut elements = Vec::new();
        for applicable in model.applicable_properties(class)? {
            let property = applicable.property;
            if self.config.hidden_properties.contains(&property) {
                continue;
            }
            let decl = &model.properties[&property];
            let label = self.label(&property);
            let element = match decl.kind {
                PropertyKind::Data => {
                    let datatype = decl.range.clone().unwrap_or_else(|| Iri::new(xsd::STRING));
                    FormElement::Field {
                        property,
                        label,
                        widget: widget_for(&datatype),
                        datatype,
                        functional: decl.functional,
                    }
                }
                PropertyKind::Object => {
                    let range = decl.range.clone().unwrap_or_else(|| Iri::new(owl::THING));
                    let step = (class.clone(), property.clone());
                    if self.config.is_inline(class, &range) && !path.contains(&step) {
                        path.push(step);
                        let form = self.build(&range, path)?;
                        path.pop();
                        FormElement::Section {
                            property,
                            label,
                            range_class: range,
                            form,
                        }
                    } else {
                        if self.config.is_inline(class, &range) {
                            log::debug!("inline pair ({class}, {range}) degraded at {property}");
                            self.warnings.push(CycleDegraded {
                                context_class: class.clone(),
                                property: property.clone(),
                                range_class: range.clone(),
                                path: path.clone(),
                            });
                        }
                        let options = model.individuals_of(&range)?;
                        FormElement::Selector {
                            property,
                            label,
                            multiple: !decl.functional,
                            options: options
                                .into_iter()
                                .map(|(iri, label)| Choice {
                                    label: self.config.label_overrides.get(&iri).cloned().unwrap_or(label),
                                    iri,
                                })
                                .collect(),
                            range_class: range,
                        }
                    }
                }
            };
            elements.push(element);
        }
        Ok(FormStructure {
            main_class: class.clone(),
            label: self.label(class),
            subclass_options: self.choices(model.subclasses_of(class)?),
            elements,
        })
    }
}

/// Symmetric difference of the top-level element properties of two forms
/// for the same main class.
pub fn diff_forms(a: &FormStructure, b: &FormStructure) -> Result<BTreeSet<Iri>> {
    if a.main_class != b.main_class {
        return Err(Error::MismatchedClass {
            left: a.main_class.clone(),
            right: b.main_class.clone(),
        });
    }
    Ok(a.properties()
        .symmetric_difference(&b.properties())
        .cloned()
        .collect())
}
