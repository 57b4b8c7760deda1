mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use ontoforms_core::{
    generate_form, parse_turtle, populate, prefill, serialize_turtle, update, FormConfig, FormElement,
    FormStructure, Graph, InlinePair, Iri, Literal, OntologyModel, Submission, Triple, ValueEntry,
};
use proptest::prelude::*;
use proptest::sample::select;

fn model() -> &'static OntologyModel {
    use std::sync::OnceLock;
    static MODEL: OnceLock<OntologyModel> = OnceLock::new();
    MODEL.get_or_init(|| fixture_model("wine-food.ttl"))
}

fn classes() -> Vec<Iri> {
    model().classes.keys().cloned().collect()
}

fn subclass_pairs() -> Vec<(Iri, Iri)> {
    let m = model();
    m.classes
        .keys()
        .flat_map(|c| m.subclasses_of(c).unwrap().into_iter().map(move |s| (c.clone(), s)))
        .collect()
}

fn applicable(class: &Iri) -> BTreeSet<Iri> {
    model().applicable_properties(class).unwrap().into_iter().map(|a| a.property).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn subclasses_inherit_applicable_properties((c, sub) in select(subclass_pairs())) {
        prop_assert!(applicable(&c).is_subset(&applicable(&sub)), "{} {}", c, sub);
    }

    #[test]
    fn hiding_removes_exactly_the_hidden(
        class in select(classes()),
        seed in proptest::collection::vec(any::<bool>(), 40),
    ) {
        let m = model();
        let all: Vec<Iri> = m.properties.keys().cloned().collect();
        let hidden: BTreeSet<Iri> = all.iter().zip(seed.iter().cycle()).filter(|(_, h)| **h).map(|(p, _)| p.clone()).collect();
        let default = generate_form(m, &class, &FormConfig::default()).unwrap().form;
        let config = FormConfig { hidden_properties: hidden.clone(), ..FormConfig::default() };
        let form = generate_form(m, &class, &config).unwrap().form;
        let expected: BTreeSet<Iri> = default.properties().difference(&hidden).cloned().collect();
        prop_assert_eq!(form.properties(), expected);
    }

    #[test]
    fn functional_means_single_select(class in select(classes()), inline in any::<bool>()) {
        let m = model();
        let mut config = FormConfig::default();
        if inline {
            config.inline_pairs.insert(InlinePair::new(food("Meal"), food("MealCourse")));
        }
        let form = generate_form(m, &class, &config).unwrap().form;
        let mut ok = true;
        form.walk(&mut |_, e| {
            if let FormElement::Selector { property, multiple, .. } = e {
                ok &= *multiple == !m.properties[property].functional;
            }
        });
        prop_assert!(ok);
    }

    #[test]
    fn populate_counts_and_prefill_round_trip(
        picks in proptest::collection::vec((0usize..64, 0usize..3), 0..8),
        nested in proptest::collection::vec((0usize..64, 0usize..3), 0..4),
        label in proptest::option::of("[A-Za-z ]{1,12}"),
        with_course in any::<bool>(),
    ) {
        let m = model();
        let config = FormConfig {
            inline_pairs: [InlinePair::new(food("Meal"), food("MealCourse"))].into(),
            ..FormConfig::default()
        };
        let form = generate_form(m, &food("Meal"), &config).unwrap().form;
        let mut sub = random_submission(&form, &food("Meal"), &picks);
        sub.display_label = label.clone().filter(|l| !l.trim().is_empty());
        let mut expected = 1 + usize::from(sub.display_label.is_some()) + count_values(&sub);
        if with_course {
            let FormElement::Section { form: inner, .. } = form.element(&food("course")).unwrap() else { unreachable!() };
            let course = random_submission(inner, &food("MealCourse"), &nested);
            expected += 1 + 2 + count_values(&course);
            sub.values.retain(|v| v.property != food("course"));
            sub.values.push(ValueEntry::creations(food("course"), [course]));
        }
        let result = populate(m, &form, &sub).unwrap();
        prop_assert_eq!(result.added_triples.len(), expected);
        prop_assert_eq!(result.minted.len(), 1 + usize::from(with_course));

        let mut g = m.source.clone();
        result.apply(&mut g);
        prop_assert_eq!(g.len(), m.source.len() + expected);
        let m2 = ontoforms_core::extract_model(g.clone()).unwrap();
        let back = prefill(&m2, &form, &result.root_iri).unwrap();
        prop_assert_eq!(normalize(&back), normalize(&sub));

        let again = update(&m2, &form, &result.root_iri, &back).unwrap();
        prop_assert!(again.added_triples.is_empty() && again.removed_triples.is_empty());
    }

    #[test]
    fn random_graphs_round_trip(triples in proptest::collection::vec(arb_triple(), 0..30)) {
        let mut g = Graph::new();
        g.bind_prefix("ex", Iri::new("http://ex.org/"));
        g.extend(triples);
        let text = serialize_turtle(&g);
        let back = parse_turtle(&text).unwrap();
        prop_assert_eq!(back.triples(), g.triples(), "{}", text);
    }
}

/// Picks selector values from `(element index, how many)` pairs, respecting
/// functional properties. Sections are left out.
fn random_submission(form: &FormStructure, class: &Iri, picks: &[(usize, usize)]) -> Submission {
    let selectors: Vec<(&Iri, bool, Vec<Iri>)> = form
        .elements
        .iter()
        .filter_map(|e| match e {
            FormElement::Selector { property, multiple, options, .. } if !options.is_empty() => {
                Some((property, *multiple, options.iter().map(|o| o.iri.clone()).collect()))
            }
            _ => None,
        })
        .collect();
    let mut chosen: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
    for (i, n) in picks {
        if selectors.is_empty() {
            break;
        }
        let (property, multiple, options) = &selectors[i % selectors.len()];
        let n = if *multiple { *n } else { (*n).min(1) };
        let entry = chosen.entry((*property).clone()).or_default();
        for k in 0..n {
            if *multiple || entry.is_empty() {
                entry.insert(options[(i + k) % options.len()].clone());
            }
        }
    }
    let mut sub = Submission::new(class.clone());
    sub.values = chosen
        .into_iter()
        .filter(|(_, v)| !v.is_empty())
        .map(|(p, v)| ValueEntry::individuals(p, v))
        .collect();
    sub
}

fn count_values(sub: &Submission) -> usize {
    sub.values.iter().map(|v| v.individuals.len() + v.literals.len()).sum()
}

type Normal = (Iri, Option<String>, BTreeMap<Iri, (BTreeSet<Iri>, Vec<String>)>);

fn normalize(sub: &Submission) -> Normal {
    let mut values = BTreeMap::new();
    for v in &sub.values {
        let mut creations: Vec<String> = v.creations.iter().map(|c| format!("{:?}", normalize(c))).collect();
        creations.sort();
        let individuals: BTreeSet<Iri> = v.individuals.iter().cloned().collect();
        if !(individuals.is_empty() && creations.is_empty()) {
            values.insert(v.property.clone(), (individuals, creations));
        }
    }
    (sub.chosen_class.clone(), sub.display_label.clone(), values)
}

fn arb_iri() -> impl Strategy<Value = Iri> {
    prop_oneof![
        "[a-z][a-zA-Z0-9_]{0,6}".prop_map(|l| Iri::new(format!("http://ex.org/{l}"))),
        "[a-z .#/-]{0,8}".prop_map(|l| Iri::new(format!("http://other.org/{l}"))),
    ]
}

fn arb_literal() -> impl Strategy<Value = Literal> {
    prop_oneof![
        any::<String>().prop_map(Literal::plain),
        ("\\PC{0,10}", "[a-z]{2}(-[a-z]{2})?").prop_map(|(s, l)| Literal::lang(s, l)),
        (any::<i64>()).prop_map(|n| Literal::typed(n.to_string(), Iri::new(ontoforms_core::vocab::xsd::INTEGER))),
        ("\\PC{0,10}", arb_iri()).prop_map(|(s, d)| Literal::typed(s, d)),
    ]
}

fn arb_triple() -> impl Strategy<Value = Triple> {
    let subject = prop_oneof![
        arb_iri().prop_map(ontoforms_core::Subject::Iri),
        "[a-z][a-z0-9]{0,4}".prop_map(ontoforms_core::Subject::BlankNode),
    ];
    let object = prop_oneof![
        arb_iri().prop_map(ontoforms_core::Term::Iri),
        arb_literal().prop_map(ontoforms_core::Term::Literal),
        "[a-z][a-z0-9]{0,4}".prop_map(ontoforms_core::Term::BlankNode),
    ];
    (subject, arb_iri(), object).prop_map(|(s, p, o)| Triple::new(s, p, o))
}
