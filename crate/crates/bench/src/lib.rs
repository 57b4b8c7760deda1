//! Inputs shared by the benchmarks.

use std::path::PathBuf;

use ontoforms_core::{extract_model, parse_turtle, OntologyModel};

pub fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(path).expect("fixture present")
}

pub fn wine_model() -> OntologyModel {
    extract_model(parse_turtle(&fixture("wine-food.ttl")).expect("fixture parses")).expect("fixture model")
}

/// A synthetic hierarchy: `depth` levels, `fan` children per class, and one
/// property declared on every class.
pub fn synthetic(depth: usize, fan: usize) -> String {
    let mut out = String::from(
        "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n\
         @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n\
         @prefix : <http://bench.example/s#> .\n\
         :C a owl:Class .\n",
    );
    let mut level = vec!["C".to_owned()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for parent in &level {
            for i in 0..fan {
                let child = format!("{parent}_{i}");
                out.push_str(&format!(":{child} rdfs:subClassOf :{parent} .\n"));
                out.push_str(&format!(
                    ":p{child} a owl:ObjectProperty ; rdfs:domain :{parent} ; rdfs:range :{child} .\n"
                ));
                next.push(child);
            }
        }
        level = next;
    }
    out
}
