#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{HeaderMap, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use ontoforms_core::vocab::{owl, rdfs};
use ontoforms_core::{DomainExpr, Graph, Iri, Repository, Subject, Term};
use serde_json::Value;
use tower::ServiceExt;

pub const FOOD: &str = "http://www.w3.org/TR/2003/PR-owl-guide-20031209/food#";
pub const WINE: &str = "http://www.w3.org/TR/2003/PR-owl-guide-20031209/wine#";

pub fn food(local: &str) -> String {
    format!("{FOOD}{local}")
}

pub fn wine(local: &str) -> String {
    format!("{WINE}{local}")
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares `actual` with a stored golden file; `UPDATE_GOLDEN=1` rewrites it.
pub fn assert_golden(name: &str, actual: &Value) {
    let path = golden_path(name);
    let text = serde_json::to_string_pretty(actual).unwrap() + "\n";
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}", path.display()));
    assert_eq!(text, expected, "golden {name} differs");
}

pub struct TestApp {
    pub app: Router,
    pub repo: Arc<Repository>,
    _dir: tempfile::TempDir,
}

pub struct Reply {
    pub status: StatusCode,
    pub headers: HeaderMap,
    pub body: Vec<u8>,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_slice(&self.body).unwrap_or_else(|e| panic!("{e}: {}", self.text()))
    }

    pub fn text(&self) -> String {
        String::from_utf8_lossy(&self.body).into_owned()
    }
}

impl TestApp {
    pub fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let repo = Arc::new(Repository::open(dir.path()).unwrap());
        TestApp {
            app: ontoforms::router_with_cors(repo.clone(), true),
            repo,
            _dir: dir,
        }
    }

    pub async fn call(&self, method: &str, uri: &str, body: Option<Value>) -> Reply {
        let mut req = Request::builder().method(method).uri(uri);
        let body = match body {
            Some(v) => {
                req = req.header("content-type", "application/json");
                Body::from(serde_json::to_vec(&v).unwrap())
            }
            None => Body::empty(),
        };
        let res = self.app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
        let status = res.status();
        let headers = res.headers().clone();
        let body = res.into_body().collect().await.unwrap().to_bytes().to_vec();
        Reply { status, headers, body }
    }

    pub async fn upload(&self, name: &str, fixture_name: &str) -> String {
        let r = self
            .call("POST", "/ontologies", Some(serde_json::json!({"name": name, "turtle": fixture(fixture_name)})))
            .await;
        assert_eq!(r.status, StatusCode::CREATED, "{}", r.text());
        r.json()["id"].as_str().unwrap().to_owned()
    }
}

pub fn encode(s: &str) -> String {
    let mut out = String::new();
    for b in s.bytes() {
        if b.is_ascii_alphanumeric() || b"-._~".contains(&b) {
            out.push(b as char);
        } else {
            out.push_str(&format!("%{b:02X}"));
        }
    }
    out
}

pub fn form_uri(id: &str, class: &str) -> String {
    format!("/ontologies/{id}/form?class={}", encode(class))
}

/// Property IRIs of the top-level elements of a form JSON.
pub fn element_properties(form: &Value) -> BTreeSet<String> {
    form["elements"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["property"].as_str().unwrap().to_owned())
        .collect()
}

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

pub fn oracle_admits(domain: &DomainExpr, supers: &BTreeSet<Iri>) -> bool {
    match domain {
        DomainExpr::Unspecified | DomainExpr::Thing => true,
        DomainExpr::Named(c) => supers.contains(c),
        DomainExpr::UnionOf(ms) => ms.iter().any(|m| oracle_admits(m, supers)),
        DomainExpr::IntersectionOf(ms) => ms.iter().all(|m| oracle_admits(m, supers)),
    }
}
