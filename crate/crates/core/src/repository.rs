//! File-backed store of uploaded ontologies, their A-boxes and form configs.
//!
//! Layout under the data directory:
//!
//! ```text
//! index.json
//! ontologies/<id>/ontology.ttl   uploaded document, never rewritten
//! ontologies/<id>/abox.ttl       individuals added through forms
//! ontologies/<id>/config.json    FormConfig
//! ```

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, MutexGuard, PoisonError, RwLock};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::FormConfig;
use crate::model::OntologyModel;
use crate::populate::PopulationResult;
use crate::rdf::{graph_union, parse_turtle, serialize_turtle, Graph, Iri};

pub const DATA_DIR_ENV: &str = "ONTOFORMS_DATA_DIR";
const INDEX_FILE: &str = "index.json";
const TBOX_FILE: &str = "ontology.ttl";
const ABOX_FILE: &str = "abox.ttl";
const CONFIG_FILE: &str = "config.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OntologyRecord {
    pub id: String,
    pub iri: Iri,
    pub name: String,
    /// Paths are relative to the data directory.
    pub tbox_path: PathBuf,
    pub abox_path: PathBuf,
    pub config_path: PathBuf,
    pub created_at: DateTime<Utc>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct StoreIndex {
    records: Vec<OntologyRecord>,
}

#[derive(Clone, Debug)]
pub struct Upload {
    pub record: OntologyRecord,
    pub warnings: Vec<String>,
}

/// `./data` unless `ONTOFORMS_DATA_DIR` is set.
pub fn default_data_dir() -> PathBuf {
    std::env::var_os(DATA_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("data"))
}

/// Lowercased name with every non-alphanumeric character replaced by `-`.
pub fn slugify(name: &str) -> String {
    let slug: String = name
        .chars()
        .flat_map(char::to_lowercase)
        .map(|c| if c.is_alphanumeric() { c } else { '-' })
        .collect();
    if slug.is_empty() {
        "ontology".to_owned()
    } else {
        slug
    }
}

/// Writes `contents` next to `path` and renames it into place.
fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Storage(e.error))?;
    Ok(())
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(PoisonError::into_inner)
}

pub struct Repository {
    root: PathBuf,
    index: RwLock<StoreIndex>,
    writers: Mutex<HashMap<String, Arc<Mutex<()>>>>,
}

impl Repository {
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(root.join("ontologies"))?;
        let index_path = root.join(INDEX_FILE);
        let index = if index_path.exists() {
            serde_json::from_slice(&fs::read(&index_path)?)?
        } else {
            StoreIndex::default()
        };
        Ok(Repository {
            root,
            index: RwLock::new(index),
            writers: Mutex::new(HashMap::new()),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn list(&self) -> Vec<OntologyRecord> {
        self.index.read().unwrap_or_else(PoisonError::into_inner).records.clone()
    }

    pub fn record(&self, id: &str) -> Result<OntologyRecord> {
        self.index
            .read()
            .unwrap_or_else(PoisonError::into_inner)
            .records
            .iter()
            .find(|r| r.id == id)
            .cloned()
            .ok_or_else(|| Error::NotFound(id.to_owned()))
    }

    fn writer(&self, id: &str) -> Arc<Mutex<()>> {
        lock(&self.writers).entry(id.to_owned()).or_default().clone()
    }

    pub fn upload(&self, name: &str, document: &str) -> Result<Upload> {
        let graph = parse_turtle(document)?;
        let model = OntologyModel::from_graph(graph)?;
        let mut warnings = model.warnings().to_vec();

        let mut index = self.index.write().unwrap_or_else(PoisonError::into_inner);
        let base = slugify(name);
        let taken = |id: &str| index.records.iter().any(|r| r.id == id);
        let id = if taken(&base) {
            let id = (2u64..)
                .map(|n| format!("{base}-{n}"))
                .find(|c| !taken(c))
                .expect("unbounded counter");
            warnings.push(format!("an ontology named '{name}' already exists; stored as '{id}'"));
            id
        } else {
            base
        };

        let dir = Path::new("ontologies").join(&id);
        let record = OntologyRecord {
            id: id.clone(),
            iri: model.iri.clone(),
            name: name.to_owned(),
            tbox_path: dir.join(TBOX_FILE),
            abox_path: dir.join(ABOX_FILE),
            config_path: dir.join(CONFIG_FILE),
            created_at: Utc::now(),
        };
        fs::create_dir_all(self.root.join(&dir))?;
        write_atomic(&self.root.join(&record.tbox_path), document.as_bytes())?;
        write_atomic(&self.root.join(&record.abox_path), b"")?;
        write_atomic(
            &self.root.join(&record.config_path),
            &serde_json::to_vec_pretty(&FormConfig::default())?,
        )?;
        index.records.push(record.clone());
        write_atomic(&self.root.join(INDEX_FILE), &serde_json::to_vec_pretty(&*index)?)?;
        Ok(Upload { record, warnings })
    }

    pub fn tbox(&self, id: &str) -> Result<Graph> {
        let record = self.record(id)?;
        parse_turtle(&fs::read_to_string(self.root.join(&record.tbox_path))?)
    }

    pub fn abox(&self, id: &str) -> Result<Graph> {
        let record = self.record(id)?;
        parse_turtle(&fs::read_to_string(self.root.join(&record.abox_path))?)
    }

    fn union(&self, id: &str) -> Result<Graph> {
        Ok(graph_union(&self.tbox(id)?, &self.abox(id)?))
    }

    pub fn load_model(&self, id: &str) -> Result<OntologyModel> {
        OntologyModel::from_graph(self.union(id)?)
    }

    pub fn save_abox(&self, id: &str, graph: &Graph) -> Result<()> {
        let record = self.record(id)?;
        write_atomic(&self.root.join(&record.abox_path), serialize_turtle(graph).as_bytes())
    }

    pub fn get_config(&self, id: &str) -> Result<FormConfig> {
        let record = self.record(id)?;
        Ok(serde_json::from_slice(&fs::read(self.root.join(&record.config_path))?)?)
    }

    pub fn put_config(&self, id: &str, config: &FormConfig) -> Result<()> {
        let record = self.record(id)?;
        let writer = self.writer(id);
        let _guard = lock(&writer);
        write_atomic(&self.root.join(&record.config_path), &serde_json::to_vec_pretty(config)?)
    }

    pub fn export(&self, id: &str) -> Result<String> {
        Ok(serialize_turtle(&self.union(id)?))
    }

    /// Runs `change` against the current model under the ontology's writer
    /// lock and stores the resulting A-box. Values asserted by the uploaded
    /// document itself cannot be retracted.
    pub fn modify_abox(
        &self,
        id: &str,
        change: impl FnOnce(&OntologyModel) -> Result<PopulationResult>,
    ) -> Result<PopulationResult> {
        let writer = self.writer(id);
        let _guard = lock(&writer);
        let tbox = self.tbox(id)?;
        let mut abox = self.abox(id)?;
        let model = OntologyModel::from_graph(graph_union(&tbox, &abox))?;
        let result = change(&model)?;
        if let Some(fixed) = result.removed_triples.iter().find(|t| tbox.contains(t)) {
            return Err(Error::Validation {
                property: Some(fixed.predicate.clone()),
                reason: "value is asserted by the uploaded ontology and cannot be changed".into(),
            });
        }
        for (prefix, ns) in tbox.prefixes() {
            if !abox.prefixes().contains_key(prefix) {
                abox.bind_prefix(prefix.clone(), ns.clone());
            }
        }
        result.apply(&mut abox);
        self.save_abox(id, &abox)?;
        Ok(result)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::populate::{populate, Submission};
    use crate::form::generate_form;

    const DOC: &str = "@prefix owl: <http://www.w3.org/2002/07/owl#> .
        @prefix : <http://ex.org/r#> .
        <http://ex.org/r> a owl:Ontology .
        :Meal a owl:Class .";

    #[test]
    fn slugs() {
        assert_eq!(slugify("wine.rdf"), "wine-rdf");
        assert_eq!(slugify("My Food"), "my-food");
        assert_eq!(slugify(""), "ontology");
    }

    #[test]
    fn upload_collision_and_reopen() {
        let dir = tempfile::tempdir().unwrap();
        let repo = Repository::open(dir.path()).unwrap();
        let a = repo.upload("wine.rdf", DOC).unwrap();
        let b = repo.upload("wine.rdf", DOC).unwrap();
        assert_eq!(a.record.id, "wine-rdf");
        assert_eq!(b.record.id, "wine-rdf-2");
        assert!(a.warnings.is_empty());
        assert_eq!(b.warnings.len(), 1);
        assert_eq!(a.record.iri.as_str(), "http://ex.org/r");

        let reopened = Repository::open(dir.path()).unwrap();
        assert_eq!(reopened.list(), repo.list());
        for r in reopened.list() {
            assert!(dir.path().join(&r.tbox_path).exists());
            assert!(dir.path().join(&r.abox_path).exists());
            assert!(dir.path().join(&r.config_path).exists());
        }
        assert_eq!(reopened.get_config("wine-rdf").unwrap(), FormConfig::default());
        assert!(matches!(reopened.load_model("nope"), Err(Error::NotFound(_))));
    }

    #[test]
    fn parse_error_stores_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let repo = Repository::open(dir.path()).unwrap();
        assert!(repo.upload("bad", "@prefix x <oops> .").unwrap_err().is_parse());
        assert!(repo.list().is_empty());
        assert!(!dir.path().join("ontologies/bad").exists());
    }

    #[test]
    fn populate_grows_abox_and_keeps_tbox() {
        let dir = tempfile::tempdir().unwrap();
        let repo = Repository::open(dir.path()).unwrap();
        let rec = repo.upload("r", DOC).unwrap().record;
        let before = repo.load_model("r").unwrap().source.len();
        let meal = Iri::new("http://ex.org/r#Meal");
        let result = repo
            .modify_abox("r", |m| {
                let form = generate_form(m, &meal, &FormConfig::default())?.form;
                populate(m, &form, &Submission::new(meal.clone()))
            })
            .unwrap();
        let after = repo.load_model("r").unwrap().source.len();
        assert_eq!(after - before, result.added_triples.len());
        assert_eq!(fs::read_to_string(dir.path().join(&rec.tbox_path)).unwrap(), DOC);
        assert!(repo.export("r").unwrap().contains("Meal_1"));
    }
}
