//! Command line: a server plus offline file-to-file versions of the
//! form and populate endpoints.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use ontoforms_core::repository::{default_data_dir, DATA_DIR_ENV};
use ontoforms_core::{
    extract_model, generate_form, ontology_detail, parse_turtle, populate, serialize_turtle, Error, FormConfig,
    Graph, Iri, OntologyModel, Repository, Submission,
};

#[derive(Debug, Parser)]
#[command(name = "ontoforms", version, about = "Forms generated from OWL ontologies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, env = DATA_DIR_ENV)]
        data_dir: Option<PathBuf>,
    },
    /// Write the form structure for a class as JSON.
    Form {
        #[arg(long)]
        onto: PathBuf,
        #[arg(long)]
        class: String,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Turn a submission into Turtle triples.
    Populate {
        #[arg(long)]
        onto: PathBuf,
        #[arg(long)]
        class: String,
        #[arg(long)]
        submission: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the class tree, properties table and individuals as JSON.
    Inspect {
        #[arg(long)]
        onto: PathBuf,
    },
}

#[derive(Debug)]
pub enum CliError {
    Engine(Error),
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Engine(e) if e.is_parse() => ExitCode::from(2),
            _ => ExitCode::from(1),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Engine(e) => e.fmt(f),
            CliError::Input(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Engine(e)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_json<T: for<'de> serde::Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load(onto: &Path) -> Result<OntologyModel, CliError> {
    let model = extract_model(parse_turtle(&read(onto)?)?)?;
    for w in model.warnings() {
        log::warn!("{w}");
    }
    Ok(model)
}

fn load_config(path: Option<&Path>) -> Result<FormConfig, CliError> {
    path.map(read_json).transpose().map(Option::unwrap_or_default)
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Serve { port, host, data_dir } => serve(&host, port, data_dir.unwrap_or_else(default_data_dir)),
        Command::Form { onto, class, config, out } => {
            let model = load(&onto)?;
            let config = load_config(config.as_deref())?;
            let generated = generate_form(&model, &Iri::new(class), &config)?;
            for w in &generated.warnings {
                log::warn!("inline section for {} degraded to a selector at {}", w.property, w.context_class);
            }
            let json = serde_json::to_string_pretty(&generated.form).expect("serializable form") + "\n";
            match out {
                Some(path) => write(&path, &json),
                None => {
                    print!("{json}");
                    Ok(())
                }
            }
        }
        Command::Populate { onto, class, submission, config, out } => {
            let model = load(&onto)?;
            let config = load_config(config.as_deref())?;
            let submission: Submission = read_json(&submission)?;
            let form = generate_form(&model, &Iri::new(class), &config)?.form;
            let result = populate(&model, &form, &submission)?;
            let mut abox = Graph::new();
            for (prefix, ns) in model.source.prefixes() {
                abox.bind_prefix(prefix.clone(), ns.clone());
            }
            abox.extend(result.added_triples.iter().cloned());
            write(&out, &serialize_turtle(&abox))?;
            for minted in &result.minted {
                println!("{}", minted.iri);
            }
            Ok(())
        }
        Command::Inspect { onto } => {
            let model = load(&onto)?;
            let detail = ontology_detail(&model);
            println!("{}", serde_json::to_string_pretty(&detail).expect("serializable detail"));
            Ok(())
        }
    }
}

fn serve(host: &str, port: u16, data_dir: PathBuf) -> Result<(), CliError> {
    let repo = Arc::new(Repository::open(&data_dir)?);
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Input(e.to_string()))?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind((host, port))
            .await
            .map_err(|e| CliError::Input(format!("cannot bind {host}:{port}: {e}")))?;
        log::info!("serving {} on {host}:{port}", data_dir.display());
        axum::serve(listener, crate::api::router(repo))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
            .map_err(|e| CliError::Input(e.to_string()))
    })
}
