//! Command-line front end of the `life` binary.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use life_core::store::{DocumentStore, FileStore, MemoryStore};
use life_core::Role;

use crate::config::Config;
use crate::service::{Access, ExportFormat, ImportFormat, NewProject, Service};

#[derive(Debug, Parser)]
#[command(name = "life", version, about = "Language documentation server and tools")]
pub struct Cli {
    /// Configuration file (TOML).
    #[arg(long, short, global = true, env = "LIFE_CONFIG")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the HTTP server.
    Serve,
    /// Manage user accounts.
    #[command(subcommand)]
    User(UserCommand),
    /// Manage projects.
    #[command(subcommand)]
    Project(ProjectCommand),
    /// Import a file into a project.
    Import {
        #[arg(long)]
        project: String,
        /// sfm, json, csv or igt
        #[arg(long)]
        format: String,
        /// Title for an imported interlinear text.
        #[arg(long)]
        title: Option<String>,
        file: PathBuf,
    },
    /// Export a project.
    Export {
        #[arg(long)]
        project: String,
        /// ontolex-ttl, ligt-ttl, nt, json, csv or sfm
        #[arg(long)]
        format: String,
        /// Output file; standard output when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Train or evaluate the project glosser.
    #[command(subcommand)]
    Gloss(GlossCommand),
}

#[derive(Debug, Subcommand)]
pub enum UserCommand {
    /// Create a user. The password comes from --password, LIFE_PASSWORD or the first line of stdin.
    Add {
        username: String,
        #[arg(long, env = "LIFE_PASSWORD", hide_env_values = true)]
        password: Option<String>,
        #[arg(long)]
        email: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ProjectCommand {
    /// Create a project owned by an existing user.
    Create {
        #[arg(long)]
        name: String,
        #[arg(long)]
        language_name: String,
        #[arg(long)]
        language_code: String,
        #[arg(long)]
        owner: String,
        /// Comma-separated alphabet units in collation order.
        #[arg(long, value_delimiter = ',')]
        alphabet: Vec<String>,
    },
    /// List all projects.
    List,
}

#[derive(Debug, Subcommand)]
pub enum GlossCommand {
    /// Retrain from the full corpus.
    Train {
        #[arg(long)]
        project: String,
    },
    /// Hold out every n-th glossed utterance and report scores.
    Eval {
        #[arg(long)]
        project: String,
        #[arg(long, default_value_t = 10)]
        every: usize,
    },
}

/// Loads the configuration for `cli`, with environment overrides.
pub fn load_config(cli: &Cli) -> anyhow::Result<Config> {
    Ok(Config::load(cli.config.as_deref())?)
}

/// Opens the configured store; offline commands need a data directory.
pub fn open_store(config: &Config, offline: bool) -> anyhow::Result<Arc<dyn DocumentStore>> {
    match &config.data_dir {
        Some(dir) => Ok(Arc::new(FileStore::open(dir).with_context(|| format!("opening {}", dir.display()))?)),
        None if offline => bail!("data_dir must be set (config file or LIFE_DATA_DIR) for this command"),
        None => {
            tracing::warn!("no data_dir configured, using an in-memory store");
            Ok(Arc::new(MemoryStore::new()))
        }
    }
}

/// Runs every command except `serve`, writing results to `out`.
pub fn run_offline(service: &Service, command: Command, input: &mut dyn BufRead, out: &mut dyn Write) -> anyhow::Result<()> {
    match command {
        Command::Serve => bail!("serve is not an offline command"),
        Command::User(UserCommand::Add { username, password, email }) => {
            let password = match password {
                Some(p) => p,
                None => {
                    let mut line = String::new();
                    input.read_line(&mut line)?;
                    line.trim_end_matches(['\r', '\n']).to_owned()
                }
            };
            let user = service.create_user(&username, &password, email)?;
            writeln!(out, "{}", user.id)?;
        }
        Command::Project(ProjectCommand::Create { name, language_name, language_code, owner, alphabet }) => {
            let user = service.find_user(&owner)?.with_context(|| format!("no user named {owner:?}"))?;
            let req = NewProject {
                name,
                language_name,
                language_code,
                alphabet,
                pos_inventory: Vec::new(),
                metalanguage: None,
            };
            let project = service.create_project(&user.id, req)?;
            writeln!(out, "{} {}", project.id, project.slug)?;
        }
        Command::Project(ProjectCommand::List) => {
            for p in service.all_projects()? {
                writeln!(out, "{}\t{}\t{}", p.id, p.slug, p.name)?;
            }
        }
        Command::Import { project, format, title, file } => {
            let access = owner_access(service, &project)?;
            let format = ImportFormat::parse(&format)?;
            let bytes = read(&file)?;
            let report = service.import(&access, format, &bytes, title.as_deref())?;
            serde_json::to_writer_pretty(&mut *out, &report)?;
            writeln!(out)?;
        }
        Command::Export { project, format, output } => {
            let project = service.project_by_slug(&project)?;
            let bytes = service.export(&project, ExportFormat::parse(&format)?)?;
            match output {
                Some(path) => std::fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?,
                None => out.write_all(&bytes)?,
            }
        }
        Command::Gloss(GlossCommand::Train { project }) => {
            let project = service.project_by_slug(&project)?;
            let version = service.retrain(&project.id)?;
            writeln!(out, "model version {version}")?;
        }
        Command::Gloss(GlossCommand::Eval { project, every }) => {
            let project = service.project_by_slug(&project)?;
            let m = service.evaluate_heldout(&project.id, every)?;
            writeln!(out, "utterances   {}", m.n_utterances)?;
            writeln!(out, "gloss acc    {:.4}", m.morph_gloss_accuracy)?;
            writeln!(out, "seg P/R/F1   {:.4} {:.4} {:.4}", m.seg_precision, m.seg_recall, m.seg_f1)?;
        }
    }
    Ok(())
}

fn read(path: &Path) -> anyhow::Result<Vec<u8>> {
    std::fs::read(path).with_context(|| format!("reading {}", path.display()))
}

/// Offline writes act as the project's first owner.
fn owner_access(service: &Service, slug: &str) -> anyhow::Result<Access> {
    let project = service.project_by_slug(slug)?;
    let user_id = project
        .members
        .iter()
        .find(|(_, r)| **r == Role::Owner)
        .map(|(id, _)| id.clone())
        .context("project has no owner")?;
    Ok(Access { user_id, role: Role::Owner, project })
}

/// Serves the API until ctrl-c or SIGTERM.
pub async fn serve(service: Arc<Service>) -> anyhow::Result<()> {
    service.config().validate_secret()?;
    let addr = service.config().socket_addr()?;
    let listener = tokio::net::TcpListener::bind(addr).await.with_context(|| format!("binding {addr}"))?;
    tracing::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, crate::api::router(service)).with_graceful_shutdown(shutdown()).await?;
    Ok(())
}

async fn shutdown() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let term = async {
        if let Ok(mut s) = tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            s.recv().await;
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = term => {},
    }
    tracing::info!("shutting down");
}
