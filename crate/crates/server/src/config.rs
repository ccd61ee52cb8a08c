//! Server configuration.
//!
//! A TOML file of top-level keys:
//!
//! ```toml
//! addr = "127.0.0.1:8080"
//! data_dir = "/var/lib/life"      # omit for an in-memory store
//! base_iri = "https://data.example.org/"
//! secret = "at least sixteen characters"
//! token_ttl_hours = 24
//! max_upload_bytes = 67108864
//! ```
//!
//! `LIFE_ADDR`, `LIFE_DATA_DIR`, `LIFE_BASE_IRI` and `LIFE_SECRET` override
//! the corresponding keys.

use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

pub const DEFAULT_ADDR: &str = "127.0.0.1:8080";
pub const DEFAULT_BASE_IRI: &str = "http://localhost:8080/";
pub const DEFAULT_TOKEN_TTL_HOURS: i64 = 24;
pub const DEFAULT_MAX_UPLOAD_BYTES: usize = 64 * 1024 * 1024;
pub const MIN_SECRET_LEN: usize = 16;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid configuration: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid {key}: {message}")]
    Invalid { key: &'static str, message: String },
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub addr: String,
    pub data_dir: Option<PathBuf>,
    pub base_iri: String,
    pub secret: String,
    pub token_ttl_hours: i64,
    pub max_upload_bytes: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            addr: DEFAULT_ADDR.to_owned(),
            data_dir: None,
            base_iri: DEFAULT_BASE_IRI.to_owned(),
            secret: String::new(),
            token_ttl_hours: DEFAULT_TOKEN_TTL_HOURS,
            max_upload_bytes: DEFAULT_MAX_UPLOAD_BYTES,
        }
    }
}

impl Config {
    /// Reads `path` if given, applies environment overrides and validates
    /// everything except the secret, which only `serve` needs.
    pub fn load(path: Option<&Path>) -> Result<Config, ConfigError> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p).map_err(|source| ConfigError::Read { path: p.to_owned(), source })?,
            None => String::new(),
        };
        let mut config = Config::from_toml(&text)?;
        config.apply_env(|k| std::env::var(k).ok());
        config.validate()?;
        Ok(config)
    }

    pub fn from_toml(text: &str) -> Result<Config, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn apply_env(&mut self, var: impl Fn(&str) -> Option<String>) {
        if let Some(v) = var("LIFE_ADDR") {
            self.addr = v;
        }
        if let Some(v) = var("LIFE_DATA_DIR") {
            self.data_dir = (!v.is_empty()).then(|| PathBuf::from(v));
        }
        if let Some(v) = var("LIFE_BASE_IRI") {
            self.base_iri = v;
        }
        if let Some(v) = var("LIFE_SECRET") {
            self.secret = v;
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.socket_addr()?;
        life_core::linkeddata::MappingContext::new(&self.base_iri, "check", "und")
            .map_err(|e| ConfigError::Invalid { key: "base_iri", message: e.to_string() })?;
        if self.token_ttl_hours < 1 {
            return Err(ConfigError::Invalid { key: "token_ttl_hours", message: "must be positive".into() });
        }
        if self.max_upload_bytes == 0 {
            return Err(ConfigError::Invalid { key: "max_upload_bytes", message: "must be positive".into() });
        }
        Ok(())
    }

    pub fn validate_secret(&self) -> Result<(), ConfigError> {
        if self.secret.chars().count() < MIN_SECRET_LEN {
            return Err(ConfigError::Invalid {
                key: "secret",
                message: format!("must be at least {MIN_SECRET_LEN} characters"),
            });
        }
        Ok(())
    }

    pub fn socket_addr(&self) -> Result<SocketAddr, ConfigError> {
        self.addr.parse().map_err(|e: std::net::AddrParseError| ConfigError::Invalid { key: "addr", message: e.to_string() })
    }
}
