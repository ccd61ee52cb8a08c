//! HTTP service and administrative command line for linguistic field data.
//!
//! [`api::router`] serves the REST interface under `/api/v1`; [`cli`]
//! implements the `life` command.

pub mod api;
pub mod auth;
pub mod cli;
pub mod config;
pub mod error;
pub mod service;

pub use config::Config;
pub use error::{ApiError, ApiResult};
pub use service::Service;
