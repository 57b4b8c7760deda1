//! HTTP service and command line front ends for the form engine.

pub mod api;
pub mod commands;

pub use api::{router, router_with_cors, ApiError};
pub use commands::{run, Cli, Command};
