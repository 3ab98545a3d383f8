//! Command-line front end and comparison harness for `hcluster`.

pub mod cli;
pub mod compare;
pub mod config;
pub mod error;
pub mod fmt;

pub use error::{BenchError, Result};
