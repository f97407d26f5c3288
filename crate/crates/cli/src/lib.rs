//! Experiment driver for periodic-coin quantum walks.
//!
//! The binary `qwalk` is a thin wrapper over this library so the same entry
//! points can be exercised from tests: [`commands::run_case`],
//! [`commands::sweep`], [`figures::reproduce_figures`] and
//! [`validate::run_checks`].

pub mod commands;
pub mod config;
mod error;
pub mod figures;
pub mod output;
pub mod plot;
pub mod validate;

pub use error::CliError;
