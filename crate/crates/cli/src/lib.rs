//! Scenario runner behind the `pullback-lab` binary: configuration loading,
//! scenario dispatch and artifact emission.

pub mod config;
pub mod error;
pub mod output;
pub mod scenarios;
