//! Library surface of the scenario harness, shared by the `kglab` binary
//! and the integration suites: configuration schema, report structures and
//! the scenario runner.

pub mod config;
pub mod report;
pub mod scenario;
