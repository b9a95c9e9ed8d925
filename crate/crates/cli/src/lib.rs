//! Experiment driver behind the `oshima` binary: config schema, report
//! envelope, the experiments and the acceptance suite.

pub mod config;
pub mod experiments;
pub mod report;
pub mod verify;
