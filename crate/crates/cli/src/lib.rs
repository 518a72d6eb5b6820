//! Library side of the `boxproj` command-line tool.

pub mod commands;
pub mod error;
pub mod io;

pub use commands::{
    bench, demo_allocation, demo_logistic, project, AllocationRow, BenchRow, LogisticArgs,
    LogisticReport, ProjectSummary,
};
pub use error::{CliError, Result};
