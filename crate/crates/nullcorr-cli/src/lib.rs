//! Job configs, the task runner and deterministic reports for the `nullcorr` binary.

pub mod config;
pub mod run;

pub use config::{parse_field, parse_seed, preset, ConfigError, JobConfig, Task};
pub use run::{run, Report, TaskResult};
