//! Experiment drivers, file formats and CSV reporting for `boolmv-core`.

pub mod config;
pub mod error;
pub mod experiments;
pub mod formats;
pub mod report;

pub use config::{Mode, RSpec, SweepConfig};
pub use error::{BenchError, Result};
