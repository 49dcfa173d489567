//! Batch runner for emergent irq experiments.
//!
//! A run reads an [`ExperimentConfig`], resolves it into a [`Plan`], runs
//! one experiment on one carrier and writes one [`Row`] per checked identity.

pub mod config;
pub mod experiments;
pub mod report;

pub use config::{CarrierKind, CarrierSpec, Experiment, ExperimentConfig, Format, Overrides, Plan};
pub use experiments::{build_carrier, run};
pub use report::{sort_rows, write_rows, Row};
