//! Benchmark harness for `frselect`: input families, seeded trial runs
//! with an oracle gate, bound validation and table output.

pub mod bounds;
pub mod experiment;
pub mod generate;
pub mod table;

pub use bounds::{hypergeometric_check, validate_bounds, BoundReport, Event, EventCheck, HypergeometricCheck};
pub use experiment::{run_experiment, run_experiment_with, ExperimentError, RunOptions, TrialRecord, TrialReport};
pub use generate::{generate, Family, InputSpec, KRule};
pub use table::{emit_table, TableFormat};
