use thiserror::Error;

use crate::params::ParamViolation;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SelectError {
    #[error("rank {k} out of range for {len} elements")]
    RankOutOfRange { k: usize, len: usize },
    #[error("invalid parameters: {}", join(.0))]
    InvalidParams(Vec<ParamViolation>),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScheduleError {
    #[error("gap undefined for sample size {0} (needs at least 2)")]
    SampleTooSmall(usize),
    #[error("target fraction {0} outside (0, 1]")]
    FractionOutOfRange(f64),
}

fn join(v: &[ParamViolation]) -> String {
    v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; ")
}
