use thiserror::Error;

use crate::lll::ResampleLog;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index {index} out of range (len {len})")]
    Index { index: usize, len: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("capacity exceeded: {needed} elementary checks > limit {limit}")]
    Capacity { needed: u128, limit: u128 },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("resample budget of {budget} exhausted after {} resamples", log.total_resamples)]
    ResampleBudget { budget: u64, log: Box<ResampleLog> },

    #[error("bound not applicable: {0}")]
    Applicability(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
