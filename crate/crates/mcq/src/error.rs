use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("degenerate instance: {0}")]
    Degenerate(String),
    #[error("retry cap reached: {0}")]
    RetryCap(String),
    #[error("memory budget exceeded: need about {need_mb} MB, budget {budget_mb} MB")]
    Budget { need_mb: u64, budget_mb: u64 },
    #[error("division by zero")]
    DivByZero,
    #[error("not a GRS code: {0}")]
    NotGrs(String),
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
