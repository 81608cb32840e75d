use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate Fisher matrix: f_ss = {f_ss:e} but f_sd = {f_sd:e}")]
    DegenerateMatrix { f_ss: f64, f_sd: f64 },

    #[error("Fisher information must be positive, got {0:e}")]
    NonPositiveInformation(f64),

    #[error("negative variance {0:e} (internal consistency failure)")]
    NegativeVariance(f64),

    #[error("phase sensitivity is infinite for every working point")]
    FlatObjective,

    #[error("detector efficiency {0} is outside (0, 1]")]
    InvalidEfficiency(f64),

    #[error("boundary {name} is undefined: {reason}")]
    UndefinedBoundary { name: &'static str, reason: String },

    #[error("Fock truncation too small: tail mass {tail:e} at n_max = {n_max}")]
    Truncation { tail: f64, n_max: usize },

    #[error("finite-difference step {h:e} too coarse: relative change {change:e} on halving")]
    StepTooCoarse { h: f64, change: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },
}
