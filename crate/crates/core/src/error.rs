use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    #[error("coin parameter `{field}` = {value} is outside [{min}, {max}]")]
    CoinParamOutOfRange {
        field: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("initial spinor has norm² {norm_sqr}, expected 1 within {tol:e}")]
    NotNormalized { norm_sqr: f64, tol: f64 },

    #[error("t_max must be at least 1")]
    ZeroWindow,

    #[error("case {family}: {constraint} (got {value})")]
    InvalidCase {
        family: &'static str,
        constraint: &'static str,
        value: u32,
    },

    #[error("coin pattern is empty")]
    EmptyPattern,

    #[error("cannot parse coin pattern `{input}`: {reason}")]
    PatternSyntax { input: String, reason: String },

    #[error("layout references custom coin #{index} but the coin table holds {available}")]
    MissingCoin { index: usize, available: usize },

    #[error("step budget exhausted: state is at step {step} of t_max {t_max}")]
    StepBudgetExhausted { step: usize, t_max: usize },

    #[error("dense oracle window radius {radius} exceeds the maximum of {max}")]
    OracleTooLarge { radius: usize, max: usize },

    #[error("step window [{lo}, {hi}] is invalid: {reason}")]
    InvalidWindow {
        lo: usize,
        hi: usize,
        reason: &'static str,
    },

    #[error("peak height {0} must lie strictly between 0 and 1")]
    InvalidPeakHeight(f64),
}
