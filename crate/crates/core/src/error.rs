use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("item {item} is valued zero by every agent; each good needs a positive valuer")]
    ZeroColumn { item: usize },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),
    #[error("invalid lottery: {0}")]
    InvalidLottery(String),
    #[error("allocation is not complete")]
    Incomplete,
    #[error("constraint family is not a bihierarchy: {0}")]
    NotBihierarchy(String),
    #[error("constraint {index} of hierarchy {hierarchy} is violated by the input")]
    QuotaViolated { hierarchy: usize, index: usize },
    #[error("instance kind mismatch: expected {expected}, found {found}")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("property `{property}` does not apply here: {reason}")]
    NotApplicable {
        property: &'static str,
        reason: String,
    },
    #[error("support grew past the limit of {limit}; use the polynomial-support mode")]
    SupportExplosion { limit: usize },
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("iteration limit reached: {0}")]
    IterationLimit(String),
    #[error("allocation is not proportional for agent {agent}")]
    NotProportional { agent: usize },
    #[error("agent {agent} has zero utility but values some item positively")]
    ZeroUtility { agent: usize },
    #[error("agent {agent} must have strictly negative utility")]
    NonNegativeUtility { agent: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("linear program failure: {0}")]
    Lp(String),
}

impl Error {
    /// True for errors that come from hitting a size or iteration cap.
    pub fn is_limit(&self) -> bool {
        matches!(
            self,
            Error::SupportExplosion { .. } | Error::SizeLimit(_) | Error::IterationLimit(_)
        )
    }
}
