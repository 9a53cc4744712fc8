use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by jet arithmetic, model construction and the verifier.
#[derive(Debug, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },

    #[error("variable index {index} out of range for {num_vars} variables")]
    VariableIndexOutOfRange { index: usize, num_vars: usize },

    #[error("exponent vector length {len} does not match {num_vars} variables")]
    ExponentLengthMismatch { len: usize, num_vars: usize },

    #[error("coefficient of degree {degree} requested from a jet reliable only to order {order}")]
    CoefficientBeyondOrder { degree: u32, order: u32 },

    #[error("expected {expected} substitution jets, got {got}")]
    SubstitutionArity { expected: usize, got: usize },

    #[error("substitution jet for variable {var} has a nonzero constant term")]
    SubstitutionConstantTerm { var: usize },

    #[error("substitution jets disagree on variable count or reliable order")]
    SubstitutionSpaceMismatch,

    #[error("embedding slot map is not injective")]
    EmbedNotInjective,

    #[error("embedding slot {slot} out of range for {target} target variables")]
    EmbedSlotOutOfRange { slot: usize, target: usize },

    #[error("slot map length {len} does not match {num_vars} source variables")]
    EmbedMapLength { len: usize, num_vars: usize },

    #[error("jet vector components disagree on variable count or reliable order")]
    InconsistentComponents,

    #[error("requested order {requested} exceeds the global cap {cap} (override with MOUFANG_MAX_ORDER)")]
    OrderCapExceeded { requested: u32, cap: u32 },

    #[error("order must be at least {minimum}, got {got}")]
    OrderTooSmall { minimum: u32, got: u32 },

    #[error("model input order {got} is insufficient: {what} needs order >= {needed}")]
    InsufficientOrder {
        what: &'static str,
        needed: u32,
        got: u32,
    },

    #[error("custom model violates the unit law in component {component}: {detail}")]
    UnitLawViolation { component: usize, detail: String },

    #[error("invalid custom model: {0}")]
    InvalidModel(String),

    #[error("invalid rational literal '{0}'")]
    InvalidRational(String),

    #[error("unknown model '{0}'")]
    UnknownModel(String),

    #[error("unknown check '{0}'")]
    UnknownCheck(String),

    #[error("check '{check}' requires order >= {needed}, got {got}")]
    CheckNeedsOrder {
        check: &'static str,
        needed: u32,
        got: u32,
    },

    #[error("third-order associator data is absent (needs input order >= 4)")]
    MissingThirdOrder,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
