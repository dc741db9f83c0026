use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("prime mismatch: {left} vs {right}")]
    PrimeMismatch { left: u64, right: u64 },

    #[error("precision mismatch: {left} vs {right} digits")]
    PrecisionMismatch { left: usize, right: usize },

    #[error("precision must be at least one digit")]
    ZeroPrecision,

    #[error("p^{exponent} does not fit the supported range for p = {p}")]
    PrecisionOverflow { p: u64, exponent: u32 },

    #[error("digit {digit} out of range for base {p}")]
    InvalidDigit { digit: u64, p: u64 },

    #[error("value {value} is not below p^{level}")]
    ValueOutOfRange { value: u64, level: u32 },

    #[error("level {requested} exceeds available precision {available}")]
    LevelTooHigh { requested: u32, available: u32 },

    #[error("{value} is not invertible modulo {p}")]
    NotInvertible { value: i128, p: u64 },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("permutation size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("function is not compatible: {0}")]
    NotCompatible(String),

    #[error("reduced map modulo p^{level} is not bijective: f({first}) = f({second})")]
    NotBijective { level: u32, first: u64, second: u64 },

    #[error("form mismatch at level {k}, prefix {prefix}: {detail}")]
    FormMismatch { k: u32, prefix: u64, detail: String },

    #[error(
        "p = {0} is not supported by this criterion (the class-specific criteria are stated for odd p only; the p = 2 case is open)"
    )]
    UnsupportedPrime(u64),

    #[error("uniform differentiability fails at k = {k}: x = {x}, h = {h}")]
    DiffMismatch { k: u32, x: u64, h: u64 },

    #[error("inexact division by p^{k}: numerator {numerator} ({context})")]
    InexactDivision { k: u32, numerator: u64, context: String },

    #[error("{0} is not transitive")]
    NotTransitive(String),

    #[error("coordinate tables would hold {entries} entries (cap {cap})")]
    TableTooLarge { entries: u64, cap: u64 },

    #[error("requested depth {requested} exceeds certified depth {certified}")]
    DepthExceeded { requested: u32, certified: u32 },

    #[error("unknown family {0:?}")]
    UnknownFamily(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("json: {0}")]
    Json(String),

    #[error("output: {0}")]
    Output(String),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
