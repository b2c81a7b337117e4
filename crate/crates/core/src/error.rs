use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("isolator does not contain exactly one root ({0})")]
    IsolatorInvalid(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("indeterminate at current precision: {0}")]
    Indeterminate(String),
    #[error("precision ceiling of {0} bits exhausted")]
    PrecisionExhausted(u32),
    #[error("degree {0} exceeds the configured cap")]
    DegreeCap(usize),
    #[error("zero vector has no height")]
    ZeroVector,
    #[error("constant polynomial has no height")]
    ConstantPolynomial,
    #[error("base is a root of unity")]
    RootOfUnity,
    #[error("base has height one")]
    HeightOne,
    #[error("term of degree {0} lies strictly inside the gap")]
    BadSplit(u64),
    #[error("window of length {n} exceeds word length {len}")]
    WindowTooLong { n: usize, len: usize },
    #[error("codings do not share a common slope")]
    SharedThetaViolation,
    #[error("intercepts {i} and {j} differ by an element of Z*theta + Z ({relation})")]
    DegenerateDifference { i: usize, j: usize, relation: String },
    #[error("prefix of length {have} too short, need {need}")]
    PrefixTooShort { have: usize, need: usize },
    #[error("no admissible window: mismatch budget exhausted at position 0")]
    NoWindow,
    #[error("mismatch set is not a union of consecutive pairs (first offending position {0})")]
    NotPaired(usize),
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("ball radius too large for the requested height bound")]
    PrecisionTooLow,
    #[error("tolerance unreachable within {0} iterations")]
    TolUnreachable(usize),
    #[error("itinerary symbol {0} cannot be certified")]
    ItineraryAmbiguous(usize),
    #[error("point is not on the attractor: {0}")]
    NotOnAttractor(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("unknown export kind {0:?}")]
    UnknownKind(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable short name, used in machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::IsolatorInvalid(_) => "IsolatorInvalid",
            Error::DivisionByZero => "DivisionByZero",
            Error::Indeterminate(_) => "Indeterminate",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::DegreeCap(_) => "DegreeCap",
            Error::ZeroVector => "ZeroVector",
            Error::ConstantPolynomial => "ConstantPolynomial",
            Error::RootOfUnity => "RootOfUnity",
            Error::HeightOne => "HeightOne",
            Error::BadSplit(_) => "BadSplit",
            Error::WindowTooLong { .. } => "WindowTooLong",
            Error::SharedThetaViolation => "SharedThetaViolation",
            Error::DegenerateDifference { .. } => "DegenerateDifference",
            Error::PrefixTooShort { .. } => "PrefixTooShort",
            Error::NoWindow => "NoWindow",
            Error::NotPaired(_) => "NotPaired",
            Error::IndexOutOfRange(_) => "IndexOutOfRange",
            Error::PrecisionTooLow => "PrecisionTooLow",
            Error::TolUnreachable(_) => "TolUnreachable",
            Error::ItineraryAmbiguous(_) => "ItineraryAmbiguous",
            Error::NotOnAttractor(_) => "NotOnAttractor",
            Error::Parse(_) => "ParseError",
            Error::Validation(_) => "ValidationError",
            Error::UnknownKind(_) => "UnknownKind",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Io(_) => "IoError",
        }
    }

    /// Process exit code for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::Validation(_) | Error::InvalidInput(_) => 3,
            Error::UnknownKind(_) => 4,
            Error::Io(_) => 5,
            Error::Indeterminate(_)
            | Error::PrecisionExhausted(_)
            | Error::PrecisionTooLow
            | Error::TolUnreachable(_)
            | Error::ItineraryAmbiguous(_) => 10,
            Error::IsolatorInvalid(_) | Error::DivisionByZero | Error::DegreeCap(_) => 11,
            Error::ZeroVector
            | Error::ConstantPolynomial
            | Error::RootOfUnity
            | Error::HeightOne
            | Error::BadSplit(_) => 12,
            Error::WindowTooLong { .. }
            | Error::SharedThetaViolation
            | Error::DegenerateDifference { .. }
            | Error::PrefixTooShort { .. }
            | Error::NoWindow
            | Error::NotPaired(_)
            | Error::IndexOutOfRange(_) => 13,
            Error::NotOnAttractor(_) => 14,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
