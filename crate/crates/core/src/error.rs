//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("s = {sigma} + {t}i is within {threshold} of the pole at s = 1")]
    PoleAt1 { sigma: f64, t: f64, threshold: f64 },

    #[error("precision target {target:e} unreachable ({reason})")]
    PrecisionUnreachable { target: f64, reason: String },

    #[error("t = {t} is below the validity threshold {t_min} of the asymptotic expansion")]
    DomainTooSmall { t: f64, t_min: f64 },

    #[error("|Z({t})| = {abs_z:e} is below the zero-proximity threshold {threshold:e}")]
    NearZeroOrdinate { t: f64, abs_z: f64, threshold: f64 },

    #[error("|zeta| = {abs_zeta:e} below threshold on the continuation path at {sigma} + {t}i")]
    ZeroOnPath { sigma: f64, t: f64, abs_zeta: f64 },

    #[error("branch tracking failed at {sigma} + {t}i: step control exhausted")]
    BranchAmbiguous { sigma: f64, t: f64 },

    #[error("inconsistent zero data: {message}")]
    Inconsistent { index: Option<usize>, message: String },

    #[error("t = {t} lies on a zero ordinate")]
    OnOrdinate { t: f64 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("ordinates not strictly ascending at line {line}")]
    NotAscending { line: usize },

    #[error("zero list insufficient: {message}")]
    ZeroListInsufficient { message: String },

    #[error("quadrature tolerance not met: error estimate {estimate:e} > tolerance {tolerance:e}")]
    ToleranceNotMet { estimate: f64, tolerance: f64 },

    #[error("beta = {beta} outside the open interval (1/2, 1)")]
    BetaOutOfRange { beta: f64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("degenerate resonator parameters: {0}")]
    Degenerate(String),

    #[error("resonator table exceeds {cap} entries")]
    TableTooLarge { cap: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::PoleAt1 { .. } => "PoleAt1",
            Error::PrecisionUnreachable { .. } => "PrecisionUnreachable",
            Error::DomainTooSmall { .. } => "DomainTooSmall",
            Error::NearZeroOrdinate { .. } => "NearZeroOrdinate",
            Error::ZeroOnPath { .. } => "ZeroOnPath",
            Error::BranchAmbiguous { .. } => "BranchAmbiguous",
            Error::Inconsistent { .. } => "Inconsistent",
            Error::OnOrdinate { .. } => "OnOrdinate",
            Error::Parse { .. } => "ParseError",
            Error::NotAscending { .. } => "NotAscending",
            Error::ZeroListInsufficient { .. } => "ZeroListInsufficient",
            Error::ToleranceNotMet { .. } => "ToleranceNotMet",
            Error::BetaOutOfRange { .. } => "BetaOutOfRange",
            Error::DegenerateFit(_) => "DegenerateFit",
            Error::Degenerate(_) => "Degenerate",
            Error::TableTooLarge { .. } => "TableTooLarge",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
