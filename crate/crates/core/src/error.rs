use crate::scalars::Rational;
use thiserror::Error;

/// Errors raised by the library. Computation errors are distinguished from
/// precondition violations so the CLI can map them onto exit codes.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// κ hits a pole of the coefficient recurrence; the witness is `numer/denom`.
    #[error("kappa = {kappa} is excluded: pole witness {numer}/{denom}")]
    PoleExcluded {
        kappa: Rational,
        numer: i64,
        denom: i64,
    },

    #[error("invalid shape {0:?}: need a partition with at least two rows and two columns")]
    InvalidShape(Vec<usize>),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("multi-index {0:?} has a negative entry")]
    NegativeEntry(Vec<i64>),

    #[error("multi-index {0:?} does not sum to zero")]
    NotGraded(Vec<i64>),

    #[error("multi-index {nu:?} does not have zeros exactly in positions 1..={k}")]
    BadSupport { nu: Vec<i64>, k: usize },

    #[error("operator requires a polynomial, found exponent {0:?}")]
    LaurentInput(Vec<i64>),

    #[error("spectral collision at alpha = {alpha:?}, tableau {tableau}, positions {i} and {}", i + 1)]
    SpectralCollision {
        alpha: Vec<i64>,
        tableau: usize,
        i: usize,
    },

    #[error("grade {grade} is not available (sealed grade {sealed}, cap {cap})")]
    NotYetComputable {
        grade: usize,
        sealed: usize,
        cap: usize,
    },

    /// A same-grade coefficient was requested before the recurrence produced it.
    #[error("coefficient {0:?} requested before it was computed")]
    RecurrenceOrder(Vec<i64>),

    /// The closed-form norm of `ζ_{α,T}` has a zero or infinite factor at this κ.
    #[error("norm of zeta at alpha = {alpha:?}, tableau {tableau} degenerates at this kappa")]
    DegenerateNorm { alpha: Vec<i64>, tableau: usize },

    #[error("point {0:?} is singular: coordinates must be nonzero and distinct")]
    SingularPoint(Vec<String>),

    #[error("path comes within {distance:.3e} of the singular set (clearance {clearance})")]
    PathNearSingular { distance: f64, clearance: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Format(String),
}

impl Error {
    /// The excluded value `numer/denom` carried by [`Error::PoleExcluded`].
    pub fn witness(&self) -> Option<Rational> {
        match self {
            Error::PoleExcluded { numer, denom, .. } => {
                Some(Rational::new((*numer).into(), (*denom).into()))
            }
            _ => None,
        }
    }

    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::PoleExcluded { .. } => "PoleExcluded",
            Error::InvalidShape(_) => "InvalidShape",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::NegativeEntry(_) => "NegativeEntry",
            Error::NotGraded(_) => "NotGraded",
            Error::BadSupport { .. } => "BadSupport",
            Error::LaurentInput(_) => "LaurentInput",
            Error::SpectralCollision { .. } => "SpectralCollision",
            Error::NotYetComputable { .. } => "NotYetComputable",
            Error::RecurrenceOrder(_) => "RecurrenceOrder",
            Error::DegenerateNorm { .. } => "DegenerateNorm",
            Error::SingularPoint(_) => "SingularPoint",
            Error::PathNearSingular { .. } => "PathNearSingular",
            Error::Dimension(_) => "Dimension",
            Error::Parse(_) => "Parse",
            Error::Format(_) => "Format",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
