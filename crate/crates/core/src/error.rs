use thiserror::Error;

/// Errors raised by the library. Variant names double as the stable error
/// identifiers written into verification reports (see [`Error::name`]).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot add series of (2πi)-grades {0} and {1}")]
    MixedGrade(i32, i32),
    #[error("series is not a unit: {0}")]
    NonUnit(String),
    #[error("series not admissible: {0}")]
    NonAdmissible(String),
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("lattice basis is numerically singular (reciprocal condition {0:e})")]
    SingularLattice(f64),
    #[error("period matrix is numerically singular")]
    SingularPeriod,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not a member of {0}")]
    NotAMember(&'static str),
    #[error("scaling parameter k must be nonzero")]
    ZeroScaling,
    #[error("discriminant 27 t3^2 - t2^3 vanishes")]
    DiscriminantZero,
    #[error("cubic root refinement failed: {0}")]
    RootFindingFailure(String),
    #[error("Legendre relation residual {0:e} exceeds the consistency gate")]
    LegendreGate(f64),
    #[error("block x3 is singular")]
    SingularBlock,
    #[error("instanton number of degree {degree} is not an integer: {value}")]
    NonIntegralInstanton { degree: usize, value: String },
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable identifier of the error kind.
    pub fn name(&self) -> &'static str {
        match self {
            Error::MixedGrade(..) => "MixedGradeError",
            Error::NonUnit(_) => "NonUnitError",
            Error::NonAdmissible(_) => "NonAdmissibleError",
            Error::Domain(_) => "DomainError",
            Error::SingularLattice(_) => "SingularLattice",
            Error::SingularPeriod => "SingularPeriod",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotAMember(_) => "NotAMember",
            Error::ZeroScaling => "ZeroScaling",
            Error::DiscriminantZero => "DiscriminantZero",
            Error::RootFindingFailure(_) => "RootFindingFailure",
            Error::LegendreGate(_) => "LegendreGate",
            Error::SingularBlock => "SingularBlock",
            Error::NonIntegralInstanton { .. } => "NonIntegralInstanton",
            Error::InvalidFrame(_) => "InvalidFrame",
            Error::Parse(_) => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
