use thiserror::Error;

/// Every failure mode of the library.
///
/// Variants fall in three groups: malformed input (validation), genuine
/// mathematical obstructions, and I/O. [`Error::kind`] tells them apart;
/// the CLI maps the groups onto exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("DuplicateVertexInSimplex: {0:?}")]
    DuplicateVertexInSimplex(Vec<usize>),
    #[error("InconsistentInput: {0}")]
    InconsistentInput(String),
    #[error("DegreeOutOfRange: degree {degree}, complex dimension {dim}")]
    DegreeOutOfRange { degree: usize, dim: usize },
    #[error("DegreeMismatch: cochain degree {cochain}, chain degree {chain}")]
    DegreeMismatch { cochain: usize, chain: usize },
    #[error("NotACycle")]
    NotACycle,
    #[error("NotNullHomologous")]
    NotNullHomologous,
    #[error("CoverNotGood: {0}")]
    CoverNotGood(String),
    #[error("NotACocycle: residual {0:.3e}")]
    NotACocycle(f64),
    #[error("BranchAmbiguity: {0}")]
    BranchAmbiguity(String),
    #[error("NonIntegralResult: {0:.3e} from nearest integer")]
    NonIntegralResult(f64),
    #[error("ClassNonTrivial")]
    ClassNonTrivial,
    #[error("ArityOutOfRange: {0}")]
    ArityOutOfRange(String),
    #[error("NotClosed: residual {0:.3e}")]
    NotClosed(f64),
    #[error("PartitionInvalid: {0}")]
    PartitionInvalid(String),
    #[error("RefinementNotGood: {0}")]
    RefinementNotGood(String),
    #[error("PullbackCoverNotGood: {0}")]
    PullbackCoverNotGood(String),
    #[error("NotALift: {0}")]
    NotALift(String),
    #[error("ObstructionNotCentral: {0}")]
    ObstructionNotCentral(String),
    #[error("NotAnIntegerCocycle")]
    NotAnIntegerCocycle,
    #[error("GlueMismatch: residual {0:.3e}")]
    GlueMismatch(f64),
    #[error("ChartUnknown: {0}")]
    ChartUnknown(usize),
    #[error("SubordinationInvalid: {0}")]
    SubordinationInvalid(String),
    #[error("DeligneInvalid: residual {0:.3e}")]
    DeligneInvalid(f64),
    #[error("NonIntegralAmbiguity: {0:.3e}")]
    NonIntegralAmbiguity(f64),
    #[error("EndpointMismatch: {0} vs {1}")]
    EndpointMismatch(usize, usize),
    #[error("NotSimplyConnected")]
    NotSimplyConnected,
    #[error("NonIntegralForm: pairing/(2πi) = {0}")]
    NonIntegralForm(f64),
    #[error("NotConnected")]
    NotConnected,
    #[error("Io: {0}")]
    Io(String),
    #[error("Parse: {0}")]
    Parse(String),
}

/// Coarse classification used for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Obstruction,
    Io,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            ClassNonTrivial | NotNullHomologous | NonIntegralAmbiguity(_) | NonIntegralForm(_)
            | NotSimplyConnected => ErrorKind::Obstruction,
            Io(_) => ErrorKind::Io,
            _ => ErrorKind::Validation,
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

pub type Result<T> = std::result::Result<T, Error>;
