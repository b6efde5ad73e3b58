//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field order {q} exceeds the cap {cap}")]
    FieldTooLarge { q: u64, cap: u64 },
    #[error("inverse of zero in GF({q})")]
    DivisionByZero { q: u32 },
    #[error("geometry with {points} points exceeds the cap {cap}")]
    SpaceTooLarge { points: u64, cap: u64 },
    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error("incidence axiom violated ({which}); witness: {witness}")]
    AxiomViolation { which: String, witness: String },
    #[error("points coincide (index {0})")]
    SamePoint(u32),
    #[error("point set belongs to `{set}`, expected `{expected}`")]
    GeometryMismatch { set: String, expected: String },
    #[error("cannot draw {k} elements from a population of {n}")]
    KTooLarge { n: u64, k: u64 },
    #[error(
        "no success in {trials} trials (stage {stage}); per-trial failure bound {failure_bound}"
    )]
    RetriesExhausted {
        trials: u32,
        stage: u32,
        failure_bound: f64,
    },
    #[error("range condition violated: {0}")]
    RangeViolation(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("q={q} is below the mu={mu} threshold q>={threshold}")]
    QBelowThreshold { q: u32, mu: u32, threshold: u32 },
    #[error("unsupported multiplicity mu={0}")]
    UnsupportedMu(u32),
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("no size-bound row applies to mu={mu}, q={q}")]
    NoApplicableRow { mu: u32, q: u32 },
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("geometry carries no coordinates (ingested plane)")]
    NoCoordinates,
    #[error("point set is empty")]
    EmptySet,
    #[error("experiment needs at least one trial")]
    EmptyExperiment,
    #[error("no threshold found below q_max={0}")]
    NotFound(u32),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
