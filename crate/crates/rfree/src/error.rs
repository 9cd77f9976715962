use thiserror::Error;

/// Library-wide error type. The CLI maps these onto the stable exit codes:
/// refusals that mean "cannot decide" (spectral verdicts, diagonalizability)
/// map to 2, exhausted budgets to 3, malformed input to 4.
#[derive(Error, Debug)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("matrix is not unimodular: det = {0}")]
    NotUnimodular(String),
    #[error("singular matrix")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("empty coefficient set")]
    EmptyCoefficients,
    #[error("coefficient set contains the identity or a central element: {0}")]
    CentralCoefficient(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("spectral verdict undecided: {0}")]
    Undecided(String),
    #[error("element is not very proximal")]
    NotVeryProximal,
    #[error("matrix is a scalar multiple of the identity")]
    ScalarMatrix,
    #[error("diagonalizability could not be certified")]
    NotDiagonalizable,
    #[error("ill-conditioned input: {0}")]
    IllConditioned(String),
    #[error("exactification drift {drift} exceeds bound {bound}")]
    ExactificationDrift { drift: String, bound: String },
    #[error("psi lower bound {psi_lo} is below the required e^(-kappa*r) = {required}")]
    PsiTooSmall { psi_lo: String, required: String },
    #[error("no accepted configuration within budget")]
    SearchExhausted,
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
