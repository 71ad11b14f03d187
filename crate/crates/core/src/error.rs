use thiserror::Error;

/// Errors raised by the covariance-matrix, Fock-space and activation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix violates the uncertainty relation: min eigenvalue of gamma + i/2 Omega is {min_eigenvalue:e}")]
    BonaFideViolation { min_eigenvalue: f64 },

    #[error("matrix is not a valid covariance matrix: {0}")]
    InvalidCovariance(String),

    #[error("local block has determinant {det:e} below the vacuum bound 1/4")]
    DegenerateBlock { det: f64 },

    #[error("expected a two-mode covariance matrix, got {0} modes")]
    NotTwoModes(usize),

    #[error("singular matrix encountered while computing {0}")]
    SingularMatrix(&'static str),

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrix is not symplectic")]
    NotSymplectic,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid mode partition: {0}")]
    InvalidPartition(String),

    #[error("photon cutoff {cutoff} exceeds the configured cap {cap}")]
    CutoffTooLarge { cutoff: usize, cap: usize },

    #[error("series did not converge within {terms} terms")]
    SeriesNotConverged { terms: usize },

    #[error("dense four-mode representation of dimension {dim} exceeds the cap {cap}")]
    DenseTooLarge { dim: usize, cap: usize },

    #[error("separability certificate failed: residual min eigenvalue {min_eigenvalue:e}")]
    CertificateFailed { min_eigenvalue: f64 },

    #[error("faithfulness violated: classical={classical}, output negativity {negativity:e}")]
    FaithfulnessViolation { classical: bool, negativity: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
