use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not Hermitian (residual {residual:.3e} exceeds tolerance {tol:.3e})")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("map is not Hermiticity-preserving (imaginary residue {residual:.3e})")]
    NotHermiticityPreserving { residual: f64 },

    #[error("Choi matrix has negative eigenvalue {eigenvalue:.6e}: map is not completely positive")]
    NotCompletelyPositive { eigenvalue: f64 },

    #[error("generator pole: {function} vanishes at t = {t}")]
    PoleEncountered { function: &'static str, t: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid Bell-diagonal state: eigenvalue {eigenvalue:.6e} is negative")]
    InvalidBellState { eigenvalue: f64 },

    #[error("bath of {spins} spins exceeds brute-force limit of {max}")]
    BathTooLarge { spins: usize, max: usize },

    #[error("bath operators do not commute (residual {residual:.3e})")]
    CommutatorResidual { residual: f64 },

    #[error("Laplace variable must be positive, got {u}")]
    NonPositiveLaplaceVariable { u: f64 },

    #[error("singular linear system")]
    SingularMatrix,

    #[error("Laplace inversion failed to converge at t = {t}")]
    LaplaceInversionNonConvergence { t: f64 },

    #[error("generator shape violation: {0}")]
    ShapeViolation(String),

    #[error("Gamma(t) is complex at c3 = {c3}, t = {t}")]
    ComplexGamma { c3: f64, t: f64 },

    #[error("integration failed: {0}")]
    IntegrationFailed(String),

    #[error("pole inside integration grid at t = {t}")]
    PoleInsideGrid { t: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
