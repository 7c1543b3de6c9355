use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max |M - M†| = {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not symmetric (max |W - Wᵀ| = {residual:e})")]
    NotSymmetric { residual: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_diagonal:e})")]
    EigenNoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("magnetic index {m} out of range for {what}")]
    MagneticOutOfRange { m: String, what: String },

    #[error("triangle rule violated: J = {total} cannot couple {j1} and {j2}")]
    Triangle {
        j1: String,
        j2: String,
        total: String,
    },

    #[error("unsupported spin: {0}")]
    UnsupportedSpin(String),

    #[error("invalid probabilities: {0}")]
    InvalidProbability(String),

    #[error("direction has length {found}, generator basis has {expected} elements")]
    DirectionLength { expected: usize, found: usize },

    #[error("direction is not unit norm (|n| = {norm})")]
    NotUnitNorm { norm: f64 },

    #[error(
        "optimizer did not converge within {iterations} iterations (best value so far {best:e})"
    )]
    OptimizerNoConvergence { iterations: usize, best: f64 },

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotPsd { .. }
                | Error::EigenNoConvergence { .. }
                | Error::OptimizerNoConvergence { .. }
        )
    }
}
