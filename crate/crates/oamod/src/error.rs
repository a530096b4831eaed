use thiserror::Error;

/// Errors produced by the algebra, module and decomposition layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not hermitian (deviation {deviation:.3e}, tolerance {tolerance:.3e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("jacobi eigensolver did not converge within {0} sweeps")]
    EigenNoConvergence(usize),

    #[error("matrix is not unitary (deviation {deviation:.3e}, tolerance {tolerance:.3e})")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("descriptor mismatch: {0}")]
    DescriptorMismatch(String),

    #[error("module admits no nontrivial orthogonal pair: {0}")]
    NoOrthogonalPairs(String),

    #[error("orthogonal dimension {found} is below the required {required}: {context}")]
    OrthogonalDimension {
        required: usize,
        found: usize,
        context: String,
    },

    #[error("basis precondition violated: {0}")]
    BasisPrecondition(String),

    #[error("map specification is inconsistent with the module: {0}")]
    InvalidMapSpec(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
