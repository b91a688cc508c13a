//! Error type shared by every module in the crate.

/// Everything that can go wrong across construction, analysis and
/// decomposition routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Incompatible or invalid matrix/vector dimensions.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// Input fails a structural precondition (NaN entries, broken
    /// normalization, missing Hermiticity or symmetry, bad weights).
    #[error("validation error: {0}")]
    Validation(String),

    /// A matrix required to be positive semidefinite has a genuinely
    /// negative eigenvalue.
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:.3e})")]
    NotPsd { min_eig: f64 },

    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Degenerate input with no meaningful answer (for example an all-zero
    /// amplitude matrix asked to be normalized).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// An iterative kernel failed to converge or a residual check failed.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The reduced density matrix has more than two distinct non-zero
    /// eigenvalue levels.
    #[error("spectrum has {clusters} distinct non-zero levels; at most two are supported")]
    NotTwoLevel { clusters: usize },

    /// The operation is well defined only for a structure the input lacks
    /// (for example equal level multiplicities, or a non-negative raw
    /// concurrence before equalization).
    #[error("unsupported structure: {0}")]
    Unsupported(String),

    /// A pure state does not lie in the requested parametric family.
    #[error("state is outside the family subspace (residual {residual:.3e}, tol {tol:.3e})")]
    NotInFamily { residual: f64, tol: f64 },

    /// A density matrix has support leaking outside the family subspace.
    #[error("support leaks outside the family subspace (residual {residual:.3e}, tol {tol:.3e})")]
    NotInClass { residual: f64, tol: f64 },
}

impl Error {
    /// Process exit code used by the command-line tool: 2 for input and
    /// domain problems, 3 for numerical failures, 4 for structural
    /// rejections (out of family/class, too many levels).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Dimension(_)
            | Error::Validation(_)
            | Error::NotPsd { .. }
            | Error::Domain(_)
            | Error::Degenerate(_) => 2,
            Error::Numerical(_) => 3,
            Error::NotTwoLevel { .. }
            | Error::Unsupported(_)
            | Error::NotInFamily { .. }
            | Error::NotInClass { .. } => 4,
        }
    }
}
