//! Numerical tolerances pinned in one place.
//!
//! Residual-style tolerances are relative to `max(1, scale)` of the input
//! unless noted otherwise; cluster tolerances are relative to the largest
//! eigenvalue or singular value involved.

/// Allowed deviation from Hermiticity or complex symmetry on input.
pub const SYMMETRY_INPUT: f64 = 1e-10;

/// Residual bound for Hermitian eigendecompositions.
pub const HERM_RESIDUAL: f64 = 1e-10;

/// Residual bound for the Takagi factorization.
pub const TAKAGI_RESIDUAL: f64 = 1e-9;

/// Relative width used to group nearly equal singular values into blocks
/// inside the Takagi factorization.
pub const TAKAGI_CLUSTER: f64 = 1e-8;

/// Negative eigenvalue dust threshold (after normalizing by matrix norm):
/// anything above `-EIG_DUST` is clamped to zero, anything below is an error.
pub const EIG_DUST: f64 = 1e-10;

/// Allowed deviation of a squared state norm from one.
pub const NORM_INPUT: f64 = 1e-10;

/// Allowed deviation of ensemble weights from summing to one.
pub const WEIGHT_SUM: f64 = 1e-9;

/// Allowed deviation of a density-matrix trace from one.
pub const TRACE_INPUT: f64 = 1e-10;

/// Default relative width for grouping reduced-density eigenvalues into
/// levels, and the threshold under which a level counts as zero.
pub const CLUSTER_DEFAULT: f64 = 1e-8;

/// Relative residual above which a support vector is rejected as lying
/// outside the family subspace.
pub const CLASS_SUPPORT: f64 = 1e-8;

/// Eigenvalue threshold defining the support (rank) of a density matrix.
pub const RANK_CUT: f64 = 1e-10;

/// Allowed imaginary residue on eigenvalues that must be real.
pub const REAL_RESIDUE: f64 = 1e-8;

/// Allowed deviation from isometry for decomposition transforms.
pub const ISOMETRY_INPUT: f64 = 1e-10;

/// Target spread of per-state concurrence-to-weight ratios after
/// equalization.
pub const EQUALIZE_SPREAD: f64 = 1e-6;

/// Default tolerance for the closed-form identity checks.
pub const IDENTITY_DEFAULT: f64 = 1e-8;

/// Agreement tolerance between independent spectrum methods.
pub const METHOD_AGREE: f64 = 1e-8;
