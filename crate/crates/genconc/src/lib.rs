//! Generalized concurrence and entanglement of formation for bipartite
//! pure states whose reduced density matrix carries at most two eigenvalue
//! levels, the recursively constructed families where that concurrence has
//! a closed form, the bilinear forms realizing it, and the decomposition
//! machinery for mixed states supported on those families.

pub mod concurrence;
pub mod dcomputable;
pub mod error;
pub mod json;
pub mod linalg;
pub mod mixed;
pub mod pmatrix;
pub mod states;
pub mod takagi;
pub mod tol;

pub use concurrence::{
    eof_from_concurrence, eof_two_level, gen_concurrence, gen_determinant, spectrum_structure,
    wootters_concurrence, TwoLevelSpectrum,
};
pub use dcomputable::{
    assemble_recursive, assemble_sym, bracket_form, build_j, build_recursive, build_sym,
    concurrence_closed, family_project, norm_form, sym_bracket, sym_concurrence,
    verify_identities, verify_sym_identities, DComputableParams, Family, FamilyParams,
    FamilyPattern, IdentityReport, SymFamilyParams,
};
pub use error::Error;
pub use linalg::{
    general_eigenvalues, haar_unitary, herm_eig, psd_sqrt, unitarity_residual, CMatrix, CVector,
    EigDecomposition,
};
pub use mixed::{
    brute_force_min, equalized_decomposition, lambda_spectrum, mixed_concurrence,
    optimal_decomposition, tau_matrix, LambdaMethod, LambdaSpectrum, MixedConcurrenceResult,
};
pub use pmatrix::{
    antidiagonal_ansatz, biform, biform_vec, derive_p, explicit_vs_derived, p16_explicit,
    AntidiagonalReport, BiformMatrix,
};
pub use states::{entropy, DensityMatrix, Ensemble, PureState};
pub use takagi::{takagi, TakagiFactorization};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
