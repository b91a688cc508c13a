//! Bipartite pure states |ψ⟩ = Σᵢⱼ aᵢⱼ eᵢ ⊗ eⱼ, density matrices and
//! subnormalized ensembles ρ = Σᵢ |wᵢ⟩⟨wᵢ|, with the entropy-based
//! entanglement of formation for pure states.

use num_complex::Complex64;

use crate::error::Error;
use crate::linalg::{check_finite, check_square, herm_eig, CMatrix, CVector};
use crate::tol;

/// Bipartite N ⊗ N pure state stored through its amplitude matrix `a`,
/// with `Tr(a a†) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    n: usize,
    a: CMatrix,
}

impl PureState {
    /// Wraps an amplitude matrix. With `normalize` the matrix is rescaled
    /// to unit norm; otherwise the squared norm must already be within
    /// `1e-10` of one.
    pub fn new(a: CMatrix, normalize: bool) -> Result<Self, Error> {
        let n = check_square(&a)?;
        check_finite(&a)?;
        if n == 0 {
            return Err(Error::Dimension("local dimension must be at least 1".into()));
        }
        let norm = a.norm();
        let a = if normalize {
            if norm < 1e-150 {
                return Err(Error::Degenerate(
                    "cannot normalize an (almost) zero amplitude matrix".into(),
                ));
            }
            a.unscale(norm)
        } else {
            if (norm * norm - 1.0).abs() > tol::NORM_INPUT {
                return Err(Error::Validation(format!(
                    "state norm² = {:.12} is not 1 within tolerance",
                    norm * norm
                )));
            }
            a
        };
        Ok(PureState { n, a })
    }

    /// Local Hilbert-space dimension N.
    pub fn local_dim(&self) -> usize {
        self.n
    }

    /// Amplitude matrix.
    pub fn amplitudes(&self) -> &CMatrix {
        &self.a
    }

    /// Row-major vectorization: component α = (i-1)·N + j (1-indexed)
    /// holds a_ij.
    pub fn to_vector(&self) -> CVector {
        let n = self.n;
        CVector::from_fn(n * n, |alpha, _| self.a[(alpha / n, alpha % n)])
    }

    /// Inverse of [`PureState::to_vector`].
    pub fn from_vector(v: &CVector, normalize: bool) -> Result<Self, Error> {
        let len = v.len();
        let n = (len as f64).sqrt().round() as usize;
        if n * n != len || n == 0 {
            return Err(Error::Dimension(format!(
                "vector length {len} is not a positive perfect square"
            )));
        }
        let a = CMatrix::from_fn(n, n, |i, j| v[i * n + j]);
        PureState::new(a, normalize)
    }

    /// Reduced density matrix of the first subsystem, `a a†`.
    pub fn reduced_density(&self) -> CMatrix {
        &self.a * self.a.adjoint()
    }

    /// Entanglement of formation: von Neumann entropy of the reduced
    /// density matrix, in bits.
    pub fn eof(&self) -> Result<f64, Error> {
        entropy(&self.reduced_density())
    }
}

/// Von Neumann entropy -Σ λ log₂ λ of a unit-trace PSD Hermitian matrix.
pub fn entropy(rho1: &CMatrix) -> Result<f64, Error> {
    let eig = herm_eig(rho1)?;
    let trace: f64 = eig.eigenvalues.iter().sum();
    if (trace - 1.0).abs() > 1e-8 {
        return Err(Error::Validation(format!(
            "trace {trace:.12} is not 1 within tolerance"
        )));
    }
    let mut acc = 0.0;
    for &l in &eig.eigenvalues {
        if !(-tol::EIG_DUST..=1.0 + tol::EIG_DUST).contains(&l) {
            return Err(Error::Validation(format!(
                "eigenvalue {l:.12} outside [0, 1]"
            )));
        }
        if l > 0.0 {
            acc -= l * l.log2();
        }
    }
    Ok(acc)
}

/// Density matrix: Hermitian, PSD, unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    m: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity (within `1e-10`, then symmetrized), unit trace
    /// (within `1e-10`) and positive semidefiniteness (eigenvalue dust down
    /// to `-1e-10` is tolerated).
    pub fn new(m: CMatrix) -> Result<Self, Error> {
        let dim = check_square(&m)?;
        check_finite(&m)?;
        if dim == 0 {
            return Err(Error::Dimension("dimension must be at least 1".into()));
        }
        let scale = m.norm().max(1.0);
        if (&m - m.adjoint()).norm() > tol::SYMMETRY_INPUT * scale {
            return Err(Error::Validation(
                "density matrix is not Hermitian within tolerance".into(),
            ));
        }
        let m = (&m + m.adjoint()).scale(0.5);
        let trace = m.trace();
        if (trace.re - 1.0).abs() > tol::TRACE_INPUT {
            return Err(Error::Validation(format!(
                "trace {:.12} is not 1 within tolerance",
                trace.re
            )));
        }
        let eig = herm_eig(&m)?;
        if let Some(&min) = eig.eigenvalues.last() {
            if min < -tol::EIG_DUST * scale {
                return Err(Error::Validation(format!(
                    "density matrix has negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(DensityMatrix { dim, m })
    }

    /// Projector onto a pure state, |ψ⟩⟨ψ| in vectorized form.
    pub fn from_pure(psi: &PureState) -> Result<Self, Error> {
        let v = psi.to_vector();
        DensityMatrix::new(&v * v.adjoint())
    }

    /// Total dimension (N² for an N ⊗ N system).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Matrix entries.
    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }
}

/// Subnormalized ensemble {wᵢ} with ρ = Σᵢ |wᵢ⟩⟨wᵢ| and Σᵢ ⟨wᵢ|wᵢ⟩ = 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    states: Vec<CVector>,
}

impl Ensemble {
    /// Validates a non-empty list of equal-dimension subnormalized states
    /// whose squared norms sum to one within `1e-9`.
    pub fn new(states: Vec<CVector>) -> Result<Self, Error> {
        if states.is_empty() {
            return Err(Error::Validation("ensemble must contain at least one state".into()));
        }
        let dim = states[0].len();
        if dim == 0 {
            return Err(Error::Dimension("states must have dimension at least 1".into()));
        }
        let mut total = 0.0;
        for w in &states {
            if w.len() != dim {
                return Err(Error::Dimension(
                    "ensemble states must share one dimension".into(),
                ));
            }
            if !w.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::Validation("state contains NaN or infinite entries".into()));
            }
            total += w.norm_squared();
        }
        if (total - 1.0).abs() > tol::WEIGHT_SUM {
            return Err(Error::Validation(format!(
                "ensemble weights sum to {total:.12}, not 1 within tolerance"
            )));
        }
        Ok(Ensemble { states })
    }

    /// Builds the subnormalized members wᵢ = √pᵢ ψᵢ from weighted unit
    /// states.
    pub fn from_weighted(pairs: &[(f64, CVector)]) -> Result<Self, Error> {
        if pairs.iter().any(|(p, _)| *p < 0.0) {
            return Err(Error::Validation("weights must be non-negative".into()));
        }
        let states = pairs
            .iter()
            .map(|(p, psi)| psi * Complex64::new(p.sqrt(), 0.0))
            .collect();
        Ensemble::new(states)
    }

    /// Subnormalized member states.
    pub fn states(&self) -> &[CVector] {
        &self.states
    }

    /// Common state dimension.
    pub fn dim(&self) -> usize {
        self.states[0].len()
    }

    /// Number of member states.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    /// True when the ensemble has no members (never, by construction).
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Weights pᵢ = ⟨wᵢ|wᵢ⟩.
    pub fn weights(&self) -> Vec<f64> {
        self.states.iter().map(|w| w.norm_squared()).collect()
    }

    /// Assembled density matrix Σᵢ |wᵢ⟩⟨wᵢ|.
    pub fn density(&self) -> Result<DensityMatrix, Error> {
        let dim = self.dim();
        let mut m = CMatrix::zeros(dim, dim);
        for w in &self.states {
            m += w * w.adjoint();
        }
        DensityMatrix::new(m)
    }

    /// New ensemble zᵢ = Σⱼ v*ᵢⱼ wⱼ from a t×s matrix with orthonormal
    /// columns (s = current size, t ≥ s). Leaves the assembled density
    /// matrix unchanged.
    pub fn transform(&self, v: &CMatrix) -> Result<Ensemble, Error> {
        let s = self.len();
        let t = v.nrows();
        if v.ncols() != s {
            return Err(Error::Dimension(format!(
                "transform has {} columns for {s} states",
                v.ncols()
            )));
        }
        if t < s {
            return Err(Error::Dimension(format!(
                "transform must have at least {s} rows, got {t}"
            )));
        }
        let gram = v.adjoint() * v - CMatrix::identity(s, s);
        if gram.norm() > tol::ISOMETRY_INPUT * (s as f64).sqrt().max(1.0) {
            return Err(Error::Validation(
                "transform columns are not orthonormal within tolerance".into(),
            ));
        }
        let dim = self.dim();
        let mut out = vec![CVector::zeros(dim); t];
        for (i, z) in out.iter_mut().enumerate() {
            for (j, w) in self.states.iter().enumerate() {
                *z += w * v[(i, j)].conj();
            }
        }
        Ensemble::new(out)
    }
}
