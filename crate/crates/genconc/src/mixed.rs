//! Mixed-state concurrence on a family subspace.
//!
//! For ρ supported on a family subspace with biform p, the overlap matrix
//! τᵢⱼ = ⟨⟨vᵢ|vⱼ⟩⟩ = ⟨vᵢ*|p vⱼ*⟩ over subnormalized eigenvectors
//! vᵢ = √μᵢ qᵢ is complex symmetric. Its Takagi spectrum Λ₁ ≥ Λ₂ ≥ …
//! gives the concurrence d(ρ) = max(0, Λ₁ - Σ_{i≥2} Λᵢ), an optimal
//! decomposition wᵢ = Σⱼ U*ᵢⱼ vⱼ with ⟨⟨wᵢ|wⱼ⟩⟩ = Λᵢ δᵢⱼ, and a further
//! equalized decomposition in which every member carries concurrence
//! equal to d(ρ).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::concurrence::eof_from_concurrence;
use crate::dcomputable::FamilyPattern;
use crate::error::Error;
use crate::linalg::{haar_unitary, herm_eig, psd_sqrt, CMatrix, CVector};
use crate::pmatrix::BiformMatrix;
use crate::states::{DensityMatrix, Ensemble};
use crate::takagi::takagi;
use crate::tol;

/// How the two-level spectrum Λ of ρ is extracted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LambdaMethod {
    /// Takagi values of the overlap matrix τ.
    TauTakagi,
    /// Square roots of the eigenvalues of ρ p ρ* p.
    RhoPEig,
    /// Eigenvalues of R = √(√ρ · p ρ* p · √ρ).
    RMatrix,
}

/// Spectrum produced by one method, padded with zeros to the space
/// dimension and decreasing.
#[derive(Clone, Debug)]
pub struct LambdaSpectrum {
    pub method: LambdaMethod,
    pub lambdas: Vec<f64>,
}

/// Concurrence of a mixed state together with the spectrum behind it.
#[derive(Clone, Debug)]
pub struct MixedConcurrenceResult {
    /// Takagi spectrum of τ, padded with zeros to the space dimension.
    pub lambdas: Vec<f64>,
    /// Λ₁ - Σ_{i≥2} Λᵢ, which may be negative.
    pub raw: f64,
    /// max(raw, 0).
    pub clamped: f64,
    /// Entanglement of formation evaluated at the clamped concurrence.
    pub eof: f64,
    /// Whether `eof` is exact: true when raw ≥ 0 (the equalized optimal
    /// decomposition realizes it), false when the clamp engaged and the
    /// value is only an upper bound at d = 0.
    pub exact: bool,
}

/// Eigenpairs of ρ above the rank cut, as subnormalized columns
/// vᵢ = √μᵢ qᵢ, each verified to lie in the family subspace.
fn class_support(rho: &DensityMatrix, p: &BiformMatrix) -> Result<CMatrix, Error> {
    if rho.dim() != p.dim() {
        return Err(Error::Dimension(format!(
            "density dimension {} does not match form dimension {}",
            rho.dim(),
            p.dim()
        )));
    }
    let pattern = FamilyPattern::new(p.family(), p.k())?;
    let eig = herm_eig(rho.matrix())?;
    let mut cols = Vec::new();
    for (i, &mu) in eig.eigenvalues.iter().enumerate() {
        if mu <= tol::RANK_CUT {
            continue;
        }
        let v = eig.eigenvectors.column(i).map(|z| z * mu.sqrt());
        let (_, residual) = pattern.project(&v)?;
        let rel = residual / mu.sqrt();
        if rel > tol::CLASS_SUPPORT {
            return Err(Error::NotInClass {
                residual: rel,
                tol: tol::CLASS_SUPPORT,
            });
        }
        cols.push(v);
    }
    debug_assert!(!cols.is_empty(), "unit-trace density has spectral mass");
    Ok(CMatrix::from_columns(&cols))
}

fn tau_from_support(vmat: &CMatrix, p: &BiformMatrix) -> CMatrix {
    let vc = vmat.conjugate();
    let tau = vc.transpose() * p.apply(&vc);
    // τ is symmetric up to floating dust; symmetrize before Takagi.
    (&tau + tau.transpose()).scale(0.5)
}

/// The overlap matrix τᵢⱼ = ⟨⟨vᵢ|vⱼ⟩⟩ on the support of ρ.
pub fn tau_matrix(rho: &DensityMatrix, p: &BiformMatrix) -> Result<CMatrix, Error> {
    let vmat = class_support(rho, p)?;
    Ok(tau_from_support(&vmat, p))
}

fn pad_desc(mut lambdas: Vec<f64>, dim: usize) -> Vec<f64> {
    lambdas.resize(dim, 0.0);
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());
    lambdas
}

/// Λᵢ = √μᵢ with eigenvalue dust zeroed first, since the square root
/// would amplify roundoff-sized μ into √ε-sized spurious levels.
fn sqrt_spectrum(vals: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let vals: Vec<f64> = vals.into_iter().collect();
    let cut = tol::EIG_DUST * vals.iter().cloned().fold(0.0, f64::max);
    vals.into_iter()
        .map(|v| if v <= cut { 0.0 } else { v.sqrt() })
        .collect()
}

/// Two-level spectrum Λ of ρ by the chosen method.
///
/// `TauTakagi` requires ρ to be supported on the family subspace; the
/// other two methods evaluate their matrix formula as given.
pub fn lambda_spectrum(
    rho: &DensityMatrix,
    p: &BiformMatrix,
    method: LambdaMethod,
) -> Result<LambdaSpectrum, Error> {
    if rho.dim() != p.dim() {
        return Err(Error::Dimension(format!(
            "density dimension {} does not match form dimension {}",
            rho.dim(),
            p.dim()
        )));
    }
    let lambdas = match method {
        LambdaMethod::TauTakagi => {
            let tau = tau_matrix(rho, p)?;
            takagi(&tau)?.lambdas
        }
        LambdaMethod::RhoPEig => {
            // ρ p ρ* p is similar to a PSD matrix; its eigenvalues are Λᵢ².
            let rc = rho.matrix().conjugate();
            let m = rho.matrix() * p.apply(&(rc * p.to_complex()));
            let eigs = crate::linalg::general_eigenvalues(&m)?;
            let scale = rho.matrix().norm();
            let mut reals = Vec::with_capacity(eigs.len());
            for z in eigs.iter() {
                if z.im.abs() > tol::REAL_RESIDUE * scale.max(1.0) {
                    return Err(Error::Numerical(format!(
                        "eigenvalue {z} of ρpρ*p has a non-negligible imaginary part"
                    )));
                }
                reals.push(z.re);
            }
            sqrt_spectrum(reals)
        }
        LambdaMethod::RMatrix => {
            let s = psd_sqrt(rho.matrix())?;
            let inner = p.apply(&(rho.matrix().conjugate() * p.to_complex()));
            let m = &s * inner * &s;
            let m = (&m + m.adjoint()).scale(0.5);
            sqrt_spectrum(herm_eig(&m)?.eigenvalues)
        }
    };
    Ok(LambdaSpectrum {
        method,
        lambdas: pad_desc(lambdas, rho.dim()),
    })
}

/// Concurrence d(ρ) = Λ₁ - Σ_{i≥2} Λᵢ from the Takagi spectrum of τ,
/// with the entanglement of formation for local dimension n = 2^k.
pub fn mixed_concurrence(
    rho: &DensityMatrix,
    p: &BiformMatrix,
) -> Result<MixedConcurrenceResult, Error> {
    let spectrum = lambda_spectrum(rho, p, LambdaMethod::TauTakagi)?;
    let lambdas = spectrum.lambdas;
    let raw = lambdas[0] - lambdas[1..].iter().sum::<f64>();
    let clamped = raw.max(0.0);
    let n = 1usize << p.k();
    let eof = eof_from_concurrence(clamped, n)?;
    Ok(MixedConcurrenceResult {
        lambdas,
        raw,
        clamped,
        eof,
        exact: raw >= 0.0,
    })
}

/// The decomposition wᵢ = Σⱼ U*ᵢⱼ vⱼ that diagonalizes the overlap form:
/// ⟨⟨wᵢ|wⱼ⟩⟩ = Λᵢ δᵢⱼ.
pub fn optimal_decomposition(
    rho: &DensityMatrix,
    p: &BiformMatrix,
) -> Result<Ensemble, Error> {
    let vmat = class_support(rho, p)?;
    let tau = tau_from_support(&vmat, p);
    let tf = takagi(&tau)?;
    let wmat = &vmat * tf.u.adjoint();
    let cols: Vec<CVector> = (0..wmat.ncols())
        .map(|j| wmat.column(j).into_owned())
        .collect();
    Ensemble::new(cols)
}

/// Rotates the optimal decomposition into one where every member state
/// carries concurrence d(ρ) exactly, so the ensemble average of pure-state
/// concurrences attains the mixed concurrence.
///
/// Requires raw concurrence ≥ 0. With yⱼ = i^{[j≥2]} wⱼ the diagonal
/// overlaps become Y = diag(Λ₁, -Λ₂, …) with tr Y = d(ρ), and a sequence
/// of at most s-1 real Givens rotations drives every diagonal deviation
/// Yᵢᵢ - d·Gᵢᵢ to zero, one state per step.
pub fn equalized_decomposition(
    rho: &DensityMatrix,
    p: &BiformMatrix,
) -> Result<Ensemble, Error> {
    let vmat = class_support(rho, p)?;
    let tau = tau_from_support(&vmat, p);
    let tf = takagi(&tau)?;
    let s = tf.lambdas.len();
    let d = tf.lambdas[0] - tf.lambdas[1..].iter().sum::<f64>();
    if d < 0.0 {
        return Err(Error::Unsupported(format!(
            "raw concurrence {d:.6e} is negative; no equal-concurrence decomposition exists"
        )));
    }
    let wmat = &vmat * tf.u.adjoint();
    if s == 1 {
        return Ensemble::new(vec![wmat.column(0).into_owned()]);
    }

    let mut ymat = wmat;
    for j in 1..s {
        let mut col = ymat.column_mut(j);
        for r in 0..col.nrows() {
            col[r] *= Complex64::new(0.0, 1.0);
        }
    }

    // ym tracks the signed overlaps ⟨⟨zᵢ|zⱼ⟩⟩ and gm the real part of the
    // Gram matrix ⟨zᵢ|zⱼ⟩ under z = R y; both evolve as R M Rᵀ with R real.
    let mut ym = DMatrix::<f64>::zeros(s, s);
    for i in 0..s {
        ym[(i, i)] = if i == 0 { tf.lambdas[0] } else { -tf.lambdas[i] };
    }
    let mut gm = (ymat.adjoint() * &ymat).map(|z| z.re);
    let mut rot = DMatrix::<f64>::identity(s, s);

    let rotate = |m: &mut DMatrix<f64>, i: usize, j: usize, cos: f64, sin: f64| {
        for c in 0..m.ncols() {
            let (ri, rj) = (m[(i, c)], m[(j, c)]);
            m[(i, c)] = cos * ri + sin * rj;
            m[(j, c)] = -sin * ri + cos * rj;
        }
        for r in 0..m.nrows() {
            let (ci, cj) = (m[(r, i)], m[(r, j)]);
            m[(r, i)] = cos * ci + sin * cj;
            m[(r, j)] = -sin * ci + cos * cj;
        }
    };

    let mut active: Vec<usize> = (0..s).collect();
    for _ in 0..s - 1 {
        let dev = |i: usize| ym[(i, i)] - d * gm[(i, i)];
        let &imax = active
            .iter()
            .max_by(|&&a, &&b| dev(a).partial_cmp(&dev(b)).unwrap())
            .unwrap();
        let &imin = active
            .iter()
            .min_by(|&&a, &&b| dev(a).partial_cmp(&dev(b)).unwrap())
            .unwrap();
        let a = dev(imax);
        let c2 = dev(imin);
        if a - c2 <= tol::EQUALIZE_SPREAD * d.max(1.0) * 1e-3 {
            break;
        }
        let b = ym[(imax, imin)] - d * gm[(imax, imin)];
        // dev of the rotated imax state is a·cos² + 2b·cos·sin + c2·sin²;
        // the tangent root with the stable sign zeroes it exactly.
        let t = if c2 == 0.0 {
            if b == 0.0 {
                break;
            }
            -a / (2.0 * b)
        } else {
            let disc = (b * b - a * c2).sqrt();
            let q = -(b + b.signum() * disc);
            let t1 = q / c2;
            let t2 = a / q;
            if t1.abs() < t2.abs() {
                t1
            } else {
                t2
            }
        };
        let cos = 1.0 / (1.0 + t * t).sqrt();
        let sin = t * cos;
        rotate(&mut ym, imax, imin, cos, sin);
        rotate(&mut gm, imax, imin, cos, sin);
        for c in 0..s {
            let (ri, rj) = (rot[(imax, c)], rot[(imin, c)]);
            rot[(imax, c)] = cos * ri + sin * rj;
            rot[(imin, c)] = -sin * ri + cos * rj;
        }
        // The rotated imax state now sits exactly on ratio d; the residual
        // deviation moves to imin and the sum rule keeps it balanced.
        active.retain(|&i| i != imax);
        if active.len() == 1 {
            break;
        }
    }

    let spread = (0..s)
        .map(|i| (ym[(i, i)] - d * gm[(i, i)]).abs())
        .fold(0.0f64, f64::max);
    if spread > tol::EQUALIZE_SPREAD * d.max(1.0) {
        return Err(Error::Numerical(format!(
            "equalization left a deviation spread of {spread:.3e}"
        )));
    }

    let zmat = ymat * rot.map(|x| Complex64::new(x, 0.0)).transpose();
    let cols: Vec<CVector> = (0..s).map(|j| zmat.column(j).into_owned()).collect();
    Ensemble::new(cols)
}

/// Monte-Carlo lower-bound search: the smallest ensemble-average
/// concurrence over `trials` random decompositions of ρ into `t` states,
/// drawn as Haar t×s isometry extensions of the optimal decomposition.
///
/// Values never drop below the raw concurrence (up to roundoff); the
/// search is evidence that the equalized decomposition is optimal. The
/// master seed is drawn once from `rng`; each trial derives its own
/// deterministic stream, so results do not depend on thread scheduling.
pub fn brute_force_min<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    p: &BiformMatrix,
    trials: usize,
    t: usize,
    rng: &mut R,
) -> Result<f64, Error> {
    if trials == 0 {
        return Err(Error::Domain("trial count must be positive".into()));
    }
    let vmat = class_support(rho, p)?;
    let tau = tau_from_support(&vmat, p);
    let tf = takagi(&tau)?;
    let s = tf.lambdas.len();
    if t < s {
        return Err(Error::Dimension(format!(
            "decomposition size {t} is below the rank {s}"
        )));
    }
    let ydiag: Vec<f64> = tf
        .lambdas
        .iter()
        .enumerate()
        .map(|(i, &l)| if i == 0 { l } else { -l })
        .collect();
    let master: u64 = rng.random();

    let min = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut trial_rng = ChaCha8Rng::seed_from_u64(master);
            trial_rng.set_stream(trial + 1);
            let u = haar_unitary(t, &mut trial_rng).expect("size validated above");
            // Ensemble members xᵢ = Σⱼ Uᵢⱼ* wⱼ over the first s columns;
            // ⟨⟨xᵢ|xᵢ⟩⟩ = Σⱼ (Uᵢⱼ*)² Λⱼ, with the equalizing phases folded
            // into Ỹ = diag(Λ₁, -Λ₂, …).
            (0..t)
                .map(|i| {
                    let z: Complex64 = (0..s)
                        .map(|j| {
                            let c = u[(i, j)].conj();
                            c * c * ydiag[j]
                        })
                        .sum();
                    z.norm()
                })
                .sum::<f64>()
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(min)
}
