//! Dense complex linear algebra: Hermitian eigendecomposition, positive
//! semidefinite square roots, general eigenvalues and Haar-random unitaries.
//!
//! Matrices are treated as immutable values and all randomness enters
//! through explicit generator arguments.

use nalgebra::linalg::{Schur, SymmetricEigen};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Error;
use crate::tol;

/// Dense complex matrix, the carrier for amplitude matrices, density
/// matrices, bilinear forms and unitaries.
pub type CMatrix = DMatrix<Complex64>;

/// Dense complex column vector.
pub type CVector = DVector<Complex64>;

pub(crate) fn check_finite(m: &CMatrix) -> Result<(), Error> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Validation(
            "matrix contains NaN or infinite entries".into(),
        ))
    }
}

pub(crate) fn check_square(m: &CMatrix) -> Result<usize, Error> {
    if m.nrows() == m.ncols() {
        Ok(m.nrows())
    } else {
        Err(Error::Dimension(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )))
    }
}

/// Hermitian eigendecomposition `h = Q diag(w) Q†` with `w` real and sorted
/// in decreasing order (ties keep the solver's order).
pub struct EigDecomposition {
    /// Eigenvalues, decreasing.
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix whose columns match `eigenvalues`.
    pub eigenvectors: CMatrix,
}

impl EigDecomposition {
    /// Reconstruction `Q diag(w) Q†`.
    pub fn reconstruct(&self) -> CMatrix {
        let d = CVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|&w| Complex64::new(w, 0.0)),
        );
        &self.eigenvectors * CMatrix::from_diagonal(&d) * self.eigenvectors.adjoint()
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input may deviate from exact Hermiticity by at most
/// `1e-10 * max(1, ‖h‖)`; it is symmetrized before factoring so the
/// eigenvalues are exactly real.
pub fn herm_eig(h: &CMatrix) -> Result<EigDecomposition, Error> {
    let n = check_square(h)?;
    check_finite(h)?;
    let scale = h.norm().max(1.0);
    if (h - h.adjoint()).norm() > tol::SYMMETRY_INPUT * scale {
        return Err(Error::Validation(
            "matrix is not Hermitian within tolerance".into(),
        ));
    }
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 100_000)
        .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }

    let out = EigDecomposition {
        eigenvalues,
        eigenvectors,
    };
    let residual = (h - out.reconstruct()).norm();
    if residual > tol::HERM_RESIDUAL * scale {
        return Err(Error::Numerical(format!(
            "eigendecomposition residual {residual:.3e} exceeds tolerance"
        )));
    }
    Ok(out)
}

/// Unique positive semidefinite square root of a PSD Hermitian matrix.
///
/// Eigenvalues in `[-1e-10 * max(1, ‖h‖), 0)` are treated as rounding dust
/// and clamped to zero; anything more negative is an error.
pub fn psd_sqrt(h: &CMatrix) -> Result<CMatrix, Error> {
    let eig = herm_eig(h)?;
    let scale = h.norm().max(1.0);
    if let Some(&min) = eig.eigenvalues.last() {
        if min < -tol::EIG_DUST * scale {
            return Err(Error::NotPsd { min_eig: min });
        }
    }
    let n = eig.eigenvalues.len();
    let d = CVector::from_iterator(
        n,
        eig.eigenvalues
            .iter()
            .map(|&w| Complex64::new(w.max(0.0).sqrt(), 0.0)),
    );
    let s = &eig.eigenvectors * CMatrix::from_diagonal(&d) * eig.eigenvectors.adjoint();
    Ok((&s + s.adjoint()).scale(0.5))
}

/// Eigenvalues of a general complex square matrix, via the Schur form.
pub fn general_eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>, Error> {
    check_square(m)?;
    check_finite(m)?;
    let schur = Schur::try_new(m.clone(), 1e-13, 200_000)
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let ev = schur
        .eigenvalues()
        .ok_or_else(|| Error::Numerical("Schur form left unresolved blocks".into()))?;
    Ok(ev.iter().copied().collect())
}

/// Haar-distributed random unitary of size `n`.
///
/// Uses a complex Gaussian matrix followed by QR with the phase fix
/// `U = Q diag(r_jj / |r_jj|)`, which makes the distribution exactly
/// left and right invariant.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<CMatrix, Error> {
    if n == 0 {
        return Err(Error::Dimension("unitary dimension must be at least 1".into()));
    }
    let g = CMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = g.qr();
    let r = qr.r();
    let mut u = qr.q();
    for j in 0..n {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    Ok(u)
}

/// `‖u†u - 1‖`, the unitarity residual.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    let n = u.ncols();
    (u.adjoint() * u - CMatrix::identity(n, n)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let g = CMatrix::from_fn(n, n, |_, _| {
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        (&g + g.adjoint()).scale(0.5)
    }

    #[test]
    fn herm_eig_sorts_decreasing() {
        let h = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0, 0.0), c(3.0, 0.0)]));
        let eig = herm_eig(&h).unwrap();
        assert_abs_diff_eq!(eig.eigenvalues[0], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eig.eigenvalues[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn herm_eig_handles_signed_spectrum() {
        // Off-diagonal symmetric flip has eigenvalues +1 and -1.
        let mut h = CMatrix::zeros(2, 2);
        h[(0, 1)] = c(1.0, 0.0);
        h[(1, 0)] = c(1.0, 0.0);
        let eig = herm_eig(&h).unwrap();
        assert_abs_diff_eq!(eig.eigenvalues[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eig.eigenvalues[1], -1.0, epsilon = 1e-12);
    }

    #[test]
    fn herm_eig_reconstructs_random_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = random_hermitian(8, &mut rng);
        let eig = herm_eig(&h).unwrap();
        assert!((h.clone() - eig.reconstruct()).norm() < 1e-12);
        let tr: f64 = eig.eigenvalues.iter().sum();
        assert_abs_diff_eq!(tr, h.trace().re, epsilon = 1e-12);
        assert!(unitarity_residual(&eig.eigenvectors) < 1e-12);
    }

    #[test]
    fn herm_eig_rejects_non_square_and_non_hermitian() {
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(herm_eig(&rect), Err(Error::Dimension(_))));
        let mut skew = CMatrix::zeros(2, 2);
        skew[(0, 1)] = c(1.0, 0.0);
        skew[(1, 0)] = c(-1.0, 0.0);
        assert!(matches!(herm_eig(&skew), Err(Error::Validation(_))));
    }

    #[test]
    fn herm_eig_rejects_nan() {
        let mut h = CMatrix::zeros(2, 2);
        h[(0, 0)] = c(f64::NAN, 0.0);
        assert!(matches!(herm_eig(&h), Err(Error::Validation(_))));
    }

    #[test]
    fn psd_sqrt_matches_hand_case() {
        let h = CMatrix::from_diagonal(&CVector::from_vec(vec![c(4.0, 0.0), c(9.0, 0.0)]));
        let s = psd_sqrt(&h).unwrap();
        assert_abs_diff_eq!(s[(0, 0)].re, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s[(1, 1)].re, 3.0, epsilon = 1e-12);
        assert!(s[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = CMatrix::from_fn(5, 5, |_, _| {
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let h = &g * g.adjoint();
        let s = psd_sqrt(&h).unwrap();
        assert!((&s * &s - &h).norm() < 1e-10 * h.norm().max(1.0));
    }

    #[test]
    fn psd_sqrt_rejects_indefinite() {
        let h = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0, 0.0), c(-0.5, 0.0)]));
        assert!(matches!(psd_sqrt(&h), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn general_eigenvalues_match_triangular_diagonal() {
        let mut m = CMatrix::zeros(3, 3);
        m[(0, 0)] = c(1.0, 2.0);
        m[(1, 1)] = c(-0.5, 0.25);
        m[(2, 2)] = c(0.0, -1.0);
        m[(0, 2)] = c(3.0, 0.0);
        m[(1, 2)] = c(0.0, 4.0);
        let mut ev = general_eigenvalues(&m).unwrap();
        ev.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap());
        assert!((ev[0] - c(1.0, 2.0)).norm() < 1e-10);
        assert!((ev[1] - c(0.0, -1.0)).norm() < 1e-10);
        assert!((ev[2] - c(-0.5, 0.25)).norm() < 1e-10);
    }

    #[test]
    fn haar_unitary_is_deterministic_per_seed() {
        let mut rng1 = ChaCha8Rng::seed_from_u64(42);
        let mut rng2 = ChaCha8Rng::seed_from_u64(42);
        let u1 = haar_unitary(4, &mut rng1).unwrap();
        let u2 = haar_unitary(4, &mut rng2).unwrap();
        assert_eq!(u1, u2);
        assert!(unitarity_residual(&u1) < 1e-10);
    }

    #[test]
    fn haar_unitary_single_entry_has_unit_modulus() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = haar_unitary(1, &mut rng).unwrap();
        assert_abs_diff_eq!(u[(0, 0)].norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn haar_unitary_first_entry_moment() {
        // For Haar measure |U_11|^2 is Beta(1, n-1) with mean 1/n.
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 8;
        let samples = 10_000;
        let mut acc = 0.0;
        for _ in 0..samples {
            let u = haar_unitary(n, &mut rng).unwrap();
            acc += u[(0, 0)].norm_sqr();
        }
        let mean = acc / samples as f64;
        assert!((mean - 1.0 / n as f64).abs() < 3.4e-3, "mean {mean}");
    }

    #[test]
    fn haar_unitary_rejects_zero_dimension() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(
            haar_unitary(0, &mut rng),
            Err(Error::Dimension(_))
        ));
    }
}
