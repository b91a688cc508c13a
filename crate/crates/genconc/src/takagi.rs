//! Takagi factorization of complex symmetric matrices: `U τ Uᵀ = diag(Λ)`
//! with `U` unitary and `Λ` real, non-negative and decreasing.
//!
//! The factorization is built from an SVD pass: for `τ = W Σ V†` the matrix
//! `B = W† τ W̄` restricted to a group of equal singular values is `σ` times
//! a symmetric unitary, so writing `B = X + iY` with commuting real
//! symmetric `X`, `Y` reduces the block to a real simultaneous
//! diagonalization plus half-angle phase corrections. Nearly degenerate
//! groups that are not exactly equal leave a small off-diagonal remainder,
//! which additional passes on the updated matrix remove.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Error;
use crate::linalg::{check_finite, check_square, CMatrix};
use crate::tol;

/// Result of the Takagi factorization: `u * tau * uᵀ = diag(lambdas)`.
pub struct TakagiFactorization {
    /// Unitary factor.
    pub u: CMatrix,
    /// Takagi values: singular values of `tau`, decreasing.
    pub lambdas: Vec<f64>,
}

impl TakagiFactorization {
    /// `‖u τ uᵀ - diag(Λ)‖`, the factorization residual.
    pub fn residual(&self, tau: &CMatrix) -> f64 {
        let mut d = &self.u * tau * self.u.transpose();
        for (i, &l) in self.lambdas.iter().enumerate() {
            d[(i, i)] -= Complex64::new(l, 0.0);
        }
        d.norm()
    }
}

/// Takagi factorization of a complex symmetric matrix.
///
/// The input may deviate from exact symmetry by at most
/// `1e-10 * max(1, ‖τ‖)`; it is symmetrized before factoring. A zero
/// matrix yields the identity factor.
pub fn takagi(tau: &CMatrix) -> Result<TakagiFactorization, Error> {
    let n = check_square(tau)?;
    check_finite(tau)?;
    let scale = tau.norm().max(1.0);
    if (tau - tau.transpose()).norm() > tol::SYMMETRY_INPUT * scale {
        return Err(Error::Validation(
            "matrix is not complex symmetric within tolerance".into(),
        ));
    }
    let mut work = (tau + tau.transpose()).scale(0.5);
    if work.norm() == 0.0 {
        return Ok(TakagiFactorization {
            u: CMatrix::identity(n, n),
            lambdas: vec![0.0; n],
        });
    }

    let target = tol::TAKAGI_RESIDUAL * scale;
    let mut u = CMatrix::identity(n, n);
    let mut converged = false;
    for _pass in 0..4 {
        let step = takagi_pass(&work)?;
        u = &step * u;
        work = &step * &work * step.transpose();
        work = (&work + work.transpose()).scale(0.5);
        if offdiag_residual(&work) <= target {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "Takagi iteration stalled at residual {:.3e}",
            offdiag_residual(&work)
        )));
    }

    let mut lambdas: Vec<f64> = (0..n).map(|i| work[(i, i)].norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| lambdas[j].partial_cmp(&lambdas[i]).unwrap());
    let mut su = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for c in 0..n {
            su[(dst, c)] = u[(src, c)];
        }
    }
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());

    let out = TakagiFactorization { u: su, lambdas };
    let res = out.residual(tau);
    if res > target {
        return Err(Error::Numerical(format!(
            "Takagi residual {res:.3e} exceeds tolerance"
        )));
    }
    Ok(out)
}

/// Distance of `m` from `diag(|m_ii|)`.
fn offdiag_residual(m: &CMatrix) -> f64 {
    let mut acc = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = if i == j {
                m[(i, j)] - Complex64::new(m[(i, j)].norm(), 0.0)
            } else {
                m[(i, j)]
            };
            acc += v.norm_sqr();
        }
    }
    acc.sqrt()
}

/// One SVD-based reduction pass: returns `U_p` with `U_p t U_pᵀ` diagonal up
/// to the near-degeneracy splitting handled by later passes.
fn takagi_pass(t: &CMatrix) -> Result<CMatrix, Error> {
    let n = t.nrows();
    let svd = t.clone().svd(true, true);
    let w = svd
        .u
        .ok_or_else(|| Error::Numerical("SVD did not produce singular vectors".into()))?;
    let sv = svd.singular_values;
    let smax = sv[0].max(f64::MIN_POSITIVE);

    let mut p = CMatrix::zeros(n, n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && sv[end - 1] - sv[end] <= tol::TAKAGI_CLUSTER * smax {
            end += 1;
        }
        let len = end - start;
        let wb = w.columns(start, len).into_owned();
        let b = wb.adjoint() * t * wb.conjugate();
        let b = (&b + b.transpose()).scale(0.5);
        let pb = takagi_block(&b);
        p.view_mut((start, start), (len, len)).copy_from(&pb);
        start = end;
    }
    Ok((w * p).adjoint())
}

/// Factor one (nearly) degenerate block: `B ≈ P diag(|b_j|) Pᵀ`.
fn takagi_block(b: &CMatrix) -> CMatrix {
    let len = b.nrows();
    if len == 1 {
        let z = b[(0, 0)];
        let phi = if z.norm() > 0.0 { z.arg() } else { 0.0 };
        return CMatrix::from_element(1, 1, Complex64::from_polar(1.0, phi / 2.0));
    }
    let x = b.map(|z| z.re);
    let y = b.map(|z| z.im);
    let o = simultaneous_diag(&x, &y);
    let oc = o.map(|v| Complex64::new(v, 0.0));
    let bd = oc.transpose() * b * &oc;
    let mut p = oc;
    for j in 0..len {
        let z = bd[(j, j)];
        let phi = if z.norm() > 1e-300 { z.arg() } else { 0.0 };
        let f = Complex64::from_polar(1.0, phi / 2.0);
        for i in 0..len {
            p[(i, j)] *= f;
        }
    }
    p
}

/// Orthogonal `O` diagonalizing commuting real symmetric `x` and `y`:
/// eigenvectors of `x`, refined inside each degenerate cluster by the
/// restriction of `y`.
fn simultaneous_diag(x: &DMatrix<f64>, y: &DMatrix<f64>) -> DMatrix<f64> {
    let n = x.nrows();
    let scale = x.norm().max(y.norm()).max(f64::MIN_POSITIVE);
    let ex = SymmetricEigen::new(x.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| ex.eigenvalues[j].partial_cmp(&ex.eigenvalues[i]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| ex.eigenvalues[i]).collect();
    let mut o1 = DMatrix::<f64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        o1.set_column(dst, &ex.eigenvectors.column(src));
    }

    let mut o2 = DMatrix::<f64>::identity(n, n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && vals[end - 1] - vals[end] <= tol::TAKAGI_CLUSTER * scale {
            end += 1;
        }
        let len = end - start;
        if len > 1 {
            let oc = o1.columns(start, len).into_owned();
            let yr = oc.transpose() * y * &oc;
            let yr = (&yr + yr.transpose()).scale(0.5);
            let ey = SymmetricEigen::new(yr);
            o2.view_mut((start, start), (len, len))
                .copy_from(&ey.eigenvectors);
        }
        start = end;
    }
    o1 * o2
}
