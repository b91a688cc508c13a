//! Two-level reduced spectra and the measures built on them: the
//! generalized determinant D = λ₁ⁿλ₂ᵐ, the generalized concurrence
//! d = 2n√(λ₁λ₂) for balanced multiplicities, the entanglement of
//! formation they induce, and the 2⊗2 concurrence as the base case.

use crate::error::Error;
use crate::linalg::herm_eig;
use crate::states::PureState;
use crate::tol;

/// Reduced-density spectrum with at most two distinct non-zero levels:
/// λ₁ with multiplicity n and λ₂ with multiplicity m, n·λ₁ + m·λ₂ = 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoLevelSpectrum {
    /// Larger level.
    pub lambda1: f64,
    /// Multiplicity of the larger level.
    pub mult1: usize,
    /// Smaller level (zero when the spectrum has a single non-zero level).
    pub lambda2: f64,
    /// Multiplicity of the smaller level.
    pub mult2: usize,
}

impl TwoLevelSpectrum {
    /// Validates ordering, sign and the unit-trace partition
    /// n·λ₁ + m·λ₂ = 1 (within 1e-8).
    pub fn new(lambda1: f64, mult1: usize, lambda2: f64, mult2: usize) -> Result<Self, Error> {
        if mult1 == 0 {
            return Err(Error::Domain("leading multiplicity must be at least 1".into()));
        }
        if !(lambda1.is_finite() && lambda2.is_finite()) {
            return Err(Error::Validation("levels must be finite".into()));
        }
        if lambda2 < -tol::EIG_DUST || lambda1 < lambda2 {
            return Err(Error::Validation(format!(
                "levels must satisfy λ₁ ≥ λ₂ ≥ 0, got ({lambda1:.12}, {lambda2:.12})"
            )));
        }
        let lambda2 = lambda2.max(0.0);
        let total = mult1 as f64 * lambda1 + mult2 as f64 * lambda2;
        if (total - 1.0).abs() > 1e-8 {
            return Err(Error::Validation(format!(
                "levels sum to {total:.12}, not 1 within tolerance"
            )));
        }
        Ok(TwoLevelSpectrum {
            lambda1,
            mult1,
            lambda2,
            mult2,
        })
    }
}

/// Groups the reduced-density eigenvalues of `psi` into levels.
///
/// Eigenvalues within `cluster_tol * λ_max` of each other share a level and
/// are represented by the cluster mean; levels below `cluster_tol * λ_max`
/// count as zero. A single non-zero level of even multiplicity 2n is read
/// as the balanced spectrum λ₁ = λ₂ with n = m; with odd multiplicity it
/// is returned alone (λ₂ = 0, m = 0). Three or more non-zero levels are
/// rejected.
pub fn spectrum_structure(psi: &PureState, cluster_tol: f64) -> Result<TwoLevelSpectrum, Error> {
    if !(cluster_tol > 0.0 && cluster_tol.is_finite()) {
        return Err(Error::Domain("cluster tolerance must be positive".into()));
    }
    let eig = herm_eig(&psi.reduced_density())?;
    let vals = &eig.eigenvalues;
    let lmax = vals[0].max(0.0);
    if lmax <= 0.0 {
        return Err(Error::Numerical("reduced density has no positive eigenvalue".into()));
    }
    let width = cluster_tol * lmax;

    let mut clusters: Vec<(f64, usize)> = Vec::new();
    let mut start = 0;
    while start < vals.len() {
        let mut end = start + 1;
        while end < vals.len() && vals[end - 1] - vals[end] <= width {
            end += 1;
        }
        let mean = vals[start..end].iter().sum::<f64>() / (end - start) as f64;
        clusters.push((mean, end - start));
        start = end;
    }

    let mut zero_mult = 0usize;
    let mut nonzero: Vec<(f64, usize)> = Vec::new();
    for &(mean, count) in &clusters {
        if mean.abs() <= width {
            zero_mult += count;
        } else {
            nonzero.push((mean, count));
        }
    }

    match nonzero.len() {
        0 => Err(Error::Numerical(
            "all reduced-density eigenvalues clustered at zero".into(),
        )),
        1 => {
            let (l1, n1) = nonzero[0];
            if zero_mult > 0 {
                TwoLevelSpectrum::new(l1, n1, 0.0, zero_mult)
            } else if n1 % 2 == 0 {
                TwoLevelSpectrum::new(l1, n1 / 2, l1, n1 / 2)
            } else {
                TwoLevelSpectrum::new(l1, n1, 0.0, 0)
            }
        }
        2 => TwoLevelSpectrum::new(nonzero[0].0, nonzero[0].1, nonzero[1].0, nonzero[1].1),
        k => Err(Error::NotTwoLevel { clusters: k }),
    }
}

/// Generalized determinant D = λ₁ⁿ λ₂ᵐ.
pub fn gen_determinant(s: &TwoLevelSpectrum) -> f64 {
    s.lambda1.powi(s.mult1 as i32) * pow_or_one(s.lambda2, s.mult2)
}

fn pow_or_one(base: f64, exp: usize) -> f64 {
    if exp == 0 {
        1.0
    } else {
        base.powi(exp as i32)
    }
}

fn xlog2(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// Entanglement of formation -n λ₁ log₂ λ₁ - m λ₂ log₂ λ₂ of a two-level
/// spectrum.
pub fn eof_two_level(s: &TwoLevelSpectrum) -> f64 {
    -(s.mult1 as f64) * xlog2(s.lambda1) - (s.mult2 as f64) * xlog2(s.lambda2)
}

/// Generalized concurrence d = 2n√(λ₁λ₂), defined for balanced
/// multiplicities n = m.
pub fn gen_concurrence(s: &TwoLevelSpectrum) -> Result<f64, Error> {
    if s.mult1 != s.mult2 {
        return Err(Error::Unsupported(format!(
            "concurrence needs equal multiplicities, got n = {}, m = {}",
            s.mult1, s.mult2
        )));
    }
    let d = 2.0 * s.mult1 as f64 * (s.lambda1 * s.lambda2).max(0.0).sqrt();
    Ok(d.min(1.0))
}

/// Entanglement of formation as a function of the concurrence for balanced
/// multiplicity n: with x = (1 + √(1-d²))/(2n),
/// E = n(-x log₂ x - (1/n - x) log₂(1/n - x)).
pub fn eof_from_concurrence(d: f64, n: usize) -> Result<f64, Error> {
    if n == 0 {
        return Err(Error::Domain("multiplicity must be at least 1".into()));
    }
    if !d.is_finite() || !(-1e-12..=1.0 + 1e-12).contains(&d) {
        return Err(Error::Domain(format!("concurrence {d} outside [0, 1]")));
    }
    let d = d.clamp(0.0, 1.0);
    let nf = n as f64;
    let x = (1.0 + (1.0 - d * d).sqrt()) / (2.0 * nf);
    let y = (1.0 / nf - x).max(0.0);
    Ok(nf * (-xlog2(x) - xlog2(y)))
}

/// 2⊗2 concurrence C = 2|a₀₀a₁₁ - a₀₁a₁₀| of a pure state.
pub fn wootters_concurrence(psi: &PureState) -> Result<f64, Error> {
    if psi.local_dim() != 2 {
        return Err(Error::Dimension(format!(
            "concurrence base case needs local dimension 2, got {}",
            psi.local_dim()
        )));
    }
    let a = psi.amplitudes();
    let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
    Ok((2.0 * det.norm()).min(1.0))
}
