//! Shared input generators for the benchmark targets.

use genconc::{
    build_recursive, build_sym, BiformMatrix, CMatrix, DComputableParams, DensityMatrix, Ensemble,
    Family, SymFamilyParams,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
}

pub fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let m = CMatrix::from_fn(n, n, |_, _| unit(rng));
    (&m + m.adjoint()).scale(0.5)
}

pub fn random_complex_symmetric(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let m = CMatrix::from_fn(n, n, |_, _| unit(rng));
    (&m + m.transpose()).scale(0.5)
}

pub fn random_sym_params(rng: &mut ChaCha8Rng) -> SymFamilyParams {
    SymFamilyParams {
        a1: unit(rng),
        b1: unit(rng),
        c1: unit(rng),
        d1: unit(rng),
        b: unit(rng),
        e: unit(rng),
    }
    .normalized()
    .unwrap()
}

pub fn random_recursive_params(k: usize, rng: &mut ChaCha8Rng) -> DComputableParams {
    DComputableParams {
        a: unit(rng),
        c: unit(rng),
        d: unit(rng),
        ladder: (0..k).map(|_| (unit(rng), unit(rng))).collect(),
    }
    .normalized()
    .unwrap()
}

/// A random in-class density of the given rank together with its form.
pub fn random_density(
    family: Family,
    k: usize,
    rank: usize,
    rng: &mut ChaCha8Rng,
) -> (DensityMatrix, BiformMatrix) {
    let p = genconc::derive_p(family, k).unwrap();
    let mut weights: Vec<f64> = (0..rank).map(|_| rng.random::<f64>() + 0.1).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let pairs: Vec<(f64, genconc::CVector)> = weights
        .iter()
        .map(|&w| {
            let psi = match family {
                Family::Sym => build_sym(&random_sym_params(rng), false).unwrap(),
                Family::Recursive => {
                    build_recursive(&random_recursive_params(k, rng), false).unwrap()
                }
            };
            (w, psi.to_vector())
        })
        .collect();
    let rho = Ensemble::from_weighted(&pairs).unwrap().density().unwrap();
    (rho, p)
}
