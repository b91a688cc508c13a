//! JSON mirrors of the core types. Complex numbers serialize as [re, im].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dcomputable::{DComputableParams, SymFamilyParams};
use crate::error::Error;
use crate::linalg::{CMatrix, CVector};
use crate::states::{DensityMatrix, Ensemble, PureState};

/// A complex number as a [re, im] pair.
pub type ComplexJson = [f64; 2];

pub fn complex_to_json(z: Complex64) -> ComplexJson {
    [z.re, z.im]
}

pub fn complex_from_json(v: ComplexJson) -> Complex64 {
    Complex64::new(v[0], v[1])
}

fn matrix_to_json(m: &CMatrix) -> Vec<Vec<ComplexJson>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| complex_to_json(m[(r, c)])).collect())
        .collect()
}

fn matrix_from_json(rows: &[Vec<ComplexJson>], what: &str) -> Result<CMatrix, Error> {
    if rows.is_empty() {
        return Err(Error::Validation(format!("{what} has no rows")));
    }
    let ncols = rows[0].len();
    if rows.iter().any(|row| row.len() != ncols) {
        return Err(Error::Validation(format!("{what} rows have unequal lengths")));
    }
    Ok(CMatrix::from_fn(rows.len(), ncols, |r, c| {
        complex_from_json(rows[r][c])
    }))
}

fn vector_to_json(v: &CVector) -> Vec<ComplexJson> {
    v.iter().map(|&z| complex_to_json(z)).collect()
}

fn vector_from_json(entries: &[ComplexJson]) -> CVector {
    CVector::from_fn(entries.len(), |i, _| complex_from_json(entries[i]))
}

/// Pure state as its n×n amplitude matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PureStateJson {
    pub n: usize,
    pub a: Vec<Vec<ComplexJson>>,
}

impl PureStateJson {
    pub fn from_state(psi: &PureState) -> Self {
        PureStateJson {
            n: psi.local_dim(),
            a: matrix_to_json(psi.amplitudes()),
        }
    }

    pub fn to_state(&self, normalize: bool) -> Result<PureState, Error> {
        let a = matrix_from_json(&self.a, "amplitude matrix")?;
        if a.nrows() != self.n || a.ncols() != self.n {
            return Err(Error::Dimension(format!(
                "amplitude matrix is {}×{}, declared local dimension {}",
                a.nrows(),
                a.ncols(),
                self.n
            )));
        }
        PureState::new(a, normalize)
    }
}

/// Density matrix as its dim×dim entries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DensityMatrixJson {
    pub dim: usize,
    pub m: Vec<Vec<ComplexJson>>,
}

impl DensityMatrixJson {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        DensityMatrixJson {
            dim: rho.dim(),
            m: matrix_to_json(rho.matrix()),
        }
    }

    pub fn to_density(&self) -> Result<DensityMatrix, Error> {
        let m = matrix_from_json(&self.m, "density matrix")?;
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(Error::Dimension(format!(
                "density matrix is {}×{}, declared dimension {}",
                m.nrows(),
                m.ncols(),
                self.dim
            )));
        }
        DensityMatrix::new(m)
    }
}

/// One ensemble member: a normalized vectorized state with its weight.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightedStateJson {
    pub weight: f64,
    pub state: Vec<ComplexJson>,
}

/// Ensemble as weighted normalized states.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnsembleJson {
    pub states: Vec<WeightedStateJson>,
}

impl EnsembleJson {
    pub fn from_ensemble(ens: &Ensemble) -> Self {
        let states = ens
            .states()
            .iter()
            .map(|z| {
                let weight = z.norm_squared();
                let state = if weight > 0.0 {
                    z.unscale(weight.sqrt())
                } else {
                    z.clone()
                };
                WeightedStateJson {
                    weight,
                    state: vector_to_json(&state),
                }
            })
            .collect();
        EnsembleJson { states }
    }

    pub fn to_ensemble(&self) -> Result<Ensemble, Error> {
        let pairs: Vec<(f64, CVector)> = self
            .states
            .iter()
            .map(|ws| (ws.weight, vector_from_json(&ws.state)))
            .collect();
        Ensemble::from_weighted(&pairs)
    }
}

/// Parameters of the 4×4 zero-diagonal family.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymParamsJson {
    pub a1: ComplexJson,
    pub b1: ComplexJson,
    pub c1: ComplexJson,
    pub d1: ComplexJson,
    pub b: ComplexJson,
    pub e: ComplexJson,
}

impl SymParamsJson {
    pub fn from_params(p: &SymFamilyParams) -> Self {
        SymParamsJson {
            a1: complex_to_json(p.a1),
            b1: complex_to_json(p.b1),
            c1: complex_to_json(p.c1),
            d1: complex_to_json(p.d1),
            b: complex_to_json(p.b),
            e: complex_to_json(p.e),
        }
    }

    pub fn to_params(&self) -> SymFamilyParams {
        SymFamilyParams {
            a1: complex_from_json(self.a1),
            b1: complex_from_json(self.b1),
            c1: complex_from_json(self.c1),
            d1: complex_from_json(self.d1),
            b: complex_from_json(self.b),
            e: complex_from_json(self.e),
        }
    }
}

/// Base 2×2 block of the recursive family.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RecursiveBaseJson {
    pub a: ComplexJson,
    pub c: ComplexJson,
    pub d: ComplexJson,
}

/// Parameters of the recursive family: base block plus k ladder pairs
/// (bⱼ, cⱼ), j = 1..k.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RecursiveParamsJson {
    pub k: usize,
    pub base: RecursiveBaseJson,
    pub ladder: Vec<[ComplexJson; 2]>,
}

impl RecursiveParamsJson {
    pub fn from_params(p: &DComputableParams) -> Self {
        RecursiveParamsJson {
            k: p.k(),
            base: RecursiveBaseJson {
                a: complex_to_json(p.a),
                c: complex_to_json(p.c),
                d: complex_to_json(p.d),
            },
            ladder: p
                .ladder
                .iter()
                .map(|&(b, c)| [complex_to_json(b), complex_to_json(c)])
                .collect(),
        }
    }

    pub fn to_params(&self) -> Result<DComputableParams, Error> {
        if self.ladder.len() != self.k {
            return Err(Error::Validation(format!(
                "declared k = {} but {} ladder pairs given",
                self.k,
                self.ladder.len()
            )));
        }
        Ok(DComputableParams {
            a: complex_from_json(self.base.a),
            c: complex_from_json(self.base.c),
            d: complex_from_json(self.base.d),
            ladder: self
                .ladder
                .iter()
                .map(|&[b, c]| (complex_from_json(b), complex_from_json(c)))
                .collect(),
        })
    }
}

/// Family parameters of either kind.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamsJson {
    Recursive(RecursiveParamsJson),
    Sym(SymParamsJson),
}

/// Mixed-state input: a density matrix or a weighted ensemble.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MixedInputJson {
    Density(DensityMatrixJson),
    Ensemble(EnsembleJson),
}

impl MixedInputJson {
    pub fn to_density(&self) -> Result<DensityMatrix, Error> {
        match self {
            MixedInputJson::Density(d) => d.to_density(),
            MixedInputJson::Ensemble(e) => e.to_ensemble()?.density(),
        }
    }
}
