//! Matrices induced on the graded layers `γ_i / γ_{i+1}` and their
//! `det(1 - M_i)`, by two independent exact routes.
//!
//! The structural route rewrites the image of every Hall element and takes a
//! Bareiss determinant. The trace route never forms `M_i`: it gets the power
//! sums `tr(M_i^k)` from the free Lie character formula
//! `tr(M_i^k) = (1/i) Σ_{d | i} μ(d) tr(A^{kd})^{i/d}` and recovers the
//! characteristic polynomial with Newton's identities.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hall::{mobius, HallBasis};
use crate::lie::FreeNilpotentLie;
use crate::matrix::IntegerMatrix;
use crate::poly::elementary_from_power_sums;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LayerMethod {
    Structural,
    Trace,
}

impl fmt::Display for LayerMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LayerMethod::Structural => "structural",
            LayerMethod::Trace => "trace",
        })
    }
}

/// Signed `det(1 - M_i)` for `i = 1..=c`; `dets[0]` is layer 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerDeterminants {
    pub r: usize,
    pub c: usize,
    pub dims: Vec<usize>,
    pub dets: Vec<BigInt>,
    pub method: LayerMethod,
}

impl LayerDeterminants {
    pub fn has_zero(&self) -> bool {
        self.dets.iter().any(Zero::is_zero)
    }
}

fn check_square(a: &IntegerMatrix, r: usize) -> Result<()> {
    if a.rows() != r || a.cols() != r {
        return Err(Error::DimensionMismatch {
            expected: format!("{r}x{r}"),
            found: format!("{}x{}", a.rows(), a.cols()),
        });
    }
    Ok(())
}

/// `M_i`: column `j` holds the coordinates of the image of the `j`-th
/// degree-`i` Hall element.
pub fn induced_matrix(
    alg: &FreeNilpotentLie,
    a: &IntegerMatrix,
    i: usize,
) -> Result<IntegerMatrix> {
    if i < 1 || i > alg.class() {
        return Err(Error::domain(format!(
            "layer {i} outside 1..={}",
            alg.class()
        )));
    }
    let images = alg.images_up_to(a, i)?;
    Ok(layer_matrix(alg.basis(), &images, i))
}

/// All of `M_1, ..., M_c`, sharing one pass over the basis.
pub fn induced_matrices(alg: &FreeNilpotentLie, a: &IntegerMatrix) -> Result<Vec<IntegerMatrix>> {
    let images = alg.images_up_to(a, alg.class())?;
    Ok((1..=alg.class())
        .map(|i| layer_matrix(alg.basis(), &images, i))
        .collect())
}

fn layer_matrix(
    basis: &HallBasis,
    images: &[crate::lie::LieCombination],
    i: usize,
) -> IntegerMatrix {
    let range = basis.layer_range(i);
    let start = range.start;
    let k = range.len();
    let mut m = IntegerMatrix::zeros(k, k);
    for (col, x) in range.enumerate() {
        for (idx, coeff) in images[x].terms() {
            m.set(idx - start, col, coeff.clone());
        }
    }
    m
}

/// Exact `det(1 - M)`.
pub fn det_one_minus(m: &IntegerMatrix) -> BigInt {
    m.one_minus().determinant()
}

pub fn layer_dets_structural(
    alg: &FreeNilpotentLie,
    a: &IntegerMatrix,
) -> Result<LayerDeterminants> {
    check_square(a, alg.rank())?;
    let matrices = induced_matrices(alg, a)?;
    Ok(LayerDeterminants {
        r: alg.rank(),
        c: alg.class(),
        dims: matrices.iter().map(IntegerMatrix::rows).collect(),
        dets: matrices.iter().map(det_one_minus).collect(),
        method: LayerMethod::Structural,
    })
}

pub fn layer_dets_trace(basis: &HallBasis, a: &IntegerMatrix) -> Result<LayerDeterminants> {
    let r = basis.rank();
    check_square(a, r)?;
    let dims = basis.layer_dims();
    let max_power = dims
        .iter()
        .enumerate()
        .map(|(idx, &k)| k * (idx + 1))
        .max()
        .unwrap_or(0);

    // traces[m] = tr(A^m)
    let mut traces = Vec::with_capacity(max_power + 1);
    traces.push(BigInt::from(r));
    let mut power = IntegerMatrix::identity(r);
    for _ in 1..=max_power {
        power = &power * a;
        traces.push(power.trace());
    }

    let mut dets = Vec::with_capacity(dims.len());
    for (idx, &k) in dims.iter().enumerate() {
        let i = idx + 1;
        let divisors: Vec<usize> = (1..=i).filter(|d| i % d == 0).collect();
        let power_sums: Vec<BigInt> = (1..=k)
            .map(|step| {
                let mut total = BigInt::zero();
                for &d in &divisors {
                    let mu = mobius(d as u64);
                    if mu == 0 {
                        continue;
                    }
                    let term = pow(traces[step * d].clone(), i / d);
                    if mu > 0 {
                        total += term;
                    } else {
                        total -= term;
                    }
                }
                debug_assert!((&total % BigInt::from(i)).is_zero());
                total / BigInt::from(i)
            })
            .collect();
        let e = elementary_from_power_sums(&power_sums);
        // det(1 - M) = Π (1 - μ_j) = Σ_k (-1)^k e_k
        let mut det = BigRational::zero();
        for (j, ej) in e.iter().enumerate() {
            if j % 2 == 0 {
                det += ej;
            } else {
                det -= ej;
            }
        }
        if !det.is_integer() {
            return Err(Error::Numeric(format!(
                "trace route produced non-integral det(1 - M_{i}) = {det}"
            )));
        }
        dets.push(det.to_integer());
    }

    Ok(LayerDeterminants {
        r,
        c: basis.class(),
        dims,
        dets,
        method: LayerMethod::Trace,
    })
}
