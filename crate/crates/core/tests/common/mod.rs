//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use nilfix::{HallBasis, HallKind, IntegerMatrix, LieCombination};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::Rng;

/// Element of the free associative algebra: word -> coefficient.
pub type AssocPoly = BTreeMap<Vec<usize>, BigInt>;

fn add_into(acc: &mut AssocPoly, word: Vec<usize>, c: BigInt) {
    let slot = acc.entry(word.clone()).or_insert_with(BigInt::zero);
    *slot += c;
    if slot.is_zero() {
        acc.remove(&word);
    }
}

pub fn assoc_mul(a: &AssocPoly, b: &AssocPoly) -> AssocPoly {
    let mut out = AssocPoly::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            add_into(&mut out, w, ca * cb);
        }
    }
    out
}

pub fn assoc_bracket(a: &AssocPoly, b: &AssocPoly) -> AssocPoly {
    let mut out = assoc_mul(a, b);
    for (w, c) in assoc_mul(b, a) {
        add_into(&mut out, w, -c);
    }
    out
}

/// Expansion of every Hall element as a commutator polynomial in the free
/// associative algebra, computed straight from the bracket tree.
pub fn expand_basis(basis: &HallBasis) -> Vec<AssocPoly> {
    let mut out: Vec<AssocPoly> = Vec::with_capacity(basis.len());
    for e in basis.elements() {
        let p = match e.kind {
            HallKind::Generator(g) => AssocPoly::from([(vec![g], BigInt::one())]),
            HallKind::Bracket { left, right } => assoc_bracket(&out[left], &out[right]),
        };
        out.push(p);
    }
    out
}

pub fn expand_combination(expanded: &[AssocPoly], x: &LieCombination) -> AssocPoly {
    let mut out = AssocPoly::new();
    for (idx, c) in x.terms() {
        for (w, cw) in &expanded[idx] {
            add_into(&mut out, w.clone(), c * cw);
        }
    }
    out
}

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * cofactor_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

pub fn matrix_rows(m: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

pub fn random_matrix(rng: &mut impl Rng, r: usize, lo: i64, hi: i64) -> IntegerMatrix {
    let rows: Vec<Vec<i64>> = (0..r)
        .map(|_| (0..r).map(|_| rng.gen_range(lo..=hi)).collect())
        .collect();
    IntegerMatrix::from_rows(&rows)
}

/// Greedy nearest-neighbour matching of two multisets of complex numbers;
/// each pair must agree within `tol * max(1, |z|)`.
pub fn match_multisets(
    expected: &[Complex64],
    actual: &[Complex64],
    tol: f64,
) -> Result<f64, String> {
    if expected.len() != actual.len() {
        return Err(format!(
            "sizes differ: {} expected, {} found",
            expected.len(),
            actual.len()
        ));
    }
    let mut used = vec![false; actual.len()];
    let mut worst = 0.0f64;
    for z in expected {
        let (k, d) = actual
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, w)| (k, (z - w).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("same length");
        let scaled = d / z.norm().max(1.0);
        if scaled > tol {
            return Err(format!("no match for {z}: nearest off by {scaled:e}"));
        }
        worst = worst.max(scaled);
        used[k] = true;
    }
    Ok(worst)
}
