//! Floating-point cross-check: `Π_{i<=c} Π_{X ∈ H_i} |1 - f_λ(X)|` over the
//! numerically extracted roots `λ` of `p`.
//!
//! Roots are found per squarefree factor (exact Yun decomposition over `Q`)
//! with Aberth–Ehrlich iteration, so repeated roots keep full precision.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::hall::{HallBasis, TieBreak};
use crate::poly::IntPolynomial;

const MAX_ITERATIONS: usize = 500;
const RESIDUAL_TOLERANCE: f64 = 1e-12;

type RatPoly = Vec<BigRational>;

fn trim(p: &mut RatPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn derivative(p: &RatPoly) -> RatPoly {
    let mut d: RatPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, a)| a * BigRational::from_integer(BigInt::from(k)))
        .collect();
    trim(&mut d);
    d
}

fn div_rem(num: &RatPoly, den: &RatPoly) -> (RatPoly, RatPoly) {
    let mut rem = num.clone();
    trim(&mut rem);
    let lead = den.last().expect("division by zero polynomial").clone();
    if rem.len() < den.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - den.len() + 1];
    while rem.len() >= den.len() && !rem.is_empty() {
        let shift = rem.len() - den.len();
        let factor = rem.last().unwrap() / &lead;
        for (k, d) in den.iter().enumerate() {
            rem[shift + k] -= &factor * d;
        }
        quot[shift] = factor;
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

fn monic(mut p: RatPoly) -> RatPoly {
    trim(&mut p);
    if let Some(lead) = p.last().cloned() {
        for a in p.iter_mut() {
            *a /= &lead;
        }
    }
    p
}

fn gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = r;
    }
    monic(x)
}

fn sub(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let n = a.len().max(b.len());
    let mut out: RatPoly = (0..n)
        .map(|k| {
            let x = a.get(k).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(k).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

/// Yun's algorithm: `f = Π_k g_k^k` with squarefree, pairwise coprime `g_k`.
/// Returns `(g_k, k)` for the nonconstant factors.
fn squarefree_factors(f: &RatPoly) -> Vec<(RatPoly, usize)> {
    let f = monic(f.clone());
    let mut out = Vec::new();
    if f.len() <= 1 {
        return out;
    }
    let df = derivative(&f);
    let a0 = gcd(&f, &df);
    let mut b = div_rem(&f, &a0).0;
    let c = div_rem(&df, &a0).0;
    let mut d = sub(&c, &derivative(&b));
    let mut k = 1;
    while b.len() > 1 {
        let a = gcd(&b, &d);
        let b_next = div_rem(&b, &a).0;
        let c_next = div_rem(&d, &a).0;
        if a.len() > 1 {
            out.push((a, k));
        }
        d = sub(&c_next, &derivative(&b_next));
        b = b_next;
        k += 1;
    }
    out
}

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &a in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn residual_ok(coeffs: &[f64], z: Complex64) -> bool {
    let (p, _) = horner(coeffs, z);
    let scale: f64 = coeffs
        .iter()
        .rev()
        .fold(0.0, |acc, a| acc * z.norm() + a.abs());
    p.norm() <= RESIDUAL_TOLERANCE * scale.max(f64::MIN_POSITIVE)
}

/// All roots of a polynomial with simple roots, given by `f64` coefficients
/// (low degree first, nonzero leading coefficient).
pub fn aberth_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[n];
    let coeffs: Vec<f64> = coeffs.iter().map(|a| a / lead).collect();
    if n == 1 {
        return Ok(vec![Complex64::new(-coeffs[0], 0.0)]);
    }
    // Cauchy bound for the radius, then spread starting points on a
    // slightly rotated circle so no start sits on the real axis.
    let bound = 1.0 + coeffs[..n].iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let radius = 0.5 * bound;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            Complex64::from_polar(
                radius,
                2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4,
            )
        })
        .collect();

    let mut converged_rounds = 0;
    for _ in 0..MAX_ITERATIONS {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner(&coeffs, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = if dp.norm() == 0.0 {
                Complex64::new(1e-8, 1e-8)
            } else {
                p / dp
            };
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| Complex64::one() / (z[k] - z[j]))
                .sum();
            let step = ratio / (Complex64::one() - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            converged_rounds += 1;
            if converged_rounds >= 2 {
                break;
            }
        } else {
            converged_rounds = 0;
        }
    }
    for root in &z {
        if !residual_ok(&coeffs, *root) {
            return Err(Error::Numeric(format!(
                "root finder did not reach residual {RESIDUAL_TOLERANCE:e} within {MAX_ITERATIONS} iterations"
            )));
        }
    }
    Ok(z)
}

/// Roots, with multiplicity, of a polynomial with integer coefficients
/// (low degree first).
pub fn integer_polynomial_roots(coeffs: &[BigInt]) -> Result<Vec<Complex64>> {
    let mut coeffs: Vec<BigInt> = coeffs.to_vec();
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        return Err(Error::domain("zero polynomial has no finite root set"));
    }
    let zeros = coeffs.iter().take_while(|a| a.is_zero()).count();
    let mut roots = vec![Complex64::zero(); zeros];
    let f: RatPoly = coeffs[zeros..]
        .iter()
        .map(|a| BigRational::from_integer(a.clone()))
        .collect();
    for (factor, multiplicity) in squarefree_factors(&f) {
        let as_f64 = factor
            .iter()
            .map(|a| {
                a.to_f64()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::Numeric("coefficient out of f64 range".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let simple = aberth_roots(&as_f64)?;
        for _ in 0..multiplicity {
            roots.extend_from_slice(&simple);
        }
    }
    Ok(roots)
}

pub fn polynomial_roots(p: &IntPolynomial) -> Result<Vec<Complex64>> {
    integer_polynomial_roots(p.coeffs())
}

/// Floating-point estimate of `R_c(p)` from the roots of `p`. Meant for
/// cross-checking the exact engine; near-zero factors make it unreliable as a
/// test for infinity.
pub fn float_oracle(p: &IntPolynomial, c: usize) -> Result<f64> {
    if c < 1 {
        return Err(Error::domain("class must be at least 1"));
    }
    let lambda = polynomial_roots(p)?;
    let basis = HallBasis::build(p.degree(), c, TieBreak::Lexicographic);
    Ok(hall_monomial_product(&basis, &lambda))
}

/// `Π_{X ∈ basis} |1 - f_λ(X)|`.
pub fn hall_monomial_product(basis: &HallBasis, lambda: &[Complex64]) -> f64 {
    (0..basis.len())
        .map(|idx| (Complex64::one() - basis.monomial(idx, lambda)).norm())
        .product()
}
