//! Polynomial families realizing prescribed Reidemeister numbers.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

fn from_terms(degree: usize, terms: &[(usize, i64)]) -> IntPolynomial {
    let mut coeffs = vec![BigInt::zero(); degree + 1];
    for &(k, a) in terms {
        coeffs[k] += a;
    }
    IntPolynomial::new(coeffs).expect("family polynomials are monic")
}

/// `x^{2m} - x^{m+1} + (n-1) x^m + 1`, with `R_2 = n`.
pub fn family_even(m: usize, n: i64) -> Result<IntPolynomial> {
    if m < 2 {
        return Err(Error::domain(format!("even family needs m >= 2, got {m}")));
    }
    if n < 1 {
        return Err(Error::domain(format!("even family needs n >= 1, got {n}")));
    }
    Ok(from_terms(
        2 * m,
        &[(2 * m, 1), (m + 1, -1), (m, n - 1), (0, 1)],
    ))
}

/// `x^{2m+1} + (n+1) x^{m+2} + (1-n) x^{m+1} + (n-1) x^m - n x^{m-1} - 1`,
/// with `R_2 = n + c(m)`.
pub fn family_odd(m: usize, n: i64) -> Result<IntPolynomial> {
    if m < 2 {
        return Err(Error::domain(format!("odd family needs m >= 2, got {m}")));
    }
    Ok(from_terms(
        2 * m + 1,
        &[
            (2 * m + 1, 1),
            (m + 2, n + 1),
            (m + 1, 1 - n),
            (m, n - 1),
            (m - 1, -n),
            (0, -1),
        ],
    ))
}

/// Offset `c(m) = 2 + cos(mπ/3) + √3 sin(mπ/3)`, read off by `m mod 6`.
pub fn c_offset(m: usize) -> i64 {
    match m % 6 {
        4 => 0,
        3 | 5 => 1,
        0 | 2 => 3,
        1 => 4,
        _ => unreachable!(),
    }
}

/// `x^2 + n x - 1`: `R_2 = 2n`, `R_3 = 2n^2`.
pub fn q2(n: i64) -> IntPolynomial {
    from_terms(2, &[(2, 1), (1, n), (0, -1)])
}

/// `x^3 + n x^2 + (n-1) x + 1`: `R_2 = 2n + 1`.
pub fn q3(n: i64) -> IntPolynomial {
    from_terms(3, &[(3, 1), (2, n), (1, n - 1), (0, 1)])
}

/// `x^3 + n x^2 + (n-2) x + 1`: `R_2 = 4n`.
pub fn r3(n: i64) -> IntPolynomial {
    from_terms(3, &[(3, 1), (2, n), (1, n - 2), (0, 1)])
}
