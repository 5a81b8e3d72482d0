//! Closed forms of `R_c(p)` in low rank and class, in terms of the
//! coefficients of `p`.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::RValue;
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    Value(RValue),
    /// `(r, c, a_0)` outside the supported combinations.
    NotApplicable,
}

impl ClosedForm {
    pub fn value(&self) -> Option<&RValue> {
        match self {
            ClosedForm::Value(v) => Some(v),
            ClosedForm::NotApplicable => None,
        }
    }
}

/// Supported: `(2,2)` and `(2,3)` with `a_0 = -1`, `(3,2)` with `a_0 = ±1`,
/// `(3,3)` with `a_0 = 1`.
pub fn closed_form(r: usize, c: usize, p: &IntPolynomial) -> Result<ClosedForm> {
    if p.degree() != r {
        return Err(Error::DimensionMismatch {
            expected: format!("degree {r}"),
            found: format!("degree {}", p.degree()),
        });
    }
    let a0 = p.constant_term();
    let minus_one = -BigInt::one();
    let value = match (r, c) {
        (2, 2) if *a0 == minus_one => BigInt::from(2) * p.coeff(1).abs(),
        (2, 3) if *a0 == minus_one => BigInt::from(2) * p.coeff(1) * p.coeff(1),
        (3, 2) if p.is_unimodular() => (p.eval(&BigInt::one()) * p.eval(&-a0)).abs(),
        (3, 3) if a0.is_one() => {
            let a = BigInt::one() + p.coeff(1);
            let b = BigInt::one() + p.coeff(2);
            let diff = (&a * &a - &b * &b).abs();
            let tail = &a + &b - &a * &b;
            BigInt::from(4) * diff * &tail * &tail
        }
        _ => return Ok(ClosedForm::NotApplicable),
    };
    Ok(ClosedForm::Value(RValue::from_signed(value)))
}

/// The `(3,3)` formula directly in the shifted coordinates
/// `a = 1 + a_1`, `b = 1 + a_2`: `4 |a^2 - b^2| (a + b - ab)^2`.
pub fn n33_value(a: i64, b: i64) -> u128 {
    let (a, b) = (a as i128, b as i128);
    let tail = a + b - a * b;
    (4 * (a * a - b * b).abs() * tail * tail) as u128
}

/// Polynomial `x^3 + (b-1) x^2 + (a-1) x + 1` for shifted coordinates.
pub fn n33_polynomial(a: i64, b: i64) -> IntPolynomial {
    IntPolynomial::from_i64(&[1, a - 1, b - 1, 1]).expect("monic")
}
