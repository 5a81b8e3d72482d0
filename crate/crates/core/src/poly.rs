//! Monic integer polynomials and Newton's identities.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;

/// Monic polynomial `x^r + a_{r-1} x^{r-1} + ... + a_0` with integer
/// coefficients, stored low degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::domain("polynomial degree must be at least 1"));
        }
        if !coeffs.last().is_some_and(One::is_one) {
            return Err(Error::NotMonic);
        }
        Ok(IntPolynomial { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Parses `"a0,a1,...,a_{r-1},1"`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let coeffs = text
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad coefficient {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }

    pub fn constant_term(&self) -> &BigInt {
        &self.coeffs[0]
    }

    /// Constant term is a unit, as the characteristic polynomial of an
    /// automorphism of `Z^r` must be.
    pub fn is_unimodular(&self) -> bool {
        self.coeffs[0].abs().is_one()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, a| acc * x + a)
    }

    /// Companion matrix: ones on the subdiagonal, last column
    /// `(-a_0, ..., -a_{r-1})`.
    pub fn companion(&self) -> IntegerMatrix {
        let r = self.degree();
        let mut m = IntegerMatrix::zeros(r, r);
        for i in 1..r {
            m.set(i, i - 1, BigInt::one());
        }
        for i in 0..r {
            m.set(i, r - 1, -&self.coeffs[i]);
        }
        m
    }

    /// Comma-separated form accepted by [`Self::parse`].
    pub fn to_csv(&self) -> String {
        self.coeffs
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let magnitude = a.abs();
            if first {
                if a.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if a.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            if k == 0 || !magnitude.is_one() {
                write!(f, "{magnitude}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Elementary symmetric functions `e_0..e_n` from power sums `p_1..p_n`:
/// `k e_k = Σ_{i=1..k} (-1)^{i-1} e_{k-i} p_i`.
pub fn elementary_from_power_sums(power_sums: &[BigInt]) -> Vec<BigRational> {
    let mut e: Vec<BigRational> = Vec::with_capacity(power_sums.len() + 1);
    e.push(BigRational::one());
    for k in 1..=power_sums.len() {
        let mut acc = BigRational::zero();
        for i in 1..=k {
            let term = &e[k - i] * BigRational::from_integer(power_sums[i - 1].clone());
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / BigRational::from_integer(BigInt::from(k)));
    }
    e
}

/// Monic characteristic polynomial (low degree first) whose roots have the
/// given power sums. `None` when the coefficients are not integral.
pub fn charpoly_from_power_sums(power_sums: &[BigInt]) -> Option<Vec<BigInt>> {
    let e = elementary_from_power_sums(power_sums);
    let n = power_sums.len();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for (k, ek) in e.iter().enumerate() {
        if !ek.is_integer() {
            return None;
        }
        let v = ek.to_integer();
        coeffs[n - k] = if k % 2 == 0 { v } else { -v };
    }
    Some(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn parse_examples() {
        let p = IntPolynomial::parse("-1,3,1").unwrap();
        assert_eq!(p.coeffs(), big(&[-1, 3, 1]).as_slice());
        assert_eq!(p.degree(), 2);
        let q = IntPolynomial::parse("1, 2, 3, 1").unwrap();
        assert_eq!(q.to_string(), "x^3 + 3x^2 + 2x + 1");
        let x = IntPolynomial::parse("0,1").unwrap();
        assert_eq!(x.degree(), 1);
        assert!(!x.is_unimodular());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(IntPolynomial::parse(""), Err(Error::Parse(_))));
        assert!(matches!(
            IntPolynomial::parse("1,2,3"),
            Err(Error::NotMonic)
        ));
        assert!(matches!(
            IntPolynomial::parse("1,a,1"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(IntPolynomial::parse("1"), Err(Error::Domain(_))));
    }

    #[test]
    fn companion_examples() {
        let p = IntPolynomial::from_i64(&[-1, 5, 1]).unwrap();
        assert_eq!(
            p.companion(),
            IntegerMatrix::from_rows(&[vec![0, 1], vec![1, -5]])
        );
        let lin = IntPolynomial::from_i64(&[-1, 1]).unwrap();
        assert_eq!(lin.companion(), IntegerMatrix::from_rows(&[vec![1]]));
        let cubic = IntPolynomial::from_i64(&[1, 2, 3, 1]).unwrap();
        assert_eq!(
            cubic.companion(),
            IntegerMatrix::from_rows(&[vec![0, 0, -1], vec![1, 0, -2], vec![0, 1, -3]])
        );
    }

    #[test]
    fn display() {
        let p = IntPolynomial::from_i64(&[1, 0, 2, -1, 1]).unwrap();
        assert_eq!(p.to_string(), "x^4 - x^3 + 2x^2 + 1");
        let q = IntPolynomial::from_i64(&[-1, -1, 0, 0, 2, 1]).unwrap();
        assert_eq!(q.to_string(), "x^5 + 2x^4 - x - 1");
    }

    #[test]
    fn eval_and_newton() {
        let p = IntPolynomial::from_i64(&[1, 2, 3, 1]).unwrap();
        assert_eq!(p.eval(&BigInt::from(1)), BigInt::from(7));
        // roots 2, 3: p1 = 5, p2 = 13 -> x^2 - 5x + 6
        assert_eq!(
            charpoly_from_power_sums(&big(&[5, 13])).unwrap(),
            big(&[6, -5, 1])
        );
        assert!(charpoly_from_power_sums(&big(&[1, 0])).is_none());
    }
}
