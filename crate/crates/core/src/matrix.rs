//! Dense matrices over arbitrary-precision integers.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Panics on ragged input; meant for literals in code and tests.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let big = rows
            .iter()
            .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_big_rows(big).expect("rows must have equal length")
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::DimensionMismatch {
                    expected: format!("{n_cols} entries in row {}", i + 1),
                    found: format!("{}", row.len()),
                });
            }
            entries.extend(row);
        }
        Ok(IntegerMatrix {
            rows: n_rows,
            cols: n_cols,
            entries,
        })
    }

    /// Parses the matrix file format: a first line holding `r`, then `r`
    /// lines of `r` whitespace-separated integers. Blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let r: usize = header
            .parse()
            .map_err(|_| Error::Parse(format!("bad dimension line {header:?}")))?;
        if r == 0 {
            return Err(Error::Parse("matrix dimension must be positive".into()));
        }
        let mut rows = Vec::with_capacity(r);
        for (i, line) in lines.enumerate() {
            if i >= r {
                return Err(Error::Parse(format!("more than {r} rows")));
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<BigInt>()
                        .map_err(|_| Error::Parse(format!("bad integer {tok:?} in row {}", i + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != r {
                return Err(Error::Parse(format!(
                    "row {} has {} entries, expected {r}",
                    i + 1,
                    row.len()
                )));
            }
            rows.push(row);
        }
        if rows.len() != r {
            return Err(Error::Parse(format!(
                "expected {r} rows, found {}",
                rows.len()
            )));
        }
        Self::from_big_rows(rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// `1 - self`.
    pub fn one_minus(&self) -> IntegerMatrix {
        assert!(self.is_square());
        let mut out = self.clone();
        for v in out.entries.iter_mut() {
            *v = -std::mem::take(v);
        }
        for i in 0..self.rows {
            out.entries[i * self.cols + i] += 1;
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> IntegerMatrix {
        assert!(self.is_square());
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact determinant by fraction-free (Bareiss) elimination. Pivots are
    /// found by searching down the current column; a column with no nonzero
    /// pivot candidate means the determinant is zero.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        negate = !negate;
                    }
                    None => return BigInt::zero(),
                }
            }
            let (top, bottom) = a.split_at_mut(k + 1);
            let pivot_row = &top[k];
            let pivot = &pivot_row[k];
            for row in bottom.iter_mut() {
                let factor = row[k].clone();
                for j in k + 1..n {
                    let num = &row[j] * pivot - &factor * &pivot_row[j];
                    let (q, rem) = num.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                    row[j] = q;
                }
                row[k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        if negate {
            -det
        } else {
            det
        }
    }

    /// Monic characteristic polynomial `det(x - M)`, low degree first, from
    /// exact traces of powers and Newton's identities.
    pub fn characteristic_polynomial(&self) -> Vec<BigInt> {
        assert!(self.is_square());
        let n = self.rows;
        let mut power_sums = Vec::with_capacity(n);
        let mut power = Self::identity(n);
        for _ in 0..n {
            power = &power * self;
            power_sums.push(power.trace());
        }
        poly::charpoly_from_power_sums(&power_sums)
            .expect("traces of an integer matrix give an integral characteristic polynomial")
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        use num_traits::ToPrimitive;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|v| v.to_f64().unwrap_or(f64::NAN))
                    .collect()
            })
            .collect()
    }
}

impl Mul for &IntegerMatrix {
    type Output = IntegerMatrix;

    fn mul(self, rhs: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = IntegerMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}
