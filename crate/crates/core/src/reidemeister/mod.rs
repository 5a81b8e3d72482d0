//! Reidemeister (= Nielsen, when finite) numbers of endomorphisms of free
//! nilpotent groups, computed from the abelianized integer matrix.
//!
//! `R(φ) = Π_i |det(1 - M_i)|`, and `R(φ) = ∞` exactly when some factor
//! vanishes.

pub mod closed_form;
pub mod families;
pub mod oracle;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hall::{HallBasis, TieBreak};
use crate::induced::{layer_dets_structural, layer_dets_trace, LayerDeterminants};
use crate::lie::FreeNilpotentLie;
use crate::matrix::IntegerMatrix;
use crate::poly::IntPolynomial;

pub use closed_form::{closed_form, ClosedForm};
pub use families::{c_offset, family_even, family_odd, q2, q3, r3};
pub use oracle::float_oracle;

/// A Reidemeister number: a positive integer or infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RValue {
    Finite(BigInt),
    Infinite,
}

impl RValue {
    pub fn is_infinite(&self) -> bool {
        matches!(self, RValue::Infinite)
    }

    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            RValue::Finite(v) => Some(v),
            RValue::Infinite => None,
        }
    }

    /// Product of absolute values, infinite if any factor is zero.
    pub fn from_factors<'a>(factors: impl IntoIterator<Item = &'a BigInt>) -> RValue {
        let mut acc = BigInt::one();
        for f in factors {
            if f.is_zero() {
                return RValue::Infinite;
            }
            acc *= f.abs();
        }
        RValue::Finite(acc)
    }

    /// Zero means infinity, anything else its absolute value.
    pub fn from_signed(v: BigInt) -> RValue {
        if v.is_zero() {
            RValue::Infinite
        } else {
            RValue::Finite(v.abs())
        }
    }

    pub fn from_u64(v: u64) -> RValue {
        RValue::Finite(BigInt::from(v))
    }
}

impl fmt::Display for RValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RValue::Finite(v) => write!(f, "{v}"),
            RValue::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Requires `|det A| = 1`.
    #[default]
    Automorphism,
    Endomorphism,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Automorphism => "auto",
            Mode::Endomorphism => "endo",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" | "automorphism" => Ok(Mode::Automorphism),
            "endo" | "endomorphism" => Ok(Mode::Endomorphism),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

/// Which exact route produces the layer determinants.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MethodChoice {
    #[default]
    Structural,
    Trace,
    /// Run both and fail on any disagreement.
    Both,
}

impl fmt::Display for MethodChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MethodChoice::Structural => "structural",
            MethodChoice::Trace => "trace",
            MethodChoice::Both => "both",
        })
    }
}

impl FromStr for MethodChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "structural" => Ok(MethodChoice::Structural),
            "trace" => Ok(MethodChoice::Trace),
            "both" => Ok(MethodChoice::Both),
            _ => Err(Error::Parse(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputDescriptor {
    Polynomial(IntPolynomial),
    Matrix(IntegerMatrix),
}

impl InputDescriptor {
    fn to_json(&self) -> Value {
        match self {
            InputDescriptor::Polynomial(p) => json!({
                "kind": "polynomial",
                "coeffs": p.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>(),
                "text": p.to_string(),
            }),
            InputDescriptor::Matrix(m) => json!({
                "kind": "matrix",
                "rows": (0..m.rows())
                    .map(|i| m.row(i).iter().map(ToString::to_string).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReidemeisterReport {
    pub input: InputDescriptor,
    pub c: usize,
    pub layer_dets: LayerDeterminants,
    pub value: RValue,
    pub mode: Mode,
    pub method: MethodChoice,
    pub oracle_value: Option<f64>,
}

impl ReidemeisterReport {
    pub fn r(&self) -> usize {
        self.layer_dets.r
    }

    /// Stable JSON report; `serde_json` maps keep keys sorted.
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "input": self.input.to_json(),
            "r": self.r(),
            "c": self.c,
            "layer_dims": self.layer_dets.dims,
            "layer_dets": self.layer_dets.dets.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "value": self.value.to_string(),
            "method": self.method.to_string(),
            "mode": self.mode.to_string(),
        });
        if let Some(o) = self.oracle_value {
            v["oracle_value"] = json!(format!("{o:.9e}"));
        }
        v
    }
}

/// Cached Lie algebra for one `(r, c)`, reusable across many inputs and
/// shareable between threads.
#[derive(Debug)]
pub struct Engine {
    alg: FreeNilpotentLie,
}

impl Engine {
    /// Accepts `r >= 1`; rank one is the abelian case with a single layer.
    pub fn new(r: usize, c: usize) -> Result<Self> {
        Self::with_tie_break(r, c, TieBreak::Lexicographic)
    }

    pub fn with_tie_break(r: usize, c: usize, tie_break: TieBreak) -> Result<Self> {
        if r < 1 || c < 1 {
            return Err(Error::domain(format!(
                "need r >= 1 and c >= 1, got ({r}, {c})"
            )));
        }
        Ok(Engine {
            alg: FreeNilpotentLie::new(HallBasis::build(r, c, tie_break)),
        })
    }

    pub fn algebra(&self) -> &FreeNilpotentLie {
        &self.alg
    }

    pub fn basis(&self) -> &HallBasis {
        self.alg.basis()
    }

    pub fn rank(&self) -> usize {
        self.alg.rank()
    }

    pub fn class(&self) -> usize {
        self.alg.class()
    }

    pub fn layer_dets(&self, a: &IntegerMatrix, method: MethodChoice) -> Result<LayerDeterminants> {
        match method {
            MethodChoice::Structural => layer_dets_structural(&self.alg, a),
            MethodChoice::Trace => layer_dets_trace(self.basis(), a),
            MethodChoice::Both => {
                let s = layer_dets_structural(&self.alg, a)?;
                let t = layer_dets_trace(self.basis(), a)?;
                if let Some(i) = (0..s.dets.len()).find(|&i| s.dets[i] != t.dets[i]) {
                    return Err(Error::MethodDisagreement {
                        layer: i + 1,
                        structural: s.dets[i].to_string(),
                        trace: t.dets[i].to_string(),
                    });
                }
                Ok(s)
            }
        }
    }

    pub fn report(
        &self,
        input: InputDescriptor,
        a: &IntegerMatrix,
        mode: Mode,
        method: MethodChoice,
    ) -> Result<ReidemeisterReport> {
        if mode == Mode::Automorphism {
            check_automorphism(a)?;
        }
        let layer_dets = self.layer_dets(a, method)?;
        let value = RValue::from_factors(&layer_dets.dets);
        Ok(ReidemeisterReport {
            input,
            c: self.class(),
            layer_dets,
            value,
            mode,
            method,
            oracle_value: None,
        })
    }

    pub fn number(&self, a: &IntegerMatrix, mode: Mode) -> Result<RValue> {
        if mode == Mode::Automorphism {
            check_automorphism(a)?;
        }
        let dets = layer_dets_structural(&self.alg, a)?;
        Ok(RValue::from_factors(&dets.dets))
    }

    /// `R_c(p)`: the number of any automorphism whose abelianization has
    /// characteristic polynomial `p`, realized by the companion matrix.
    pub fn polynomial_number(&self, p: &IntPolynomial) -> Result<RValue> {
        self.number(&p.companion(), Mode::Endomorphism)
    }
}

fn check_automorphism(a: &IntegerMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", a.rows(), a.cols()),
        });
    }
    let det = a.determinant();
    if !det.abs().is_one() {
        return Err(Error::NotAutomorphism(det.to_string()));
    }
    Ok(())
}

/// One-shot computation; builds a fresh [`Engine`].
pub fn reidemeister_number(a: &IntegerMatrix, c: usize, mode: Mode) -> Result<ReidemeisterReport> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", a.rows(), a.cols()),
        });
    }
    let engine = Engine::new(a.rows(), c)?;
    engine.report(
        InputDescriptor::Matrix(a.clone()),
        a,
        mode,
        MethodChoice::Structural,
    )
}

/// `R_c(p)` for a monic integer polynomial.
pub fn polynomial_reidemeister(p: &IntPolynomial, c: usize) -> Result<RValue> {
    Engine::new(p.degree(), c)?.polynomial_number(p)
}

/// Matrix with a single nonzero entry `n` in the last diagonal slot: the
/// abelianization of `(m, z) ↦ (1, n z)` on `M ⋊ Z`.
pub fn rank_one_endomorphism(r: usize, n: i64) -> IntegerMatrix {
    let mut a = IntegerMatrix::zeros(r, r);
    a.set(r - 1, r - 1, BigInt::from(n));
    a
}
