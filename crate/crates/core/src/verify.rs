//! Built-in cross-check suite behind `nilfix verify`: family predictions,
//! closed forms against the engine, structural against trace determinants,
//! and the floating-point oracle against exact values.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::Result;
use crate::poly::IntPolynomial;
use crate::reidemeister::{
    c_offset, closed_form, family_even, family_odd, float_oracle, q2, q3, r3, ClosedForm, Engine,
    MethodChoice, RValue,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub cases: usize,
    /// Human-readable descriptions of failing cases.
    pub failures: Vec<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Check {
    outcome: CheckOutcome,
}

impl Check {
    fn new(name: &str) -> Self {
        Check {
            outcome: CheckOutcome {
                name: name.to_string(),
                cases: 0,
                failures: Vec::new(),
            },
        }
    }

    fn expect(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.outcome.cases += 1;
        if !ok {
            self.outcome.failures.push(describe());
        }
    }
}

fn finite(v: i64) -> RValue {
    RValue::Finite(BigInt::from(v))
}

fn families() -> Result<Vec<CheckOutcome>> {
    let e2 = |r: usize| Engine::new(r, 2);

    let mut even = Check::new("even family: R_2 = n");
    for m in 2..=4 {
        let engine = e2(2 * m)?;
        for n in 1..=8 {
            let p = family_even(m, n)?;
            let got = engine.polynomial_number(&p)?;
            even.expect(got == finite(n), || format!("m={m} n={n}: {p} gave {got}"));
        }
    }

    let mut odd = Check::new("odd family: R_2 = n + c(m)");
    for m in 2..=4 {
        let engine = e2(2 * m + 1)?;
        for n in 1..=6 {
            let p = family_odd(m, n)?;
            let got = engine.polynomial_number(&p)?;
            let want = finite(n + c_offset(m));
            odd.expect(got == want, || {
                format!("m={m} n={n}: {p} gave {got}, want {want}")
            });
        }
    }

    let mut low = Check::new("low-rank witnesses: q2, q3, r3");
    let (e22, e23, e32) = (Engine::new(2, 2)?, Engine::new(2, 3)?, Engine::new(3, 2)?);
    for n in 1..=10 {
        let cases = [
            (&e22, q2(n), 2 * n),
            (&e23, q2(n), 2 * n * n),
            (&e32, q3(n), 2 * n + 1),
            (&e32, r3(n), 4 * n),
        ];
        for (engine, p, want) in cases {
            let got = engine.polynomial_number(&p)?;
            low.expect(got == finite(want), || {
                format!("c={} {p}: gave {got}, want {want}", engine.class())
            });
        }
    }
    Ok(vec![even.outcome, odd.outcome, low.outcome])
}

fn boxed(r: usize, bound: i64) -> Vec<IntPolynomial> {
    let width = (2 * bound + 1) as usize;
    let mut out = Vec::new();
    for a0 in [-1i64, 1] {
        for t in 0..width.pow((r - 1) as u32) {
            let mut coeffs = vec![a0];
            let mut rest = t;
            for _ in 1..r {
                coeffs.push((rest % width) as i64 - bound);
                rest /= width;
            }
            coeffs.push(1);
            out.push(IntPolynomial::from_i64(&coeffs).expect("monic"));
        }
    }
    out
}

fn closed_forms() -> Result<CheckOutcome> {
    let mut check = Check::new("closed forms agree with the engine");
    for (r, c) in [(2, 2), (3, 2), (2, 3), (3, 3)] {
        let engine = Engine::new(r, c)?;
        for p in boxed(r, 3) {
            let ClosedForm::Value(want) = closed_form(r, c, &p)? else {
                continue;
            };
            let got = engine.polynomial_number(&p)?;
            check.expect(got == want, || {
                format!("({r},{c}) {p}: engine {got}, formula {want}")
            });
        }
    }
    Ok(check.outcome)
}

fn methods() -> Result<CheckOutcome> {
    let mut check = Check::new("structural and trace determinants agree");
    for (r, c) in [(2, 4), (3, 3)] {
        let engine = Engine::new(r, c)?;
        for p in boxed(r, 2) {
            let a = p.companion();
            let s = engine.layer_dets(&a, MethodChoice::Structural)?;
            let t = engine.layer_dets(&a, MethodChoice::Trace)?;
            check.expect(s.dets == t.dets, || {
                format!("({r},{c}) {p}: {:?} vs {:?}", s.dets, t.dets)
            });
        }
    }
    Ok(check.outcome)
}

fn oracle() -> Result<CheckOutcome> {
    let mut check = Check::new("float oracle agrees with exact values");
    for (r, c) in [(2, 3), (3, 2), (3, 3), (4, 2)] {
        let engine = Engine::new(r, c)?;
        for p in boxed(r, 2) {
            let RValue::Finite(exact) = engine.polynomial_number(&p)? else {
                continue;
            };
            let Some(exact) = exact.to_f64().filter(|v| *v <= 1e9) else {
                continue;
            };
            let approx = float_oracle(&p, c)?;
            let rel = (approx - exact).abs() / exact;
            check.expect(rel <= 1e-6, || {
                format!("({r},{c}) {p}: exact {exact}, oracle {approx:e}")
            });
        }
    }
    Ok(check.outcome)
}

/// Runs every check. An `Err` means a check could not run at all.
pub fn run_all() -> Result<Vec<CheckOutcome>> {
    let mut out = families()?;
    out.push(closed_forms()?);
    out.push(methods()?);
    out.push(oracle()?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        for outcome in run_all().unwrap() {
            assert!(outcome.passed(), "{}: {:?}", outcome.name, outcome.failures);
            assert!(outcome.cases > 0, "{} ran no cases", outcome.name);
        }
    }
}
