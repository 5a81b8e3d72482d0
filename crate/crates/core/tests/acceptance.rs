//! Acceptance suite: one PASS/FAIL line per criterion. Runs as a plain
//! binary (`harness = false`) so the lines are always visible.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::{assoc_bracket, expand_basis, expand_combination, match_multisets, random_matrix};
use nilfix::reidemeister::oracle::integer_polynomial_roots;
use nilfix::reidemeister::{
    c_offset, closed_form, family_even, family_odd, float_oracle, q2, q3, r3,
    rank_one_endomorphism, ClosedForm,
};
use nilfix::spectrum::{
    parity_audit, random_automorphism_polynomials, scan_box, ScanParams, ScanSource,
};
use nilfix::{
    induced_matrices, induced_matrix, witt_dimension, Engine, FreeNilpotentLie, HallBasis,
    IntPolynomial, LieCombination, MethodChoice, Mode, RValue, TieBreak,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T: std::fmt::Display>(err: T) -> String {
    err.to_string()
}

fn fin(v: i64) -> RValue {
    RValue::Finite(BigInt::from(v))
}

fn even_family() -> Outcome {
    let mut cases = 0;
    for m in 2..=6 {
        let engine = Engine::new(2 * m, 2).map_err(e)?;
        for n in 1..=50 {
            let p = family_even(m, n).map_err(e)?;
            let got = engine.polynomial_number(&p).map_err(e)?;
            ensure(got == fin(n), || format!("m={m} n={n}: got {got}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} cases (m in 2..=6, n in 1..=50), R_2(p_(2m,n)) = n"))
}

fn odd_family() -> Outcome {
    let mut cases = 0;
    for m in 2..=7 {
        let engine = Engine::new(2 * m + 1, 2).map_err(e)?;
        for n in 1..=30 {
            let k = n - c_offset(m);
            let p = family_odd(m, k).map_err(e)?;
            let got = engine.polynomial_number(&p).map_err(e)?;
            ensure(got == fin(n), || format!("m={m} n={n} (k={k}): got {got}"))?;
            cases += 1;
        }
    }
    Ok(format!(
        "{cases} cases, R_2(p_(2m+1,n-c(m))) = n for n in 1..=30"
    ))
}

fn closed_forms() -> Outcome {
    let bound = 10i64;
    let mut cases = 0;
    let mut infinite = 0;
    let mut check = |r: usize, c: usize, p: IntPolynomial, engine: &Engine| -> Result<(), String> {
        let ClosedForm::Value(want) = closed_form(r, c, &p).map_err(e)? else {
            return Err(format!("({r},{c}) {p}: closed form not applicable"));
        };
        let got = engine.polynomial_number(&p).map_err(e)?;
        ensure(got == want, || {
            format!("({r},{c}) {p}: engine {got}, formula {want}")
        })?;
        cases += 1;
        infinite += usize::from(got.is_infinite());
        Ok(())
    };
    let (e22, e23, e32, e33) = (
        Engine::new(2, 2).map_err(e)?,
        Engine::new(2, 3).map_err(e)?,
        Engine::new(3, 2).map_err(e)?,
        Engine::new(3, 3).map_err(e)?,
    );
    for a1 in -bound..=bound {
        let p = IntPolynomial::from_i64(&[-1, a1, 1]).map_err(e)?;
        check(2, 2, p.clone(), &e22)?;
        check(2, 3, p, &e23)?;
        for a2 in -bound..=bound {
            for a0 in [-1, 1] {
                check(
                    3,
                    2,
                    IntPolynomial::from_i64(&[a0, a1, a2, 1]).map_err(e)?,
                    &e32,
                )?;
            }
            check(
                3,
                3,
                IntPolynomial::from_i64(&[1, a1, a2, 1]).map_err(e)?,
                &e33,
            )?;
        }
    }
    Ok(format!(
        "{cases} polynomials with |a_i| <= {bound}, {infinite} of them infinite"
    ))
}

fn n33_enumeration() -> Outcome {
    let expected: Vec<BigInt> = [
        4, 12, 20, 32, 60, 64, 96, 108, 140, 192, 252, 300, 320, 324, 396, 480, 500, 572, 672, 700,
        756, 780, 800, 896, 980,
    ]
    .iter()
    .map(|&v: &u32| BigInt::from(v))
    .collect();
    let scan = scan_box(3, 3, 250, Some(1000), ScanSource::ClosedForm).map_err(e)?;
    ensure(scan.value_set() == expected, || {
        format!("closed-form scan gave {:?}", scan.value_set())
    })?;
    let threshold = ScanParams::new(3, 3, 250, Some(1000), ScanSource::ClosedForm)
        .completeness_threshold()
        .expect("(3,3) has a bound");
    ensure(threshold > BigInt::from(1000), || {
        format!("completeness bound {threshold} does not cover 1000")
    })?;
    let engine = scan_box(3, 3, 25, None, ScanSource::Engine).map_err(e)?;
    let formula = scan_box(3, 3, 25, None, ScanSource::ClosedForm).map_err(e)?;
    ensure(engine.value_set() == formula.value_set(), || {
        "engine and closed form disagree for B = 25".into()
    })?;
    Ok(format!(
        "25 values below 1000 from {} tuples (complete below {threshold}); engine = closed form on {} values at B = 25",
        scan.enumerated,
        engine.values.len()
    ))
}

fn witnesses() -> Outcome {
    let (e22, e23, e32) = (
        Engine::new(2, 2).map_err(e)?,
        Engine::new(2, 3).map_err(e)?,
        Engine::new(3, 2).map_err(e)?,
    );
    for n in 1..=50i64 {
        let cases = [
            (&e22, q2(n), 2 * n),
            (&e23, q2(n), 2 * n * n),
            (&e32, q3(n), 2 * n + 1),
            (&e32, r3(n), 4 * n),
        ];
        for (engine, p, want) in cases {
            let got = engine.polynomial_number(&p).map_err(e)?;
            ensure(got == fin(want), || {
                format!("c={} {p}: got {got}, want {want}", engine.class())
            })?;
        }
    }
    Ok("q_n, r_n for n in 1..=50 (200 cases)".into())
}

fn endomorphisms() -> Outcome {
    let mut cases = 0;
    for r in 2..=4 {
        for c in 1..=4 {
            let engine = Engine::new(r, c).map_err(e)?;
            for n in 2..=20 {
                let a = rank_one_endomorphism(r, n);
                let got = engine.number(&a, Mode::Endomorphism).map_err(e)?;
                ensure(got == fin(n - 1), || {
                    format!("r={r} c={c} n={n}: got {got}")
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases, R = n - 1"))
}

fn method_triangle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut compared, mut worst) = (0, 0.0f64);
    for case in 0..200 {
        let r = rng.gen_range(2..=4);
        let c = rng.gen_range(1..=4);
        let a = random_matrix(&mut rng, r, -5, 5);
        let engine = Engine::new(r, c).map_err(e)?;
        let s = engine.layer_dets(&a, MethodChoice::Structural).map_err(e)?;
        let t = engine.layer_dets(&a, MethodChoice::Trace).map_err(e)?;
        ensure(s.dets == t.dets, || {
            format!(
                "case {case}: structural {:?} vs trace {:?}\n{a}",
                s.dets, t.dets
            )
        })?;
        let RValue::Finite(exact) = RValue::from_factors(&s.dets) else {
            continue;
        };
        let Some(exact) = exact.to_f64().filter(|v| *v <= 1e9) else {
            continue;
        };
        let p = IntPolynomial::new(a.characteristic_polynomial()).map_err(e)?;
        let approx = float_oracle(&p, c).map_err(e)?;
        let rel = (approx - exact).abs() / exact;
        ensure(rel <= 1e-6, || {
            format!("case {case}: exact {exact}, oracle {approx:e}, rel {rel:e}\n{a}")
        })?;
        worst = worst.max(rel);
        compared += 1;
    }
    Ok(format!(
        "200 matrices exact-equal; float oracle on {compared} finite values, worst rel {worst:.1e}"
    ))
}

fn spectral_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0f64;
    let mut layers = 0;
    for case in 0..50 {
        let r = rng.gen_range(2..=4);
        let top = if r <= 3 { 3 } else { 2 };
        let a = random_matrix(&mut rng, r, -5, 5);
        let alg = FreeNilpotentLie::new(HallBasis::new(r, top).map_err(e)?);
        let lambda = integer_polynomial_roots(&a.characteristic_polynomial()).map_err(e)?;
        let ms = induced_matrices(&alg, &a).map_err(e)?;
        for i in 2..=top {
            let basis = alg.basis();
            let expected: Vec<Complex64> = basis
                .layer_range(i)
                .map(|idx| basis.monomial(idx, &lambda))
                .collect();
            let actual =
                integer_polynomial_roots(&ms[i - 1].characteristic_polynomial()).map_err(e)?;
            let w = match_multisets(&expected, &actual, 1e-8)
                .map_err(|m| format!("case {case} layer {i}: {m}\n{a}"))?;
            worst = worst.max(w);
            layers += 1;
        }
    }
    Ok(format!(
        "50 matrices, {layers} layers matched, worst deviation {worst:.1e}"
    ))
}

fn structure_suite() -> Outcome {
    for r in 2..=5usize {
        let basis = HallBasis::new(r, 6).map_err(e)?;
        for i in 1..=6 {
            let w = witt_dimension(r as u64, i as u32).map_err(e)?;
            ensure(basis.layer(i).len() as u64 == w, || format!("r={r} i={i}"))?;
        }
    }

    let alg = FreeNilpotentLie::new(HallBasis::new(3, 5).map_err(e)?);
    let basis = alg.basis();
    let n = basis.len();
    let deg = |i: usize| basis.element(i).degree;
    let expanded = expand_basis(basis);
    let mut pairs = 0;
    for u in 0..n {
        for v in 0..n {
            if deg(u) + deg(v) > 5 {
                continue;
            }
            let uv = alg.hall_bracket(u, v).map_err(e)?;
            let vu = alg.hall_bracket(v, u).map_err(e)?;
            ensure((uv.clone() + vu).is_zero(), || {
                format!("antisymmetry ({u},{v})")
            })?;
            ensure(
                expand_combination(&expanded, &uv) == assoc_bracket(&expanded[u], &expanded[v]),
                || {
                    format!(
                        "associative expansion of [{}, {}]",
                        basis.label(u),
                        basis.label(v)
                    )
                },
            )?;
            pairs += 1;
        }
    }
    let mut triples = 0;
    for u in 0..n {
        for v in 0..n {
            for w in 0..n {
                if deg(u) + deg(v) + deg(w) > 5 {
                    continue;
                }
                let term = |x: usize, y: usize, z: usize| -> Result<LieCombination, String> {
                    let yz = alg.hall_bracket(y, z).map_err(e)?;
                    alg.bracket_combinations(&LieCombination::element(basis, x), &yz)
                        .map_err(e)
                };
                let sum = term(u, v, w)? + term(v, w, u)? + term(w, u, v)?;
                ensure(sum.is_zero(), || format!("Jacobi ({u},{v},{w})"))?;
                triples += 1;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let r = rng.gen_range(2..=3);
        let c = 4;
        let alg = FreeNilpotentLie::new(HallBasis::new(r, c).map_err(e)?);
        let a = random_matrix(&mut rng, r, -3, 3);
        let b = random_matrix(&mut rng, r, -3, 3);
        let ab = &a * &b;
        for i in 1..=c {
            let lhs = induced_matrix(&alg, &ab, i).map_err(e)?;
            let rhs = &induced_matrix(&alg, &a, i).map_err(e)?
                * &induced_matrix(&alg, &b, i).map_err(e)?;
            ensure(lhs == rhs, || format!("functoriality layer {i}\n{a}\n{b}"))?;
        }
        let lex = Engine::with_tie_break(r, c, TieBreak::Lexicographic).map_err(e)?;
        let rev = Engine::with_tie_break(r, c, TieBreak::ReverseLexicographic).map_err(e)?;
        let d1 = lex.layer_dets(&a, MethodChoice::Structural).map_err(e)?;
        let d2 = rev.layer_dets(&a, MethodChoice::Structural).map_err(e)?;
        ensure(d1.dets == d2.dets, || format!("order invariance\n{a}"))?;
    }
    Ok(format!(
        "Witt r<=5 i<=6; {pairs} pairs antisymmetric, {triples} Jacobi triples in g_(3,5); 30 functoriality and order-invariance pairs"
    ))
}

fn audits() -> Outcome {
    let mut lines = Vec::new();
    let runs: [(usize, usize, usize, i64, Option<i64>); 4] = [
        (2, 2, 500, 20, None),
        (3, 3, 500, 20, Some(1)),
        (2, 3, 500, 20, None),
        (4, 4, 500, 20, None),
    ];
    for (seed, (r, c, count, bound, a0)) in runs.into_iter().enumerate() {
        let samples = random_automorphism_polynomials(r, count, bound, a0, 1000 + seed as u64);
        let report = parity_audit(r, c, &samples).map_err(e)?;
        ensure(report.passed(), || {
            let v = &report.violations[0];
            format!("({r},{c}): {} gave {} ({})", v.poly, v.value, v.rule)
        })?;
        ensure(report.finite > 0, || {
            format!("({r},{c}): no finite samples")
        })?;
        lines.push(format!("({r},{c}) {count}: {} finite", report.finite));
    }
    let samples = random_automorphism_polynomials(2, 100, 20, None, 77);
    let report = parity_audit(2, 4, &samples).map_err(e)?;
    ensure(report.passed() && report.infinite == 100, || {
        format!("(2,4): {} of 100 infinite", report.infinite)
    })?;
    lines.push("(2,4) 100/100 infinite".into());
    Ok(lines.join("; "))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("even family theorem", even_family),
        ("odd family theorem", odd_family),
        ("low-rank closed forms", closed_forms),
        ("N_(3,3) enumeration below 1000", n33_enumeration),
        ("spectrum witnesses", witnesses),
        ("rank-one endomorphisms", endomorphisms),
        ("method triangle", method_triangle),
        ("spectral check", spectral_check),
        ("structure suite", structure_suite),
        ("divisibility audits", audits),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|p| Err(format!("panicked: {:?}", p.downcast_ref::<String>())));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  [{:>2}] {name}: {detail} ({secs:.2}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  [{:>2}] {name}: {why} ({secs:.2}s)", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
