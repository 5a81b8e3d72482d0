//! Reidemeister spectrum enumeration over boxes of characteristic
//! polynomials, membership tests for the characterized low-rank spectra, and
//! parity audits.
//!
//! A scan walks a fixed enumeration of coefficient tuples split into chunks.
//! Chunks are evaluated concurrently and merged in chunk order, so the result
//! does not depend on the worker count. With a checkpoint file every finished
//! chunk is appended as one record and an interrupted scan resumes from it.

mod checkpoint;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::reidemeister::closed_form::{closed_form, ClosedForm};
use crate::reidemeister::families::{q2, q3, r3};
use crate::reidemeister::{Engine, RValue};

pub use checkpoint::{persist_scan, resume_scan, CheckpointWriter};

pub const DEFAULT_CHUNK_SIZE: u64 = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScanSource {
    Engine,
    ClosedForm,
}

impl fmt::Display for ScanSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScanSource::Engine => "engine",
            ScanSource::ClosedForm => "closed-form",
        })
    }
}

impl FromStr for ScanSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "engine" => Ok(ScanSource::Engine),
            "closed-form" | "closed_form" => Ok(ScanSource::ClosedForm),
            _ => Err(Error::Parse(format!("unknown scan source {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanParams {
    pub r: usize,
    pub c: usize,
    pub bound: i64,
    pub max_value: Option<BigInt>,
    pub source: ScanSource,
    pub chunk_size: u64,
}

impl ScanParams {
    pub fn new(r: usize, c: usize, bound: i64, max_value: Option<u64>, source: ScanSource) -> Self {
        ScanParams {
            r,
            c,
            bound,
            max_value: max_value.map(BigInt::from),
            source,
            chunk_size: DEFAULT_CHUNK_SIZE,
        }
    }

    pub fn with_chunk_size(mut self, chunk_size: u64) -> Self {
        self.chunk_size = chunk_size;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.r < 2 || self.c < 1 || self.bound < 1 {
            return Err(Error::domain(format!(
                "scan needs r >= 2, c >= 1, bound >= 1; got r={}, c={}, bound={}",
                self.r, self.c, self.bound
            )));
        }
        if self.chunk_size == 0 {
            return Err(Error::domain("chunk size must be positive"));
        }
        if self.source == ScanSource::ClosedForm
            && !matches!((self.r, self.c), (2, 2) | (3, 2) | (2, 3) | (3, 3))
        {
            return Err(Error::domain(format!(
                "no closed form for (r, c) = ({}, {})",
                self.r, self.c
            )));
        }
        self.total_tuples()?;
        Ok(())
    }

    /// `(3,3)` is scanned in the shifted coordinates `a = 1 + a_1`,
    /// `b = 1 + a_2` with `a_0 = 1`; `a_0 = -1` makes the degree-3 layer
    /// singular there, so nothing finite is lost.
    fn uses_ab_box(&self) -> bool {
        (self.r, self.c) == (3, 3)
    }

    /// Admissible constant terms. Closed forms for `r = 2` only cover
    /// `a_0 = -1`; with `a_0 = 1` the degree-2 factor `1 - a_0` vanishes.
    fn constant_terms(&self) -> &'static [i64] {
        if self.source == ScanSource::ClosedForm && self.r == 2 {
            &[-1]
        } else {
            &[-1, 1]
        }
    }

    fn width(&self) -> u64 {
        2 * self.bound as u64 + 1
    }

    pub fn total_tuples(&self) -> Result<u64> {
        let overflow = || Error::domain("coefficient box too large to enumerate");
        let w = self.width();
        if self.uses_ab_box() {
            return w.checked_mul(w).ok_or_else(overflow);
        }
        let free = u32::try_from(self.r - 1).map_err(|_| overflow())?;
        w.checked_pow(free)
            .and_then(|n| n.checked_mul(self.constant_terms().len() as u64))
            .ok_or_else(overflow)
    }

    pub fn chunk_count(&self) -> Result<u64> {
        Ok(self.total_tuples()?.div_ceil(self.chunk_size))
    }

    /// Polynomial at position `t` of the enumeration.
    pub fn tuple(&self, t: u64) -> IntPolynomial {
        let w = self.width();
        let b = self.bound;
        if self.uses_ab_box() {
            let a = (t / w) as i64 - b;
            let bb = (t % w) as i64 - b;
            return IntPolynomial::from_i64(&[1, a - 1, bb - 1, 1]).expect("monic");
        }
        let per_a0 = w.pow((self.r - 1) as u32);
        let a0 = self.constant_terms()[(t / per_a0) as usize];
        let mut rest = t % per_a0;
        let mut coeffs = Vec::with_capacity(self.r + 1);
        coeffs.push(a0);
        for _ in 1..self.r {
            coeffs.push((rest % w) as i64 - b);
            rest /= w;
        }
        coeffs.push(1);
        IntPolynomial::from_i64(&coeffs).expect("monic")
    }

    /// Every finite value strictly below this threshold is attained inside
    /// the box whenever it is attained at all, when such a bound is known.
    pub fn completeness_threshold(&self) -> Option<BigInt> {
        let b1 = BigInt::from(self.bound + 1);
        match (self.r, self.c) {
            // R = 2|a_1|
            (2, 2) => Some(BigInt::from(2) * b1),
            // R = 2 a_1^2
            (2, 3) => Some(BigInt::from(2) * &b1 * &b1),
            // a != ±b gives R >= 4(|a| + |b|); a = ±b gives infinity
            (3, 3) => Some(BigInt::from(4) * b1),
            _ => None,
        }
    }
}

/// First tuple (in enumeration order) producing a value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub tuple: u64,
    pub poly: IntPolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumScan {
    pub params: ScanParams,
    pub values: BTreeMap<BigInt, Witness>,
    /// Number of enumerated coefficient tuples so far.
    pub enumerated: u64,
    pub infinite: u64,
    pub completed_chunks: BTreeSet<u64>,
}

impl SpectrumScan {
    pub fn empty(params: ScanParams) -> Self {
        SpectrumScan {
            params,
            values: BTreeMap::new(),
            enumerated: 0,
            infinite: 0,
            completed_chunks: BTreeSet::new(),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.params
            .chunk_count()
            .is_ok_and(|n| self.completed_chunks.len() as u64 == n)
    }

    pub fn value_set(&self) -> Vec<BigInt> {
        self.values.keys().cloned().collect()
    }

    fn merge(&mut self, chunk: ChunkResult) {
        if !self.completed_chunks.insert(chunk.index) {
            return;
        }
        self.enumerated += chunk.tuples;
        self.infinite += chunk.infinite;
        for (value, witness) in chunk.found {
            merge_witness(&mut self.values, value, witness);
        }
    }

    /// CSV rows `value,witness_a0,...,witness_ar`.
    pub fn to_csv(&self) -> String {
        let width = self.params.r + 1;
        let mut out = String::from("value");
        for k in 0..width {
            out.push_str(&format!(",witness_a{k}"));
        }
        out.push('\n');
        for (value, w) in &self.values {
            out.push_str(&value.to_string());
            for a in w.poly.coeffs() {
                out.push(',');
                out.push_str(&a.to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let p = &self.params;
        serde_json::json!({
            "r": p.r,
            "c": p.c,
            "bound": p.bound,
            "max_value": p.max_value.as_ref().map(ToString::to_string),
            "source": p.source.to_string(),
            "values": self.values.keys().map(ToString::to_string).collect::<Vec<_>>(),
            "witnesses": self.values.values().map(|w| w.poly.to_csv()).collect::<Vec<_>>(),
            "enumerated": self.enumerated,
            "total": p.total_tuples().unwrap_or(0),
            "infinite": self.infinite,
            "complete": self.is_complete(),
            "completeness_threshold": p.completeness_threshold().map(|t| t.to_string()),
        })
    }
}

fn merge_witness(values: &mut BTreeMap<BigInt, Witness>, value: BigInt, witness: Witness) {
    match values.get(&value) {
        Some(existing) if existing.tuple <= witness.tuple => {}
        _ => {
            values.insert(value, witness);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ChunkResult {
    pub index: u64,
    pub tuples: u64,
    pub infinite: u64,
    pub found: BTreeMap<BigInt, Witness>,
}

/// Evaluates one polynomial under the scan's source.
enum Evaluator {
    Engine(Engine),
    ClosedForm,
}

impl Evaluator {
    fn new(params: &ScanParams) -> Result<Self> {
        Ok(match params.source {
            ScanSource::Engine => Evaluator::Engine(Engine::new(params.r, params.c)?),
            ScanSource::ClosedForm => Evaluator::ClosedForm,
        })
    }

    fn value(&self, params: &ScanParams, p: &IntPolynomial) -> Result<RValue> {
        match self {
            Evaluator::Engine(engine) => engine.polynomial_number(p),
            Evaluator::ClosedForm => match closed_form(params.r, params.c, p)? {
                ClosedForm::Value(v) => Ok(v),
                ClosedForm::NotApplicable => {
                    Err(Error::domain(format!("closed form does not apply to {p}")))
                }
            },
        }
    }
}

fn run_chunk(params: &ScanParams, eval: &Evaluator, index: u64, total: u64) -> Result<ChunkResult> {
    let start = index * params.chunk_size;
    let end = (start + params.chunk_size).min(total);
    let mut found = BTreeMap::new();
    let mut infinite = 0;
    for t in start..end {
        let poly = params.tuple(t);
        match eval.value(params, &poly)? {
            RValue::Infinite => infinite += 1,
            RValue::Finite(v) => {
                if params.max_value.as_ref().is_none_or(|m| &v <= m) {
                    merge_witness(&mut found, v, Witness { tuple: t, poly });
                }
            }
        }
    }
    Ok(ChunkResult {
        index,
        tuples: end - start,
        infinite,
        found,
    })
}

#[derive(Clone, Debug, Default)]
pub struct ScanOptions {
    /// Worker threads; `None` lets rayon decide.
    pub workers: Option<usize>,
    pub checkpoint: Option<PathBuf>,
    /// Stop after this many newly evaluated chunks (simulates an interruption).
    pub max_new_chunks: Option<u64>,
}

/// Runs (or resumes) a scan. With a checkpoint path, an existing file is
/// resumed when its parameters match and every finished chunk is appended.
pub fn run_scan(params: ScanParams, options: &ScanOptions) -> Result<SpectrumScan> {
    params.validate()?;
    let total = params.total_tuples()?;
    let chunks = params.chunk_count()?;

    let (mut scan, mut writer) = match &options.checkpoint {
        Some(path) => open_checkpoint(&params, path)?,
        None => (SpectrumScan::empty(params.clone()), None),
    };

    let mut pending: Vec<u64> = (0..chunks)
        .filter(|i| !scan.completed_chunks.contains(i))
        .collect();
    if let Some(limit) = options.max_new_chunks {
        pending.truncate(limit.min(pending.len() as u64) as usize);
    }
    if pending.is_empty() {
        return Ok(scan);
    }

    let eval = Evaluator::new(&params)?;
    let pool = {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = options.workers {
            builder = builder.num_threads(n.max(1));
        }
        builder
            .build()
            .map_err(|e| Error::domain(format!("cannot start worker pool: {e}")))?
    };
    let wave = pool.current_num_threads().max(1) * 4;

    for batch in pending.chunks(wave) {
        let results: Vec<Result<ChunkResult>> = pool.install(|| {
            batch
                .par_iter()
                .map(|&i| run_chunk(&params, &eval, i, total))
                .collect()
        });
        for result in results {
            let result = result?;
            if let Some(w) = writer.as_mut() {
                w.append(&result)?;
            }
            scan.merge(result);
        }
    }
    Ok(scan)
}

fn open_checkpoint(
    params: &ScanParams,
    path: &Path,
) -> Result<(SpectrumScan, Option<CheckpointWriter>)> {
    match resume_scan(path) {
        Ok(scan) => {
            if &scan.params != params {
                return Err(Error::domain(format!(
                    "checkpoint {} was written for different scan parameters",
                    path.display()
                )));
            }
            let writer = CheckpointWriter::open_append(path)?;
            Ok((scan, Some(writer)))
        }
        Err(Error::NoCheckpoint(_)) => {
            let writer = CheckpointWriter::create(path, params)?;
            Ok((SpectrumScan::empty(params.clone()), Some(writer)))
        }
        Err(e) => Err(e),
    }
}

/// Convenience: full scan without checkpointing.
pub fn scan_box(
    r: usize,
    c: usize,
    bound: i64,
    max_value: Option<u64>,
    source: ScanSource,
) -> Result<SpectrumScan> {
    run_scan(
        ScanParams::new(r, c, bound, max_value, source),
        &ScanOptions::default(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    pub witness: Option<IntPolynomial>,
}

/// Decides `n ∈ Spec_R(N_{r,c})` for the characterized cases
/// `(2,2)`: `2N`; `(3,2)`: odd or `4N`; `(2,3)`: `2N^2`. Witnesses are
/// re-evaluated by the engine before being returned.
pub fn spectrum_membership(r: usize, c: usize, n: u64) -> Result<Membership> {
    if n == 0 {
        return Err(Error::domain("n must be a positive integer"));
    }
    let witness = match (r, c) {
        (2, 2) => n.is_multiple_of(2).then(|| q2((n / 2) as i64)),
        (3, 2) => {
            if n % 2 == 1 {
                Some(q3(((n - 1) / 2) as i64))
            } else if n.is_multiple_of(4) {
                Some(r3((n / 4) as i64))
            } else {
                None
            }
        }
        (2, 3) => {
            let half = n / 2;
            let k = half.isqrt();
            (n.is_multiple_of(2) && k * k == half).then(|| q2(k as i64))
        }
        _ => {
            return Err(Error::domain(format!(
                "membership is only characterized for (2,2), (3,2), (2,3), not ({r}, {c})"
            )))
        }
    };
    if let Some(p) = &witness {
        let got = Engine::new(r, c)?.polynomial_number(p)?;
        if got != RValue::from_u64(n) {
            return Err(Error::domain(format!(
                "witness {p} evaluates to {got}, expected {n}"
            )));
        }
    }
    Ok(Membership {
        member: witness.is_some(),
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditViolation {
    pub poly: IntPolynomial,
    pub value: RValue,
    pub rule: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub r: usize,
    pub c: usize,
    pub samples: usize,
    pub finite: usize,
    pub infinite: usize,
    /// Rules that were checked for this `(r, c)`.
    pub rules: Vec<&'static str>,
    pub violations: Vec<AuditViolation>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub const RULE_EVEN: &str = "c >= r: finite values are even";
pub const RULE_N33: &str = "(3,3): finite values lie in 32N ∪ 4(2N-1)";
pub const RULE_R_INFINITY: &str = "c >= 2r: every value is infinite";

fn in_n33_classes(v: &BigInt) -> bool {
    let (q, rem) = v.div_rem(&BigInt::from(4));
    rem.is_zero() && (q.is_odd() || (v % BigInt::from(32)).is_zero())
}

/// Evaluates every sample with the exact engine and checks the divisibility
/// and `R_∞` rules that apply to `(r, c)`.
pub fn parity_audit(r: usize, c: usize, samples: &[IntPolynomial]) -> Result<AuditReport> {
    let engine = Engine::new(r, c)?;
    for p in samples {
        if p.degree() != r || !p.is_unimodular() {
            return Err(Error::domain(format!(
                "audit sample {p} is not a degree-{r} automorphism polynomial"
            )));
        }
    }
    let values: Vec<RValue> = samples
        .par_iter()
        .map(|p| engine.polynomial_number(p))
        .collect::<Result<_>>()?;

    let mut rules = Vec::new();
    if c >= r {
        rules.push(RULE_EVEN);
    }
    if (r, c) == (3, 3) {
        rules.push(RULE_N33);
    }
    if c >= 2 * r {
        rules.push(RULE_R_INFINITY);
    }

    let mut violations = Vec::new();
    let mut finite = 0;
    for (p, value) in samples.iter().zip(values) {
        let broken = match &value {
            RValue::Infinite => None,
            RValue::Finite(v) => {
                finite += 1;
                if c >= 2 * r {
                    Some(RULE_R_INFINITY)
                } else if c >= r && v.is_odd() {
                    Some(RULE_EVEN)
                } else if (r, c) == (3, 3) && !in_n33_classes(v) {
                    Some(RULE_N33)
                } else {
                    None
                }
            }
        };
        if let Some(rule) = broken {
            violations.push(AuditViolation {
                poly: p.clone(),
                value,
                rule,
            });
        }
    }
    Ok(AuditReport {
        r,
        c,
        samples: samples.len(),
        finite,
        infinite: samples.len() - finite,
        rules,
        violations,
    })
}

/// Random monic degree-`r` polynomials with `|a_i| <= bound` for
/// `1 <= i < r` and `a_0` fixed or uniform in `{-1, 1}`.
pub fn random_automorphism_polynomials(
    r: usize,
    count: usize,
    bound: i64,
    a0: Option<i64>,
    seed: u64,
) -> Vec<IntPolynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut coeffs = Vec::with_capacity(r + 1);
            coeffs.push(a0.unwrap_or_else(|| if rng.gen_bool(0.5) { 1 } else { -1 }));
            for _ in 1..r {
                coeffs.push(rng.gen_range(-bound..=bound));
            }
            coeffs.push(1);
            IntPolynomial::from_i64(&coeffs).expect("monic")
        })
        .collect()
}

/// Values in `1..=limit` missing from a scan; evidence for non-full spectra.
pub fn smallest_absent(scan: &SpectrumScan, limit: u64) -> Vec<u64> {
    (1..=limit)
        .filter(|n| !scan.values.contains_key(&BigInt::from(*n)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn ints(v: &[u64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rank_two_class_two_scan() {
        let scan = scan_box(2, 2, 10, Some(20), ScanSource::Engine).unwrap();
        assert_eq!(
            scan.value_set(),
            ints(&[2, 4, 6, 8, 10, 12, 14, 16, 18, 20])
        );
        assert!(scan.is_complete());
        assert_eq!(scan.enumerated, 42);
    }

    #[test]
    fn rank_two_class_three_scan() {
        let scan = scan_box(2, 3, 5, Some(50), ScanSource::Engine).unwrap();
        assert_eq!(scan.value_set(), ints(&[2, 8, 18, 32, 50]));
    }

    #[test]
    fn closed_form_validation() {
        assert!(scan_box(4, 2, 2, None, ScanSource::ClosedForm).is_err());
        assert!(scan_box(2, 2, 0, None, ScanSource::Engine).is_err());
    }

    #[test]
    fn tuple_enumeration_covers_box() {
        let params = ScanParams::new(3, 2, 2, None, ScanSource::Engine);
        let total = params.total_tuples().unwrap();
        assert_eq!(total, 50);
        let all: BTreeSet<Vec<BigInt>> = (0..total)
            .map(|t| params.tuple(t).coeffs().to_vec())
            .collect();
        assert_eq!(all.len(), 50);
        let ab = ScanParams::new(3, 3, 1, None, ScanSource::ClosedForm);
        assert_eq!(ab.total_tuples().unwrap(), 9);
        assert_eq!(ab.tuple(0).coeffs(), ints_i(&[1, -2, -2, 1]).as_slice());
    }

    fn ints_i(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn worker_count_does_not_matter() {
        let params = ScanParams::new(3, 2, 4, Some(200), ScanSource::Engine).with_chunk_size(7);
        let one = run_scan(
            params.clone(),
            &ScanOptions {
                workers: Some(1),
                ..Default::default()
            },
        )
        .unwrap();
        let four = run_scan(
            params,
            &ScanOptions {
                workers: Some(4),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn membership_examples() {
        let m = spectrum_membership(2, 2, 14).unwrap();
        assert!(m.member);
        assert_eq!(m.witness.unwrap().to_csv(), "-1,7,1");
        let m = spectrum_membership(3, 2, 7).unwrap();
        assert_eq!(m.witness.unwrap().to_csv(), "1,2,3,1");
        assert!(!spectrum_membership(3, 2, 6).unwrap().member);
        assert!(spectrum_membership(3, 2, 1).unwrap().member);
        assert!(spectrum_membership(2, 3, 18).unwrap().member);
        assert!(!spectrum_membership(2, 3, 16).unwrap().member);
        assert!(spectrum_membership(4, 2, 3).is_err());
    }

    #[test]
    fn n33_classes() {
        for v in [4u64, 12, 20, 32, 64, 96, 980] {
            assert!(in_n33_classes(&BigInt::from(v)), "{v}");
        }
        for v in [2u64, 8, 16, 24, 48, 6] {
            assert!(!in_n33_classes(&BigInt::from(v)), "{v}");
        }
    }

    #[test]
    fn audit_small() {
        let samples = random_automorphism_polynomials(2, 40, 10, None, 7);
        let report = parity_audit(2, 2, &samples).unwrap();
        assert!(report.passed());
        assert_eq!(report.samples, 40);
        assert_eq!(report.rules, [RULE_EVEN]);
        let bad = vec![IntPolynomial::from_i64(&[2, 1, 1]).unwrap()];
        assert!(parity_audit(2, 2, &bad).is_err());
    }

    #[test]
    fn random_polynomials_are_deterministic() {
        let a = random_automorphism_polynomials(3, 10, 5, Some(1), 42);
        let b = random_automorphism_polynomials(3, 10, 5, Some(1), 42);
        assert_eq!(a, b);
        assert!(a.iter().all(|p| p.constant_term().is_one()));
    }
}
