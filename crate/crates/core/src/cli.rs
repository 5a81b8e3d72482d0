//! Command-line frontend. [`parse_and_dispatch`] is the whole program minus
//! process exit, so it can be driven from tests with in-memory streams.
//!
//! Exit status: 0 on success, 1 on domain errors or failed checks, 2 on
//! usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::hall::HallBasis;
use crate::matrix::IntegerMatrix;
use crate::poly::IntPolynomial;
use crate::reidemeister::{
    c_offset, family_even, family_odd, float_oracle, q2, q3, r3, Engine, InputDescriptor,
    MethodChoice, Mode, RValue,
};
use crate::spectrum::{
    parity_audit, random_automorphism_polynomials, run_scan, ScanOptions, ScanParams, ScanSource,
};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "nilfix",
    version,
    about = "Exact Reidemeister and Nielsen numbers of endomorphisms of free nilpotent groups N_{r,c}"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the Hall basis of the free nilpotent Lie ring of rank r and class c
    Hall(HallArgs),
    /// Print layer dimensions and det(1 - M_i) for an integer matrix
    Layers(LayersArgs),
    /// Compute R(φ) for a polynomial (companion matrix) or a matrix
    Compute(ComputeArgs),
    /// Evaluate a witness family and compare with its predicted value
    Family(FamilyArgs),
    /// Enumerate the Reidemeister spectrum over a coefficient box
    Scan(ScanArgs),
    /// Check divisibility and R_∞ rules on random automorphism polynomials
    Audit(AuditArgs),
    /// Run the built-in cross-check suite
    Verify,
}

#[derive(Debug, Args)]
struct HallArgs {
    /// Rank (number of generators), at least 2
    #[arg(long)]
    r: usize,
    /// Nilpotency class, at least 1
    #[arg(long)]
    c: usize,
    /// Emit the basis as a JSON array of layers
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Structural,
    Trace,
    Both,
}

impl From<MethodArg> for MethodChoice {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Structural => MethodChoice::Structural,
            MethodArg::Trace => MethodChoice::Trace,
            MethodArg::Both => MethodChoice::Both,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Auto,
    Endo,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Auto => Mode::Automorphism,
            ModeArg::Endo => Mode::Endomorphism,
        }
    }
}

#[derive(Debug, Args)]
struct LayersArgs {
    /// Matrix file: first line r, then r rows of integers
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    c: usize,
    #[arg(long, value_enum, default_value = "structural")]
    method: MethodArg,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["poly", "matrix"]))]
struct ComputeArgs {
    /// Monic polynomial, low degree first: "a0,a1,...,1"
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    /// Matrix file: first line r, then r rows of integers
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long)]
    c: usize,
    /// auto requires |det A| = 1 (a_0 = ±1 for polynomials)
    #[arg(long, value_enum, default_value = "auto")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "structural")]
    method: MethodArg,
    /// Also evaluate the floating-point root-product oracle
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyKind {
    /// x^{2m} - x^{m+1} + (n-1)x^m + 1
    Even,
    /// x^{2m+1} + (n+1)x^{m+2} + (1-n)x^{m+1} + (n-1)x^m - nx^{m-1} - 1
    Odd,
    /// x^2 + nx - 1
    Q2,
    /// x^3 + nx^2 + (n-1)x + 1
    Q3,
    /// x^3 + nx^2 + (n-2)x + 1
    R3,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    kind: FamilyKind,
    /// Family index m >= 2 (even and odd families only)
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    n: i64,
    #[arg(long, default_value_t = 2)]
    c: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SourceArg {
    Engine,
    ClosedForm,
}

impl From<SourceArg> for ScanSource {
    fn from(s: SourceArg) -> Self {
        match s {
            SourceArg::Engine => ScanSource::Engine,
            SourceArg::ClosedForm => ScanSource::ClosedForm,
        }
    }
}

fn output_path(s: &str) -> std::result::Result<PathBuf, String> {
    let path = PathBuf::from(s);
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") | Some("json") => Ok(path),
        _ => Err("output file must end in .csv or .json".into()),
    }
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long)]
    r: usize,
    #[arg(long)]
    c: usize,
    /// Coefficient bound B: |a_i| <= B (|a|, |b| <= B for (3,3))
    #[arg(long)]
    bound: i64,
    /// Keep only finite values <= M
    #[arg(long)]
    max: Option<u64>,
    #[arg(long, value_enum, default_value = "engine")]
    source: SourceArg,
    /// Write the value table to FILE.csv or FILE.json
    #[arg(long, value_parser = output_path)]
    out: Option<PathBuf>,
    /// Resume from / append progress to this checkpoint file
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long, env = "NILFIX_WORKERS")]
    workers: Option<usize>,
}

#[derive(Debug, Args)]
struct AuditArgs {
    #[arg(long)]
    r: usize,
    #[arg(long)]
    c: usize,
    #[arg(long)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Bound on |a_i| for 1 <= i < r
    #[arg(long, default_value_t = 20)]
    bound: i64,
    /// Fix the constant term (1 or -1); random sign if omitted
    #[arg(long, allow_hyphen_values = true)]
    a0: Option<i64>,
}

/// Parses `argv` (program name first) and runs the subcommand, writing the
/// report to `out` and diagnostics to `err`. Returns the exit status.
pub fn parse_and_dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DOMAIN
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Hall(a) => hall(a, out),
        Command::Layers(a) => layers(a, out),
        Command::Compute(a) => compute(a, out),
        Command::Family(a) => family(a, out),
        Command::Scan(a) => scan(a, out),
        Command::Audit(a) => audit(a, out),
        Command::Verify => run_verify(out),
    }
}

fn read_matrix(path: &Path) -> Result<IntegerMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read matrix file {}: {e}", path.display())))?;
    IntegerMatrix::parse(&text)
}

fn print_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v).expect("serializable");
    writeln!(out, "{text}")?;
    Ok(())
}

fn join<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn hall(a: HallArgs, out: &mut dyn Write) -> Result<i32> {
    let basis = HallBasis::new(a.r, a.c)?;
    if a.json {
        print_json(out, &basis.to_json())?;
        return Ok(EXIT_OK);
    }
    writeln!(
        out,
        "Hall basis of rank {} and class {}: {} elements",
        a.r,
        a.c,
        basis.len()
    )?;
    for degree in 1..=a.c {
        let layer = basis.layer_range(degree);
        writeln!(out, "degree {degree}: {} elements", layer.len())?;
        for idx in layer {
            let e = basis.element(idx);
            writeln!(
                out,
                "  {:>4}  {}  multidegree ({})",
                idx,
                basis.label(idx),
                join(&e.multidegree)
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn layers(a: LayersArgs, out: &mut dyn Write) -> Result<i32> {
    let m = read_matrix(&a.matrix)?;
    let engine = Engine::new(m.rows(), a.c)?;
    let dets = engine.layer_dets(&m, a.method.into())?;
    writeln!(
        out,
        "r = {}, c = {}, method = {}",
        m.rows(),
        a.c,
        MethodChoice::from(a.method)
    )?;
    writeln!(out, "layer  dim  det(1-M_i)")?;
    for (i, (dim, det)) in dets.dims.iter().zip(&dets.dets).enumerate() {
        writeln!(out, "{:>5}  {:>3}  {}", i + 1, dim, det)?;
    }
    Ok(EXIT_OK)
}

fn compute(a: ComputeArgs, out: &mut dyn Write) -> Result<i32> {
    let (input, matrix, charpoly) = match (&a.poly, &a.matrix) {
        (Some(text), None) => {
            let p = IntPolynomial::parse(text)?;
            let m = p.companion();
            (InputDescriptor::Polynomial(p.clone()), m, p)
        }
        (None, Some(path)) => {
            let m = read_matrix(path)?;
            if !m.is_square() {
                return Err(Error::DimensionMismatch {
                    expected: "square matrix".into(),
                    found: format!("{}x{}", m.rows(), m.cols()),
                });
            }
            let p = IntPolynomial::new(m.characteristic_polynomial())?;
            (InputDescriptor::Matrix(m.clone()), m, p)
        }
        _ => unreachable!("clap enforces exactly one input"),
    };
    let engine = Engine::new(matrix.rows(), a.c)?;
    let mut report = engine.report(input, &matrix, a.mode.into(), a.method.into())?;
    if a.oracle {
        report.oracle_value = Some(float_oracle(&charpoly, a.c)?);
    }
    if a.json {
        print_json(out, &report.to_json())?;
        return Ok(EXIT_OK);
    }
    if let InputDescriptor::Polynomial(p) = &report.input {
        writeln!(out, "input: {p}")?;
    } else {
        writeln!(
            out,
            "input: {}x{} matrix, characteristic polynomial {charpoly}",
            matrix.rows(),
            matrix.cols()
        )?;
    }
    writeln!(
        out,
        "r = {}, c = {}, mode = {}, method = {}",
        report.r(),
        report.c,
        report.mode,
        report.method
    )?;
    writeln!(out, "layer dims: {}", join(&report.layer_dets.dims))?;
    writeln!(out, "layer dets: {}", join(&report.layer_dets.dets))?;
    writeln!(out, "value: {}", report.value)?;
    if let Some(o) = report.oracle_value {
        writeln!(out, "oracle: {o:.9e}")?;
    }
    Ok(EXIT_OK)
}

/// Predicted value of a family member when a theorem covers `(kind, c, n)`.
fn predicted(kind: FamilyKind, m: usize, n: i64, c: usize) -> Option<i64> {
    match (kind, c) {
        (FamilyKind::Even, 2) if n >= 1 => Some(n),
        (FamilyKind::Odd, 2) if n + c_offset(m) >= 1 => Some(n + c_offset(m)),
        (FamilyKind::Q2, 2) if n >= 1 => Some(2 * n),
        (FamilyKind::Q2, 3) if n >= 1 => Some(2 * n * n),
        (FamilyKind::Q3, 2) if n >= 1 => Some(2 * n + 1),
        (FamilyKind::R3, 2) if n >= 1 => Some(4 * n),
        _ => None,
    }
}

fn family(a: FamilyArgs, out: &mut dyn Write) -> Result<i32> {
    let need_m = || {
        a.m.ok_or_else(|| Error::Domain("--m is required for this family".into()))
    };
    let (p, m) = match a.kind {
        FamilyKind::Even => (family_even(need_m()?, a.n)?, need_m()?),
        FamilyKind::Odd => (family_odd(need_m()?, a.n)?, need_m()?),
        FamilyKind::Q2 => (q2(a.n), 0),
        FamilyKind::Q3 => (q3(a.n), 0),
        FamilyKind::R3 => (r3(a.n), 0),
    };
    let engine = Engine::new(p.degree(), a.c)?;
    let computed = engine.polynomial_number(&p)?;
    let prediction = predicted(a.kind, m, a.n, a.c);
    writeln!(out, "polynomial: {p}")?;
    match prediction {
        Some(v) => writeln!(out, "predicted: {v}")?,
        None => writeln!(out, "predicted: none")?,
    }
    writeln!(out, "computed: {computed}")?;
    let verdict = match (&prediction, &computed) {
        (None, _) | (_, RValue::Infinite) => "OUT-OF-SCOPE",
        (Some(v), RValue::Finite(x)) if BigInt::from(*v) == *x => "MATCH",
        _ => "MISMATCH",
    };
    writeln!(out, "{verdict}")?;
    Ok(if verdict == "MISMATCH" {
        EXIT_DOMAIN
    } else {
        EXIT_OK
    })
}

fn scan(a: ScanArgs, out: &mut dyn Write) -> Result<i32> {
    let params = ScanParams::new(a.r, a.c, a.bound, a.max, a.source.into());
    params.validate()?;
    if a.workers == Some(0) {
        return Err(Error::Domain("--workers must be positive".into()));
    }
    let options = ScanOptions {
        workers: a.workers,
        checkpoint: a.checkpoint.clone(),
        max_new_chunks: None,
    };
    let scan = run_scan(params.clone(), &options)?;
    writeln!(
        out,
        "scan r = {}, c = {}, bound = {}, source = {}, max = {}",
        a.r,
        a.c,
        a.bound,
        params.source,
        a.max.map_or("none".to_string(), |m| m.to_string())
    )?;
    writeln!(
        out,
        "tuples: {} (infinite: {})",
        scan.enumerated, scan.infinite
    )?;
    match params.completeness_threshold() {
        Some(t) => writeln!(
            out,
            "completeness bound: every value of the spectrum below {t} that occurs at all occurs in this box"
        )?,
        None => writeln!(out, "completeness bound: none known for this (r, c)")?,
    }
    writeln!(
        out,
        "values ({}): {}",
        scan.values.len(),
        join(&scan.value_set())
    )?;
    if let Some(path) = &a.out {
        let text = if path.extension().is_some_and(|e| e == "json") {
            serde_json::to_string_pretty(&scan.to_json()).expect("serializable") + "\n"
        } else {
            scan.to_csv()
        };
        std::fs::write(path, text)?;
        writeln!(out, "wrote {}", path.display())?;
    }
    Ok(EXIT_OK)
}

fn audit(a: AuditArgs, out: &mut dyn Write) -> Result<i32> {
    if let Some(a0) = a.a0 {
        if a0.abs() != 1 {
            return Err(Error::Domain(format!("--a0 must be 1 or -1, got {a0}")));
        }
    }
    if a.r < 2 || a.c < 1 || a.bound < 0 {
        return Err(Error::Domain(
            "audit needs r >= 2, c >= 1, bound >= 0".into(),
        ));
    }
    let samples = random_automorphism_polynomials(a.r, a.samples, a.bound, a.a0, a.seed);
    let report = parity_audit(a.r, a.c, &samples)?;
    writeln!(
        out,
        "audit r = {}, c = {}: {} samples, {} finite, {} infinite",
        report.r, report.c, report.samples, report.finite, report.infinite
    )?;
    if report.rules.is_empty() {
        writeln!(out, "no rule applies to this (r, c)")?;
    }
    for rule in &report.rules {
        let n = report.violations.iter().filter(|v| v.rule == *rule).count();
        writeln!(
            out,
            "rule \"{rule}\": {}",
            if n == 0 {
                "ok".to_string()
            } else {
                format!("{n} violations")
            }
        )?;
    }
    for v in &report.violations {
        writeln!(out, "  violation: {} gave {} ({})", v.poly, v.value, v.rule)?;
    }
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_DOMAIN
    })
}

fn run_verify(out: &mut dyn Write) -> Result<i32> {
    let outcomes = verify::run_all()?;
    let mut failed = false;
    for o in &outcomes {
        let status = if o.passed() { "PASS" } else { "FAIL" };
        writeln!(out, "{status}  {} ({} cases)", o.name, o.cases)?;
        for f in &o.failures {
            writeln!(out, "      {f}")?;
        }
        failed |= !o.passed();
    }
    Ok(if failed { EXIT_DOMAIN } else { EXIT_OK })
}
