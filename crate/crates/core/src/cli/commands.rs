use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::report::{summarize, Observation, RunReport, Violation};
use crate::error::{Error, Result};
use crate::fixtures::{random_entry_vector, random_exact_matrix};
use crate::inequality::{
    adjudicate, adjudicate_grone_pierce, adjudicate_lieb, adjudicate_pair, adjudicate_reduced,
    check_chollet_pair, check_chollet_reduced, check_grone_pierce, check_lieb, rationalize, Adjudication,
    CheckResult, Relation,
};
use crate::io::{AnyMatrix, MatrixFile, Mode};
use crate::matrix::SquareMatrix;
use crate::matrixlab::{
    hadamard_abs2, sample_correlation, sample_rational_correlation, CorrelationMatrix, PsdMatrix, SampleMethod,
};
use crate::parallel::{map_trials, with_pool};
use crate::permanent::{permanent_naive, permanent_ryser, permanent_with, Engine};
use crate::proof4x4::{
    compute_terms, exact_recheck, expansion_per_hadamard, lemma1_identities, lemma2_identities, lemma3_check,
    lemma3_squares, per_from_terms, prove_trace, verify_lemma1, verify_lemma2, ProofTrace, Verdict,
};
use crate::scalar::{GaussRat, Rational, Real, Scalar};
use crate::search::{hill_climb, SearchConfig, SearchResult};

/// Dimensions accepted by the batch commands.
pub const MIN_N: usize = 2;
pub const MAX_N: usize = 6;

const PARTNER_SALT: u64 = 0x5851_f42d_4c95_7f2d;
const DIAGONAL_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

fn check_n(n: usize) -> Result<()> {
    if (MIN_N..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("n must lie in [{MIN_N}, {MAX_N}], got {n}")))
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(())
    } else {
        Err(Error::Precondition(format!("tolerance must be finite and non-negative, got {tol}")))
    }
}

/// Float permanents print in shortest round-trip form, exact ones as `p/q`.
pub fn format_permanent(value: &AnyValue) -> String {
    match value {
        AnyValue::Float(z) if z.im == 0.0 => format!("{}", z.re),
        AnyValue::Float(z) if z.im < 0.0 => format!("{} - {}i", z.re, -z.im),
        AnyValue::Float(z) => format!("{} + {}i", z.re, z.im),
        AnyValue::Rational(z) => z.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyValue {
    Float(Complex64),
    Rational(GaussRat),
}

pub fn cmd_perm(m: &AnyMatrix, engine: Engine) -> Result<AnyValue> {
    Ok(match m {
        AnyMatrix::Float(m) => AnyValue::Float(permanent_with(m, engine)?),
        AnyMatrix::Rational(m) => AnyValue::Rational(permanent_with(m, engine)?),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    Pair,
    Reduced,
}

impl Form {
    pub fn as_str(self) -> &'static str {
        match self {
            Form::Pair => "pair",
            Form::Reduced => "reduced",
        }
    }

    fn suite(self) -> &'static str {
        match self {
            Form::Pair => "chollet-pair",
            Form::Reduced => "chollet-reduced",
        }
    }
}

fn mode_str(mode: Mode) -> &'static str {
    match mode {
        Mode::Float => "float",
        Mode::Rational => "rational",
    }
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub tol: f64,
    pub form: Form,
    pub mode: Mode,
}

/// Margin as reported in summaries: identities count as `−|margin|`.
fn summary_margin<R: Real>(c: &CheckResult<R>) -> f64 {
    match c.relation {
        Relation::AtLeast => c.margin_f64(),
        Relation::Equal => -c.margin_f64().abs(),
    }
}

fn observe<R: Real>(
    suite: &'static str,
    c: &CheckResult<R>,
    escalate: impl FnOnce() -> (Vec<MatrixFile>, Adjudication),
    trial: u64,
    seed: u64,
) -> Observation {
    let escalation = (!c.holds).then(|| {
        let (matrices, exact_recheck) = escalate();
        Violation {
            trial,
            seed,
            suite: suite.to_string(),
            context: c.context.clone(),
            margin: c.margin_f64(),
            matrices,
            exact_recheck,
        }
    });
    Observation {
        suite,
        margin: summary_margin(c),
        holds: c.holds,
        escalation,
    }
}

/// An exact failure needs no re-check.
fn confirmed(c: &CheckResult<Rational>) -> Adjudication {
    Adjudication::Confirmed {
        margin: c.margin.clone(),
    }
}

fn dump<S: Scalar>(ms: &[&SquareMatrix<S>]) -> Vec<MatrixFile> {
    ms.iter().map(|m| MatrixFile::from_matrix(m)).collect()
}

fn rational_sample(n: usize, trial: u64, seed: u64) -> Result<CorrelationMatrix<GaussRat>> {
    let (dim, real) = match SampleMethod::cycled(n, trial) {
        SampleMethod::GramUnitComplex => (n, false),
        SampleMethod::GramUnitReal => (n, true),
        SampleMethod::RankDeficient(k) => (k, false),
    };
    sample_rational_correlation(n, dim, real, seed)
}

/// `D·A·D` for a diagonal `D`.
fn scale_diagonal<S: Scalar>(m: &SquareMatrix<S>, d: &[S::Real]) -> SquareMatrix<S> {
    SquareMatrix::from_fn(m.n(), |i, j| m.get(i, j).scale(&(d[i].clone() * d[j].clone())))
}

fn float_diagonal(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.5..2.0)).collect()
}

fn rational_diagonal(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| Rational::ratio(rng.random_range(1..=4), rng.random_range(1..=4)))
        .collect()
}

fn check_trial(opts: &CheckOptions, trial: u64) -> Result<Vec<Observation>> {
    let seed = opts.seed ^ trial;
    let n = opts.n;
    let suite = opts.form.suite();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(DIAGONAL_SALT));
    let partner = seed.rotate_left(32) ^ PARTNER_SALT;
    let obs = match (opts.mode, opts.form) {
        (Mode::Float, Form::Reduced) => {
            let a = sample_correlation(n, seed, SampleMethod::cycled(n, trial))?;
            let c = check_chollet_reduced(&a, opts.tol)?;
            observe(suite, &c, || (dump(&[a.matrix()]), adjudicate_reduced(a.matrix())), trial, seed)
        }
        (Mode::Float, Form::Pair) => {
            let a = sample_correlation(n, seed, SampleMethod::cycled(n, trial))?;
            let b = sample_correlation(n, partner, SampleMethod::cycled(n, trial + 1))?;
            let a = PsdMatrix::new(scale_diagonal(a.matrix(), &float_diagonal(&mut rng, n)))?;
            let b = PsdMatrix::new(scale_diagonal(b.matrix(), &float_diagonal(&mut rng, n)))?;
            let c = check_chollet_pair(&a, &b, opts.tol)?;
            let escalate = || (dump(&[a.matrix(), b.matrix()]), adjudicate_pair(a.matrix(), b.matrix()));
            observe(suite, &c, escalate, trial, seed)
        }
        (Mode::Rational, Form::Reduced) => {
            let a = rational_sample(n, trial, seed)?;
            let c = check_chollet_reduced(&a, 0.0)?;
            observe(suite, &c, || (dump(&[a.matrix()]), confirmed(&c)), trial, seed)
        }
        (Mode::Rational, Form::Pair) => {
            let a = rational_sample(n, trial, seed)?;
            let b = rational_sample(n, trial + 1, partner)?;
            let a = PsdMatrix::new(scale_diagonal(a.matrix(), &rational_diagonal(&mut rng, n)))?;
            let b = PsdMatrix::new(scale_diagonal(b.matrix(), &rational_diagonal(&mut rng, n)))?;
            let c = check_chollet_pair(&a, &b, 0.0)?;
            observe(suite, &c, || (dump(&[a.matrix(), b.matrix()]), confirmed(&c)), trial, seed)
        }
    };
    Ok(vec![obs])
}

fn run_trials(
    trials: u64,
    suites: &[&'static str],
    trial: impl Fn(u64) -> Result<Vec<Observation>> + Sync + Send,
) -> Result<super::report::RunReportParts> {
    let results = with_pool(|| map_trials(trials, &trial));
    let mut per_trial = Vec::with_capacity(results.len());
    for (i, r) in results.into_iter().enumerate() {
        per_trial.push((i as u64, r?));
    }
    Ok(summarize(suites, per_trial))
}

/// Samples correlation (or scaled PSD) matrices and checks the product
/// inequality on each. Trial `i` uses seed `seed ⊕ i`.
pub fn cmd_check(opts: &CheckOptions) -> Result<RunReport> {
    check_n(opts.n)?;
    check_tol(opts.tol)?;
    let start = Instant::now();
    let (suites, violations, flagged) = run_trials(opts.trials, &[opts.form.suite()], |t| check_trial(opts, t))?;
    Ok(RunReport {
        command: format!(
            "check --n {} --trials {} --seed {} --tol {:?} --form {} --mode {}",
            opts.n,
            opts.trials,
            opts.seed,
            opts.tol,
            opts.form.as_str(),
            mode_str(opts.mode)
        ),
        seed: opts.seed,
        trials: opts.trials,
        n: opts.n,
        form: Some(opts.form.as_str().to_string()),
        mode: opts.mode,
        tol: if opts.mode == Mode::Rational { 0.0 } else { opts.tol },
        theorem_region: opts.n <= 4,
        violations,
        flagged,
        suites,
        wall_time_ms: start.elapsed().as_millis(),
    })
}

#[derive(Clone, Debug)]
pub struct LemmaOptions {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub tol: f64,
}

fn exact_image(a: &SquareMatrix<Complex64>) -> Result<CorrelationMatrix<GaussRat>> {
    let exact = rationalize(a, true).ok_or_else(|| Error::Parse("non-finite entry".into()))?;
    CorrelationMatrix::new(exact)
}

/// Uniform point of the closed unit ball in `ℝ³`.
fn unit_ball_point(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let g: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(rng));
    let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
    let radius = rng.random::<f64>().cbrt();
    g.map(|v| v * radius / norm)
}

fn lemma_trial(opts: &LemmaOptions, trial: u64) -> Result<Vec<Observation>> {
    let seed = opts.seed ^ trial;
    let n = opts.n;
    let tol = opts.tol;
    let mut obs = Vec::new();
    let a = sample_correlation(n, seed, SampleMethod::cycled(n, trial))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(DIAGONAL_SALT));
    let psd = PsdMatrix::new(scale_diagonal(a.matrix(), &float_diagonal(&mut rng, n)))?;
    for k in 1..n {
        let r = check_lieb(&psd, k, tol)?;
        for c in [&r.bound, &r.nonnegative] {
            let escalate = || (dump(&[psd.matrix()]), adjudicate_lieb(psd.matrix(), k));
            obs.push(observe("lieb", c, escalate, trial, seed));
        }
    }

    let gp = check_grone_pierce(&a, tol)?;
    obs.push(observe(
        "grone-pierce",
        &gp,
        || (dump(&[a.matrix()]), adjudicate_grone_pierce(a.matrix())),
        trial,
        seed,
    ));

    if n == 4 {
        let r1 = verify_lemma1(&a, tol)?;
        for (idx, c) in r1.margins.iter().chain(&r1.identities).enumerate() {
            let escalate = || {
                let verdict = adjudicate(|| {
                    let r = verify_lemma1(&exact_image(a.matrix())?, 0.0)?;
                    Ok(r.margins.into_iter().chain(r.identities).nth(idx).expect("same shape"))
                });
                (dump(&[a.matrix()]), verdict)
            };
            obs.push(observe("lemma1", c, escalate, trial, seed));
        }
        let r2 = verify_lemma2(&a, tol)?;
        for (idx, c) in r2.bounds.iter().chain(&r2.nonnegative).chain(&r2.identities).enumerate() {
            let escalate = || {
                let verdict = adjudicate(|| {
                    let r = verify_lemma2(&exact_image(a.matrix())?, 0.0)?;
                    let all = r.bounds.into_iter().chain(r.nonnegative).chain(r.identities);
                    Ok(all.into_iter().nth(idx).expect("same shape"))
                });
                (dump(&[a.matrix()]), verdict)
            };
            obs.push(observe("lemma2", c, escalate, trial, seed));
        }
        let [x, y, z] = unit_ball_point(&mut rng);
        let c = lemma3_check(x, y, z, tol)?;
        let escalate = || {
            let verdict = adjudicate(|| {
                let sq = |v: f64| Rational::from_f64(v).map(|r| r.square()).ok_or_else(|| Error::Parse("non-finite".into()));
                lemma3_squares(sq(x)?, sq(y)?, sq(z)?, 0.0, &c.context)
            });
            (Vec::new(), verdict)
        };
        obs.push(observe("lemma3", &c, escalate, trial, seed));
    }
    Ok(obs)
}

/// Lieb over every split and Grone–Pierce at any `n`; the three lemmas of
/// the 4×4 argument in addition at `n = 4`.
pub fn cmd_lemmas(opts: &LemmaOptions) -> Result<RunReport> {
    check_n(opts.n)?;
    check_tol(opts.tol)?;
    let start = Instant::now();
    let suites: &[&'static str] = if opts.n == 4 {
        &["lieb", "grone-pierce", "lemma1", "lemma2", "lemma3"]
    } else {
        &["lieb", "grone-pierce"]
    };
    let (suites, violations, flagged) = run_trials(opts.trials, suites, |t| lemma_trial(opts, t))?;
    Ok(RunReport {
        command: format!(
            "lemmas --n {} --trials {} --seed {} --tol {:?}",
            opts.n, opts.trials, opts.seed, opts.tol
        ),
        seed: opts.seed,
        trials: opts.trials,
        n: opts.n,
        form: None,
        mode: Mode::Float,
        tol: opts.tol,
        theorem_region: opts.n <= 4,
        violations,
        flagged,
        suites,
        wall_time_ms: start.elapsed().as_millis(),
    })
}

#[derive(Clone, Debug)]
pub enum TraceInput {
    Matrix(AnyMatrix),
    /// Seeded complex Gram sample (float mode) or rational sample.
    Sample { seed: u64, mode: Mode },
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum AnyTrace {
    Float(Box<ProofTrace<Complex64>>),
    Rational(Box<ProofTrace<GaussRat>>),
}

impl AnyTrace {
    pub fn verdict(&self) -> Verdict {
        match self {
            AnyTrace::Float(t) => t.verdict,
            AnyTrace::Rational(t) => t.verdict,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExactRecheck {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<ProofTrace<GaussRat>>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceReport {
    #[serde(flatten)]
    pub trace: AnyTrace,
    /// Exact re-run, present only when a float trace did not verify.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_recheck: Option<ExactRecheck>,
}

impl TraceReport {
    /// 0 when verified (directly or after the exact re-run), or when the
    /// exact re-run could not be carried out; 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match (&self.trace, &self.exact_recheck) {
            (t, _) if t.verdict() == Verdict::Verified => 0,
            (AnyTrace::Float(_), Some(r)) => match r.verdict {
                Some(Verdict::Verified) | None => 0,
                Some(_) => 1,
            },
            _ => 1,
        }
    }
}

pub fn cmd_trace(input: &TraceInput, tol: f64) -> Result<TraceReport> {
    check_tol(tol)?;
    let float_trace = |a: CorrelationMatrix<Complex64>| -> Result<TraceReport> {
        let t = prove_trace(&a, tol)?;
        let exact_recheck = (t.verdict != Verdict::Verified).then(|| match exact_recheck(&a) {
            Ok(e) => ExactRecheck {
                verdict: Some(e.verdict),
                reason: None,
                trace: Some(e),
            },
            Err(err) => ExactRecheck {
                verdict: None,
                reason: Some(err.to_string()),
                trace: None,
            },
        });
        Ok(TraceReport {
            trace: AnyTrace::Float(Box::new(t)),
            exact_recheck,
        })
    };
    let exact_trace = |a: CorrelationMatrix<GaussRat>| -> Result<TraceReport> {
        Ok(TraceReport {
            trace: AnyTrace::Rational(Box::new(prove_trace(&a, 0.0)?)),
            exact_recheck: None,
        })
    };
    let require4 = |n: usize| {
        if n == 4 { Ok(()) } else { Err(Error::WrongDimension { expected: 4, got: n }) }
    };
    match input {
        TraceInput::Matrix(AnyMatrix::Float(m)) => {
            require4(m.n())?;
            float_trace(CorrelationMatrix::new(m.clone())?)
        }
        TraceInput::Matrix(AnyMatrix::Rational(m)) => {
            require4(m.n())?;
            exact_trace(CorrelationMatrix::new(m.clone())?)
        }
        TraceInput::Sample { seed, mode: Mode::Float } => {
            float_trace(sample_correlation(4, *seed, SampleMethod::GramUnitComplex)?)
        }
        TraceInput::Sample { seed, mode: Mode::Rational } => {
            exact_trace(sample_rational_correlation(4, 4, false, *seed)?)
        }
    }
}

pub fn cmd_search(config: &SearchConfig) -> Result<SearchResult> {
    check_n(config.n)?;
    with_pool(|| hill_climb(config))
}

/// Deliberate defects the self-test must catch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mutation {
    #[default]
    None,
    /// Flips the sign of `y₂` before the closed form of `per(A)` is summed.
    FlipY2Sign,
}

/// Inputs per self-test suite.
pub const SELFTEST_CASES: u64 = 100;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteTally {
    pub name: &'static str,
    pub passed: u64,
    pub total: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestSummary {
    pub suites: Vec<SuiteTally>,
}

impl SelftestSummary {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed == s.total)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_passed() { 0 } else { 1 }
    }
}

impl fmt::Display for SelftestSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            writeln!(f, "{}: {}/{}", s.name, s.passed, s.total)?;
        }
        write!(f, "{}", if self.all_passed() { "all suites passed" } else { "FAILED" })
    }
}

fn tally(name: &'static str, pass: impl Fn(u64) -> bool) -> SuiteTally {
    SuiteTally {
        name,
        passed: (0..SELFTEST_CASES).filter(|&i| pass(i)).count() as u64,
        total: SELFTEST_CASES,
    }
}

/// Exact identity suites on fixed Gaussian-rational inputs.
pub fn cmd_selftest(mutation: Mutation) -> SelftestSummary {
    let expansions = tally("expansions", |i| {
        let e = random_entry_vector(i);
        let mut terms = compute_terms(&e);
        if mutation == Mutation::FlipY2Sign {
            terms.y[1] = -terms.y[1].clone();
        }
        let a = e.assemble();
        let per_ok = permanent_naive(&a).is_ok_and(|p| p.im.is_zero() && p.re == per_from_terms(&terms));
        let had_ok = permanent_naive(&hadamard_abs2(&a)).is_ok_and(|p| p.re == expansion_per_hadamard(&e));
        per_ok && had_ok
    });
    let determinant = tally("determinant-identity", |i| {
        lemma1_identities(&random_entry_vector(i), 0.0).is_ok_and(|cs| cs.iter().all(|c| c.holds))
    });
    let lemma2 = tally("lemma2-identities", |i| {
        lemma2_identities(&random_entry_vector(i), 0.0).is_ok_and(|cs| cs.iter().all(|c| c.holds))
    });
    let engines = tally("engine-agreement", |i| {
        let m = random_exact_matrix(2 + (i % 6) as usize, i);
        matches!((permanent_naive(&m), permanent_ryser(&m)), (Ok(a), Ok(b)) if a == b)
    });
    SelftestSummary {
        suites: vec![expansions, determinant, lemma2, engines],
    }
}
