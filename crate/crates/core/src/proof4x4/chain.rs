//! Case classification and the inequality chains that finish the argument.

use num_complex::Complex64;
use serde::Serialize;

use super::lemmas::{lemma3_squares, verify_lemma1, verify_lemma2, Lemma1Report, Lemma2Report};
use super::{
    compute_terms, extract_entries, per_from_terms, per_hadamard_from_terms, EntryVector, YZTerms,
    PAIRS,
};
use crate::error::{Error, Result};
use crate::inequality::{rationalize, real_permanent, CheckResult};
use crate::matrixlab::{hadamard_abs2, CorrelationMatrix};
use crate::scalar::{GaussRat, Real, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CaseLabel {
    /// `y₁ … y₄` all non-negative.
    Case1,
    /// `y₁ … y₄` all negative.
    Case2,
    /// Mixed signs with `s_m ≥ 1`; finished like Case 1.
    #[serde(rename = "Case3->1")]
    Case3ToCase1,
    /// Mixed signs with `s_m < 1`; finished like Case 2.
    #[serde(rename = "Case3->2")]
    Case3ToCase2,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 4] = [
        CaseLabel::Case1,
        CaseLabel::Case2,
        CaseLabel::Case3ToCase1,
        CaseLabel::Case3ToCase2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::Case1 => "Case1",
            CaseLabel::Case2 => "Case2",
            CaseLabel::Case3ToCase1 => "Case3->1",
            CaseLabel::Case3ToCase2 => "Case3->2",
        }
    }

    fn uses_case1_chain(self) -> bool {
        matches!(self, CaseLabel::Case1 | CaseLabel::Case3ToCase1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Classification {
    pub label: CaseLabel,
    /// 1-based index `m` of the governing `s_m`: argmax over all four in
    /// Case 1, over the indices with `yᵢ ≥ 0` in Case 3. `None` in Case 2.
    pub max_index: Option<usize>,
}

fn argmax<R: Real>(values: &[R; 4], admissible: impl Fn(usize) -> bool) -> Option<usize> {
    let mut best: Option<usize> = None;
    for i in (0..4).filter(|&i| admissible(i)) {
        match best {
            Some(b) if values[i] <= values[b] => {}
            _ => best = Some(i),
        }
    }
    best
}

/// Sign-based dispatch on `y₁ … y₄`. Zero counts as non-negative; ties in
/// the argmax go to the smallest index.
pub fn classify_case<R: Real>(terms: &YZTerms<R>) -> Classification {
    let nonneg = |i: usize| terms.y[i] >= R::zero();
    let count = (0..4).filter(|&i| nonneg(i)).count();
    match count {
        4 => Classification {
            label: CaseLabel::Case1,
            max_index: argmax(&terms.s, |_| true).map(|m| m + 1),
        },
        0 => Classification {
            label: CaseLabel::Case2,
            max_index: None,
        },
        _ => {
            let m = argmax(&terms.s, nonneg).expect("mixed signs have a non-negative index");
            let label = if terms.s[m] >= R::one() {
                CaseLabel::Case3ToCase1
            } else {
                CaseLabel::Case3ToCase2
            };
            Classification {
                label,
                max_index: Some(m + 1),
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Verified,
    Violated,
    Degenerate,
}

/// Lemma reports attached by [`prove_trace`].
#[derive(Clone, Debug, Serialize)]
pub struct LemmaReports<R> {
    pub lemma1: Lemma1Report<R>,
    pub lemma2: Lemma2Report<R>,
}

/// Full verification record for one 4×4 correlation matrix.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProofTrace<S: Scalar> {
    pub entries: EntryVector<S>,
    pub terms: YZTerms<S::Real>,
    pub case_label: CaseLabel,
    pub max_index: Option<usize>,
    /// Every inequality of the case chain in order; the last link is the
    /// end-to-end `per(A)² ≥ per(A∘Ā)`.
    pub links: Vec<CheckResult<S::Real>>,
    /// Closed forms of `per(A)` and `per(A∘Ā)` against the permanent engine.
    pub expansion_checks: Vec<CheckResult<S::Real>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemmas: Option<LemmaReports<S::Real>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failed_preconditions: Vec<String>,
    pub verdict: Verdict,
}

impl<S: Scalar> ProofTrace<S> {
    /// The end-to-end check `per(A)² ≥ per(A∘Ā)`.
    pub fn final_check(&self) -> &CheckResult<S::Real> {
        self.links.last().expect("a chain always ends with the final link")
    }

    pub fn min_link_margin(&self) -> f64 {
        self.links
            .iter()
            .filter(|l| l.relation == crate::inequality::Relation::AtLeast)
            .map(|l| l.margin.to_f64())
            .fold(f64::INFINITY, f64::min)
    }

    /// Links whose margin is within `threshold` of zero.
    pub fn near_zero_links(&self, threshold: f64) -> impl Iterator<Item = &CheckResult<S::Real>> {
        self.links
            .iter()
            .filter(move |l| l.margin.to_f64().abs() < threshold)
    }

    fn settle_verdict(&mut self) {
        let lemmas_hold = self
            .lemmas
            .as_ref()
            .is_none_or(|l| l.lemma1.holds() && l.lemma2.holds());
        self.verdict = if !self.failed_preconditions.is_empty() {
            Verdict::Degenerate
        } else if self.links.iter().chain(&self.expansion_checks).all(|c| c.holds) && lemmas_hold {
            Verdict::Verified
        } else {
            Verdict::Violated
        };
    }
}

struct ChainBuilder<R> {
    tol: f64,
    links: Vec<CheckResult<R>>,
    failed: Vec<String>,
}

impl<R: Real> ChainBuilder<R> {
    fn at_least(&mut self, context: impl Into<String>, lhs: R, rhs: R) {
        self.links.push(CheckResult::at_least(context, lhs, rhs, self.tol));
    }

    fn equal(&mut self, context: impl Into<String>, lhs: R, rhs: R) {
        self.links.push(CheckResult::equal(context, lhs, rhs, self.tol));
    }

    fn lemma3(&mut self, squares: [R; 3], context: &str) {
        let [a, b, c] = squares;
        match lemma3_squares(a, b, c, self.tol, context) {
            Ok(link) => self.links.push(link),
            Err(e) => self.failed.push(e.to_string()),
        }
    }
}

fn r<R: Real>(num: i64, den: i64) -> R {
    R::ratio(num, den)
}

/// Case 1 chain, also used for Case 3→1. `m` is the 0-based governing index.
fn case1_chain<R: Real>(b: &mut ChainBuilder<R>, terms: &YZTerms<R>, m: usize, per: &R, mixed: bool) {
    let one = R::one();
    let ym = terms.y[m].clone();
    let sm = terms.s[m].clone();
    let k = m + 1;
    let lieb = one.clone() + ym.clone() + sm.clone();
    b.at_least(format!("per(A) >= 1 + y{k} + s{k}"), per.clone(), lieb.clone());
    b.at_least(format!("1 + y{k} >= s{k}"), one.clone() + ym.clone(), sm.clone());
    let one_plus_y_sq = (one.clone() + ym.clone()).square();
    b.at_least(format!("(1 + y{k})^2 >= 1"), one_plus_y_sq.clone(), one.clone());
    if mixed {
        b.at_least(format!("s{k} >= 1"), sm.clone(), one.clone());
    }
    for i in 0..4 {
        if mixed && terms.y[i] < R::zero() {
            b.at_least(format!("y{} < 0 => 1 >= s{}", i + 1, i + 1), one.clone(), terms.s[i].clone());
        }
        if i != m {
            b.at_least(format!("s{k} >= s{}", i + 1), sm.clone(), terms.s[i].clone());
        }
    }
    b.at_least(format!("s{k} >= |xw|^2 + |yu|^2 + |zt|^2"), sm.clone(), terms.pair_sum.clone());
    let half = r::<R>(1, 2);
    for i in 0..4 {
        b.at_least(
            format!("s{}^2 / 2 >= (triple quartics) / 2 + z{}", i + 1, i + 1),
            half.clone() * terms.s[i].square(),
            half.clone() * terms.triple_quartics(i) + terms.z[i].clone(),
        );
    }
    b.equal(
        "(|xw|^2 + |yu|^2 + |zt|^2)^2 = |xw|^4 + |yu|^4 + |zt|^4 + z5 + z6 + z7",
        terms.pair_sum.square(),
        terms.pair_quartic_sum() + terms.z[4].clone() + terms.z[5].clone() + terms.z[6].clone(),
    );

    let per_sq = per.square();
    let three = R::from_i64(3);
    let bound2 = one.clone()
        + half.clone() * R::sum(terms.s.iter().map(Real::square))
        + terms.pair_sum.square();
    b.at_least(format!("per(A)^2 >= (1 + y{k} + s{k})^2"), per_sq, lieb.square());
    b.at_least(
        format!("(1 + y{k} + s{k})^2 >= (1 + y{k})^2 + 3 s{k}^2"),
        lieb.square(),
        one_plus_y_sq.clone() + three.clone() * sm.square(),
    );
    b.at_least(
        format!("(1 + y{k})^2 + 3 s{k}^2 >= 1 + (1/2) sum s_i^2 + (|xw|^2 + |yu|^2 + |zt|^2)^2"),
        one_plus_y_sq + three * sm.square(),
        bound2.clone(),
    );
    b.at_least(
        "1 + (1/2) sum s_i^2 + (|xw|^2 + |yu|^2 + |zt|^2)^2 >= per(A o conj A)",
        bound2,
        per_hadamard_from_terms(terms),
    );
}

/// Case 2 chain, also used for Case 3→2.
fn case2_chain<R: Real>(b: &mut ChainBuilder<R>, terms: &YZTerms<R>, per: &R) {
    let one = R::one();
    let half = r::<R>(1, 2);
    let quarter = r::<R>(1, 4);
    let t = terms.t_sum.clone();
    let gp = one.clone() + half.clone() * t.clone();
    b.at_least("per(A) >= 1 + T/2", per.clone(), gp.clone());
    b.at_least("1 + T/2 >= 0", gp.clone(), R::zero());
    let bound3 = one.clone() + t.clone() + quarter.clone() * t.square();
    b.at_least("per(A)^2 >= 1 + T + T^2/4", per.square(), bound3.clone());

    let t2q = quarter.clone() * t.square();
    let quarter_quartics = quarter.clone() * terms.quartic_sum();
    b.at_least(
        "T^2/4 >= (1/4) sum|.|^4 + (1/2)(|xw|^2 + |yu|^2 + |zt|^2)",
        t2q.clone(),
        quarter_quartics.clone() + half.clone() * terms.pair_sum.clone(),
    );
    let names = ["x", "y", "z", "t", "u", "w"];
    for (&(a, c), pair) in PAIRS.iter().zip(terms.pair_squares()) {
        b.at_least(
            format!("(|{0}|^4 + |{1}|^4)/2 >= |{0}{1}|^2", names[a], names[c]),
            half.clone() * (terms.squares[a].square() + terms.squares[c].square()),
            pair,
        );
    }
    b.at_least(
        "(1/4) sum|.|^4 + (1/2)(|xw|^2 + |yu|^2 + |zt|^2) >= |xw|^2 + |yu|^2 + |zt|^2",
        quarter_quartics + half.clone() * terms.pair_sum.clone(),
        terms.pair_sum.clone(),
    );

    let neg = (0..4)
        .find(|&i| terms.y[i] < R::zero())
        .expect("Case 2 chains need a negative y");
    let k = neg + 1;
    b.at_least(format!("1 + y{k} >= s{k}"), one.clone() + terms.y[neg].clone(), terms.s[neg].clone());
    b.at_least(format!("y{k} < 0 => 1 > s{k}"), one.clone(), terms.s[neg].clone());
    b.at_least(
        format!("s{k} >= |xw|^2 + |yu|^2 + |zt|^2"),
        terms.s[neg].clone(),
        terms.pair_sum.clone(),
    );
    for i in 0..4 {
        b.at_least(format!("1 >= s{}", i + 1), one.clone(), terms.s[i].clone());
    }

    b.lemma3(
        terms.pair_squares(),
        "|xw|^2 + |yu|^2 + |zt|^2 >= (|xw|^2 + |yu|^2 + |zt|^2)^2",
    );
    b.equal(
        "(|xw|^2 + |yu|^2 + |zt|^2)^2 = |xw|^4 + |yu|^4 + |zt|^4 + z5 + z6 + z7",
        terms.pair_sum.square(),
        terms.pair_quartic_sum() + terms.z[4].clone() + terms.z[5].clone() + terms.z[6].clone(),
    );
    b.at_least(
        "T^2/4 >= |xw|^4 + |yu|^4 + |zt|^4 + z5 + z6 + z7",
        t2q.clone(),
        terms.pair_quartic_sum() + terms.z[4].clone() + terms.z[5].clone() + terms.z[6].clone(),
    );

    for (i, idx) in super::S_SUPPORT.iter().enumerate() {
        let sq = idx.map(|k| terms.squares[k].clone());
        b.lemma3(sq, &format!("s{0} >= s{0}^2", i + 1));
    }
    let two = R::from_i64(2);
    b.equal("s1 + s2 + s3 + s4 = 2T", R::sum(terms.s.iter().cloned()), two.clone() * t.clone());
    let triples = R::sum((0..4).map(|i| terms.triple_product(i)));
    b.at_least(
        "2T >= 2 sum|.|^4 + 6(|xyt|^2 + |xzu|^2 + |yzw|^2 + |twu|^2)",
        two.clone() * t.clone(),
        two * terms.quartic_sum() + R::from_i64(6) * triples,
    );
    let z14 = R::sum(terms.z[..4].iter().cloned());
    b.at_least(
        "T >= sum|.|^4 + (3/2)(z1 + z2 + z3 + z4)",
        t.clone(),
        terms.quartic_sum() + r::<R>(3, 2) * z14,
    );
    b.at_least("1 + T + T^2/4 >= per(A o conj A)", bound3, per_hadamard_from_terms(terms));
}

fn build_trace<S: Scalar>(a: &CorrelationMatrix<S>, tol: f64) -> Result<ProofTrace<S>> {
    let entries = extract_entries(a)?;
    let terms = compute_terms(&entries);
    let class = classify_case(&terms);
    let per = real_permanent(a.matrix())?;
    let per_h = real_permanent(&hadamard_abs2(a.matrix()))?;

    let expansion_checks = vec![
        CheckResult::equal("expansion per(A) = per(A)", per_from_terms(&terms), per.clone(), tol),
        CheckResult::equal(
            "expansion per(A o conj A) = per(A o conj A)",
            per_hadamard_from_terms(&terms),
            per_h.clone(),
            tol,
        ),
    ];

    let mut b = ChainBuilder {
        tol,
        links: Vec::with_capacity(32),
        failed: Vec::new(),
    };
    if class.label.uses_case1_chain() {
        let m = class.max_index.expect("Case 1 chains have a governing index") - 1;
        case1_chain(&mut b, &terms, m, &per, class.label == CaseLabel::Case3ToCase1);
    } else {
        case2_chain(&mut b, &terms, &per);
    }
    b.at_least("per(A)^2 >= per(A o conj A)", per.square(), per_h);

    let mut trace = ProofTrace {
        entries,
        terms,
        case_label: class.label,
        max_index: class.max_index,
        links: b.links,
        expansion_checks,
        lemmas: None,
        failed_preconditions: b.failed,
        verdict: Verdict::Degenerate,
    };
    trace.settle_verdict();
    Ok(trace)
}

/// Classifies `A` and checks every link of the matching case chain.
pub fn verify_case_chain<S: Scalar>(a: &CorrelationMatrix<S>, tol: f64) -> Result<ProofTrace<S>> {
    build_trace(a, tol)
}

/// [`verify_case_chain`] with the Lemma 1 and Lemma 2 reports attached.
pub fn prove_trace<S: Scalar>(a: &CorrelationMatrix<S>, tol: f64) -> Result<ProofTrace<S>> {
    let mut trace = build_trace(a, tol)?;
    trace.lemmas = Some(LemmaReports {
        lemma1: verify_lemma1(a, tol)?,
        lemma2: verify_lemma2(a, tol)?,
    });
    trace.settle_verdict();
    Ok(trace)
}

/// Re-runs the trace in exact arithmetic on the exact rational image of a
/// float correlation matrix (unit diagonal pinned). Fails when that image is
/// not exactly positive semidefinite.
pub fn exact_recheck(a: &CorrelationMatrix<Complex64>) -> Result<ProofTrace<GaussRat>> {
    let exact = rationalize(a.matrix(), true).ok_or_else(|| Error::Parse("non-finite entry".into()))?;
    prove_trace(&CorrelationMatrix::new(exact)?, 0.0)
}
