//! Margin-reporting checks for the permanent inequalities: Chollet's
//! inequality in pair and reduced form, Lieb's block inequality and the
//! Grone–Pierce lower bound.
//!
//! Float checks that fail beyond tolerance are never taken at face value:
//! [`adjudicate`] re-runs the check in exact arithmetic on the exact
//! rational image of the input.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::matrixlab::{
    diagonal_blocks, hadamard, hadamard_abs2, CorrelationMatrix, PsdMatrix,
};
use crate::permanent::permanent;
use crate::scalar::{GaussRat, Rational, Real, Scalar};

/// Default absolute tolerance on float margins.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `lhs ≥ rhs`, holds when `margin ≥ −tol`.
    AtLeast,
    /// `lhs = rhs`, holds when `|margin| ≤ tol`.
    Equal,
}

/// Verdict for one inequality or identity.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult<R> {
    pub context: String,
    pub relation: Relation,
    pub lhs: R,
    pub rhs: R,
    /// `lhs − rhs`
    pub margin: R,
    pub tol: f64,
    pub holds: bool,
}

impl<R: Real> CheckResult<R> {
    fn build(context: impl Into<String>, relation: Relation, lhs: R, rhs: R, tol: f64) -> Self {
        let tol = if R::EXACT { 0.0 } else { tol };
        let margin = lhs.clone() - rhs.clone();
        let tol_r = R::from_f64(tol).unwrap_or_else(R::zero);
        let holds = match relation {
            Relation::AtLeast => margin >= -tol_r,
            Relation::Equal => margin.abs() <= tol_r,
        };
        CheckResult {
            context: context.into(),
            relation,
            lhs,
            rhs,
            margin,
            tol,
            holds,
        }
    }

    pub fn at_least(context: impl Into<String>, lhs: R, rhs: R, tol: f64) -> Self {
        Self::build(context, Relation::AtLeast, lhs, rhs, tol)
    }

    pub fn equal(context: impl Into<String>, lhs: R, rhs: R, tol: f64) -> Self {
        Self::build(context, Relation::Equal, lhs, rhs, tol)
    }

    pub fn margin_f64(&self) -> f64 {
        self.margin.to_f64()
    }
}

/// Permanent of a matrix whose permanent is real in exact arithmetic.
///
/// Exact values must have zero imaginary part; float values may carry a
/// residue of at most `10⁻¹⁰·(1+|per|)`, which is then dropped.
pub fn real_permanent<S: Scalar>(m: &SquareMatrix<S>) -> Result<S::Real> {
    let p = permanent(m)?;
    let im = p.im();
    let bad = if S::Real::EXACT {
        !im.is_zero()
    } else {
        im.abs().to_f64() > 1e-10 * (1.0 + p.abs_f64())
    };
    if bad {
        return Err(Error::ImaginaryResidue {
            residue: im.to_f64(),
            value: p.re().to_f64(),
        });
    }
    Ok(p.re())
}

/// `per(A)·per(B) ≥ per(A∘B)`.
pub fn check_chollet_pair<S: Scalar>(
    a: &PsdMatrix<S>,
    b: &PsdMatrix<S>,
    tol: f64,
) -> Result<CheckResult<S::Real>> {
    let ab = hadamard(a.matrix(), b.matrix())?;
    let lhs = real_permanent(a.matrix())? * real_permanent(b.matrix())?;
    let rhs = real_permanent(&ab)?;
    Ok(CheckResult::at_least("per(A)per(B) >= per(A o B)", lhs, rhs, tol))
}

/// `per(A)² ≥ per(A∘Ā)`.
pub fn check_chollet_reduced<S: Scalar>(
    a: &CorrelationMatrix<S>,
    tol: f64,
) -> Result<CheckResult<S::Real>> {
    let per = real_permanent(a.matrix())?;
    let per_h = real_permanent(&hadamard_abs2(a.matrix()))?;
    Ok(CheckResult::at_least(
        "per(A)^2 >= per(A o conj A)",
        per.square(),
        per_h,
        tol,
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct LiebCheck<R> {
    /// `per(A) ≥ per(B)·per(D)`
    pub bound: CheckResult<R>,
    /// `per(B)·per(D) ≥ 0`
    pub nonnegative: CheckResult<R>,
}

impl<R: Real> LiebCheck<R> {
    pub fn holds(&self) -> bool {
        self.bound.holds && self.nonnegative.holds
    }
}

/// Lieb's inequality for the split `A = [[B, C], [C*, D]]` with `B` the
/// leading `k×k` block.
pub fn check_lieb<S: Scalar>(a: &PsdMatrix<S>, k: usize, tol: f64) -> Result<LiebCheck<S::Real>> {
    let n = a.n();
    if k == 0 || k >= n {
        return Err(Error::Precondition(format!("split index must satisfy 1 <= k < n, got k = {k}, n = {n}")));
    }
    let (lead, trail) = diagonal_blocks(a.matrix(), k);
    let product = real_permanent(&lead)? * real_permanent(&trail)?;
    let per = real_permanent(a.matrix())?;
    Ok(LiebCheck {
        bound: CheckResult::at_least(format!("per(A) >= per(B)per(D), k={k}"), per, product.clone(), tol),
        nonnegative: CheckResult::at_least(format!("per(B)per(D) >= 0, k={k}"), product, S::Real::zero(), tol),
    })
}

/// Grone–Pierce bound `per(A) ≥ (1/n)·Σᵢⱼ|Aᵢⱼ|²`.
pub fn check_grone_pierce<S: Scalar>(a: &CorrelationMatrix<S>, tol: f64) -> Result<CheckResult<S::Real>> {
    let n = a.n();
    let total = S::Real::sum(a.matrix().entries().iter().map(Scalar::norm_sqr));
    let rhs = total / S::Real::from_i64(n as i64);
    let per = real_permanent(a.matrix())?;
    Ok(CheckResult::at_least("per(A) >= (1/n) sum |A_ij|^2", per, rhs, tol))
}

/// Exact verdict on a float check that failed beyond tolerance.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Adjudication {
    /// The exact image of the input is a valid input and violates the bound.
    Confirmed { margin: Rational },
    /// The exact image satisfies the bound; the float failure was rounding.
    Refuted { margin: Rational },
    /// The exact image is not itself a valid input (e.g. not exactly PSD),
    /// so nothing can be concluded.
    Inconclusive { reason: String },
}

impl Adjudication {
    pub fn is_confirmed(&self) -> bool {
        matches!(self, Adjudication::Confirmed { .. })
    }
}

/// Exact image of a float matrix: the upper triangle is converted exactly,
/// the lower triangle is its conjugate, and the diagonal is either pinned to 1
/// or taken as the exact real part.
pub fn rationalize(m: &SquareMatrix<Complex64>, unit_diagonal: bool) -> Option<SquareMatrix<GaussRat>> {
    let n = m.n();
    let mut out = SquareMatrix::<GaussRat>::identity(n);
    for i in 0..n {
        if !unit_diagonal {
            out.set(i, i, GaussRat::from_real(Rational::from_f64(m.get(i, i).re)?));
        }
        for j in i + 1..n {
            let v = GaussRat::from_c64(*m.get(i, j))?;
            out.set(j, i, v.conj());
            out.set(i, j, v);
        }
    }
    Some(out)
}

/// Runs `check` on exact data and classifies the outcome.
pub fn adjudicate(check: impl FnOnce() -> Result<CheckResult<Rational>>) -> Adjudication {
    match check() {
        Ok(r) if r.holds => Adjudication::Refuted { margin: r.margin },
        Ok(r) => Adjudication::Confirmed { margin: r.margin },
        Err(e) => Adjudication::Inconclusive { reason: e.to_string() },
    }
}

pub fn adjudicate_reduced(a: &SquareMatrix<Complex64>) -> Adjudication {
    adjudicate(|| {
        let exact = rationalize(a, true).ok_or_else(|| Error::Parse("non-finite entry".into()))?;
        check_chollet_reduced(&CorrelationMatrix::new(exact)?, 0.0)
    })
}

pub fn adjudicate_pair(a: &SquareMatrix<Complex64>, b: &SquareMatrix<Complex64>) -> Adjudication {
    adjudicate(|| {
        let conv = |m| rationalize(m, false).ok_or_else(|| Error::Parse("non-finite entry".into()));
        check_chollet_pair(&PsdMatrix::new(conv(a)?)?, &PsdMatrix::new(conv(b)?)?, 0.0)
    })
}

pub fn adjudicate_lieb(a: &SquareMatrix<Complex64>, k: usize) -> Adjudication {
    adjudicate(|| {
        let exact = rationalize(a, false).ok_or_else(|| Error::Parse("non-finite entry".into()))?;
        let r = check_lieb(&PsdMatrix::new(exact)?, k, 0.0)?;
        Ok(if r.bound.holds { r.nonnegative } else { r.bound })
    })
}

pub fn adjudicate_grone_pierce(a: &SquareMatrix<Complex64>) -> Adjudication {
    adjudicate(|| {
        let exact = rationalize(a, true).ok_or_else(|| Error::Parse("non-finite entry".into()))?;
        check_grone_pierce(&CorrelationMatrix::new(exact)?, 0.0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrixlab::{sample_correlation, sample_rational_correlation, SampleMethod};
    use crate::permanent::permanent_naive;

    fn q(p: i64, d: i64) -> GaussRat {
        GaussRat::from_ratios(p, d, 0, 1)
    }

    fn half_matrix() -> SquareMatrix<GaussRat> {
        SquareMatrix::from_fn(4, |i, j| if i == j { q(1, 1) } else { q(1, 2) })
    }

    #[test]
    fn pair_landmarks() {
        let i4 = PsdMatrix::new(SquareMatrix::<GaussRat>::identity(4)).unwrap();
        assert_eq!(check_chollet_pair(&i4, &i4, 0.0).unwrap().margin, Rational::zero());
        let j4 = PsdMatrix::new(SquareMatrix::<GaussRat>::ones(4)).unwrap();
        assert_eq!(check_chollet_pair(&j4, &j4, 0.0).unwrap().margin, Rational::from_i64(552));
    }

    #[test]
    fn random_pair_holds() {
        for seed in 0..50 {
            let a = sample_correlation(4, seed, SampleMethod::GramUnitComplex).unwrap();
            let b = sample_correlation(4, seed + 1000, SampleMethod::GramUnitReal).unwrap();
            let r = check_chollet_pair(&a.clone().into(), &b.clone().into(), DEFAULT_TOL).unwrap();
            assert!(r.holds, "{r:?}");
            // brute-force cross-check of every term through the naive engine
            let per_a = permanent_naive(a.matrix()).unwrap().re;
            let per_b = permanent_naive(b.matrix()).unwrap().re;
            let per_ab = permanent_naive(&hadamard(a.matrix(), b.matrix()).unwrap()).unwrap().re;
            assert!((r.margin - (per_a * per_b - per_ab)).abs() < 1e-12);
        }
    }

    #[test]
    fn reduced_landmarks() {
        let i4 = CorrelationMatrix::new(SquareMatrix::<Complex64>::identity(4)).unwrap();
        assert!(check_chollet_reduced(&i4, DEFAULT_TOL).unwrap().margin.abs() <= 1e-12);
        let j4 = CorrelationMatrix::new(SquareMatrix::<GaussRat>::ones(4)).unwrap();
        assert_eq!(check_chollet_reduced(&j4, 0.0).unwrap().margin, Rational::from_i64(552));

        let half = CorrelationMatrix::new(half_matrix()).unwrap();
        let r = check_chollet_reduced(&half, 0.0).unwrap();
        assert_eq!(r.lhs, Rational::ratio(65 * 65, 256));
        let per_h = permanent_naive(&hadamard_abs2(half.matrix())).unwrap();
        assert_eq!(r.rhs, per_h.re);
        assert!(r.holds && r.margin > Rational::zero());
    }

    #[test]
    fn reduced_rejects_invalid_input() {
        let bad = SquareMatrix::from_fn(3, |i, j| if i == j { q(1, 1) } else { q(-1, 1) });
        assert!(CorrelationMatrix::new(bad).is_err());
    }

    #[test]
    fn lieb_landmarks() {
        // block-diagonal: C = 0
        let b = sample_rational_correlation(2, 2, false, 1).unwrap();
        let d = sample_rational_correlation(2, 2, false, 2).unwrap();
        let blk = SquareMatrix::from_fn(4, |i, j| match (i < 2, j < 2) {
            (true, true) => b.matrix().get(i, j).clone(),
            (false, false) => d.matrix().get(i - 2, j - 2).clone(),
            _ => GaussRat::zero(),
        });
        let r = check_lieb(&PsdMatrix::new(blk).unwrap(), 2, 0.0).unwrap();
        assert_eq!(r.bound.margin, Rational::zero());
        assert!(r.holds());

        let i4 = PsdMatrix::new(SquareMatrix::<Complex64>::identity(4)).unwrap();
        assert_eq!(check_lieb(&i4, 2, DEFAULT_TOL).unwrap().bound.margin, 0.0);
        assert!(check_lieb(&i4, 0, DEFAULT_TOL).is_err());
        assert!(check_lieb(&i4, 4, DEFAULT_TOL).is_err());

        for seed in 0..30 {
            let a = sample_correlation(4, seed, SampleMethod::GramUnitComplex).unwrap();
            let r = check_lieb(&a.clone().into(), 3, DEFAULT_TOL).unwrap();
            assert!(r.holds());
            let a4 = crate::matrixlab::principal_submatrix(a.matrix(), 3).unwrap();
            let expected = permanent_naive(&a4).unwrap().re;
            assert!((r.bound.rhs - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn grone_pierce_landmarks() {
        for n in 1..=6 {
            let i = CorrelationMatrix::new(SquareMatrix::<GaussRat>::identity(n)).unwrap();
            assert_eq!(check_grone_pierce(&i, 0.0).unwrap().margin, Rational::zero());
        }
        let j4 = CorrelationMatrix::new(SquareMatrix::<GaussRat>::ones(4)).unwrap();
        assert_eq!(check_grone_pierce(&j4, 0.0).unwrap().margin, Rational::from_i64(20));

        for seed in 0..30 {
            let a = sample_correlation(4, seed, SampleMethod::GramUnitComplex).unwrap();
            let m = a.matrix();
            let mut t = 0.0;
            for i in 0..4 {
                for j in i + 1..4 {
                    t += m.get(i, j).norm_sqr();
                }
            }
            let r = check_grone_pierce(&a, DEFAULT_TOL).unwrap();
            assert!((r.rhs - (1.0 + t / 2.0)).abs() < 1e-13);
            assert!(r.holds);
        }
    }

    #[test]
    fn adjudication_paths() {
        let a = sample_correlation(4, 3, SampleMethod::GramUnitReal).unwrap();
        match adjudicate_reduced(a.matrix()) {
            Adjudication::Refuted { margin } => assert!(margin >= Rational::zero()),
            other => panic!("unexpected {other:?}"),
        }
        // Not PSD once pinned to a unit diagonal.
        let bad = SquareMatrix::from_fn(3, |i, j| {
            Complex64::new(if i == j { 1.0 } else { -0.9 }, 0.0)
        });
        assert!(matches!(adjudicate_reduced(&bad), Adjudication::Inconclusive { .. }));
        assert!(matches!(
            adjudicate(|| Ok(CheckResult::at_least("x", Rational::zero(), Rational::one(), 0.0))),
            Adjudication::Confirmed { .. }
        ));
    }

    #[test]
    fn exact_results_have_zero_tolerance() {
        let r = CheckResult::at_least("x", Rational::zero(), Rational::ratio(1, 1_000_000_000_000), 1e-9);
        assert_eq!(r.tol, 0.0);
        assert!(!r.holds);
        let f = CheckResult::equal("y", 1.0, 1.0 + 1e-12, 1e-9);
        assert!(f.holds);
    }
}
