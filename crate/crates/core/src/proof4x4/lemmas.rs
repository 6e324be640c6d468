use serde::Serialize;

use super::{compute_terms, extract_entries, EntryVector, YZTerms};
use crate::error::{Error, Result};
use crate::inequality::{real_permanent, CheckResult};
use crate::matrix::Permutation;
use crate::matrixlab::{determinant, permute_similarity, principal_submatrix, CorrelationMatrix};
use crate::scalar::{Real, Scalar};

/// `1 + yᵢ − sᵢ` and `1 + yᵢ + sᵢ` for `i` in `0..4`.
fn lemma_sides<R: Real>(terms: &YZTerms<R>, i: usize) -> (R, R) {
    let base = R::one() + terms.y[i].clone();
    (base.clone() - terms.s[i].clone(), base + terms.s[i].clone())
}

/// `det(A(5−i)) = 1 + yᵢ − sᵢ` for `i = 1..4`, where `A(k)` deletes row and
/// column `k`. Holds for any entries, not only correlation matrices.
pub fn lemma1_identities<S: Scalar>(e: &EntryVector<S>, tol: f64) -> Result<Vec<CheckResult<S::Real>>> {
    let a = e.assemble();
    let terms = compute_terms(e);
    (0..4)
        .map(|i| {
            // A(5−i) for 1-based i = A(4−i) 0-based removal
            let minor = principal_submatrix(&a, 3 - i)?;
            let det = determinant(&minor)?.re();
            let (rhs, _) = lemma_sides(&terms, i);
            Ok(CheckResult::equal(
                format!("det(A({})) = 1 + y{} - s{}", 4 - i, i + 1, i + 1),
                det,
                rhs,
                tol,
            ))
        })
        .collect()
}

/// The four permanent identities behind the Lieb step:
/// `per(A(4)) = 1+y₁+s₁`, `per(A₂(4)) = 1+y₂+s₂` with `A₂ = P₍₃₄₎AP₍₃₄₎`,
/// `per(A₃(1)) = 1+y₃+s₃` with `A₃ = P₍₁₂₎AP₍₁₂₎`, and `per(A(1)) = 1+y₄+s₄`.
pub fn lemma2_identities<S: Scalar>(e: &EntryVector<S>, tol: f64) -> Result<Vec<CheckResult<S::Real>>> {
    let a = e.assemble();
    let terms = compute_terms(e);
    let a2 = permute_similarity(&a, &Permutation::transposition(4, 2, 3)?)?;
    let a3 = permute_similarity(&a, &Permutation::transposition(4, 0, 1)?)?;
    let cases = [
        ("per(A(4))", principal_submatrix(&a, 3)?),
        ("per(A2(4))", principal_submatrix(&a2, 3)?),
        ("per(A3(1))", principal_submatrix(&a3, 0)?),
        ("per(A(1))", principal_submatrix(&a, 0)?),
    ];
    cases
        .into_iter()
        .enumerate()
        .map(|(i, (label, minor))| {
            let (_, rhs) = lemma_sides(&terms, i);
            Ok(CheckResult::equal(
                format!("{label} = 1 + y{} + s{}", i + 1, i + 1),
                real_permanent(&minor)?,
                rhs,
                tol,
            ))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma1Report<R> {
    /// `1 + yᵢ ≥ sᵢ`
    pub margins: Vec<CheckResult<R>>,
    /// `det(A(5−i)) = 1 + yᵢ − sᵢ`
    pub identities: Vec<CheckResult<R>>,
}

impl<R: Real> Lemma1Report<R> {
    pub fn holds(&self) -> bool {
        self.margins.iter().chain(&self.identities).all(|c| c.holds)
    }
}

pub fn verify_lemma1<S: Scalar>(a: &CorrelationMatrix<S>, tol: f64) -> Result<Lemma1Report<S::Real>> {
    let e = extract_entries(a)?;
    let terms = compute_terms(&e);
    let margins = (0..4)
        .map(|i| {
            CheckResult::at_least(
                format!("1 + y{} >= s{}", i + 1, i + 1),
                S::Real::one() + terms.y[i].clone(),
                terms.s[i].clone(),
                tol,
            )
        })
        .collect();
    Ok(Lemma1Report {
        margins,
        identities: lemma1_identities(&e, tol)?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma2Report<R> {
    /// `per(A) ≥ 1 + yᵢ + sᵢ`
    pub bounds: Vec<CheckResult<R>>,
    /// `1 + yᵢ + sᵢ ≥ 0`
    pub nonnegative: Vec<CheckResult<R>>,
    pub identities: Vec<CheckResult<R>>,
}

impl<R: Real> Lemma2Report<R> {
    pub fn holds(&self) -> bool {
        self.bounds
            .iter()
            .chain(&self.nonnegative)
            .chain(&self.identities)
            .all(|c| c.holds)
    }
}

pub fn verify_lemma2<S: Scalar>(a: &CorrelationMatrix<S>, tol: f64) -> Result<Lemma2Report<S::Real>> {
    let e = extract_entries(a)?;
    let terms = compute_terms(&e);
    let per = real_permanent(a.matrix())?;
    let mut bounds = Vec::with_capacity(4);
    let mut nonnegative = Vec::with_capacity(4);
    for i in 0..4 {
        let (_, value) = lemma_sides(&terms, i);
        bounds.push(CheckResult::at_least(
            format!("per(A) >= 1 + y{} + s{}", i + 1, i + 1),
            per.clone(),
            value.clone(),
            tol,
        ));
        nonnegative.push(CheckResult::at_least(
            format!("1 + y{} + s{} >= 0", i + 1, i + 1),
            value,
            S::Real::zero(),
            tol,
        ));
    }
    Ok(Lemma2Report {
        bounds,
        nonnegative,
        identities: lemma2_identities(&e, tol)?,
    })
}

/// `p ≥ p²` for `p = a² + b² + c² ≤ 1`, stated on the squares `a², b², c²`.
///
/// The right-hand side is evaluated in expanded form
/// `a⁴ + b⁴ + c⁴ + 2(a²b² + a²c² + b²c²)` and cross-checked against `p²`.
/// The precondition admits `p ≤ 1 + tol` in float mode.
pub fn lemma3_squares<R: Real>(a2: R, b2: R, c2: R, tol: f64, context: &str) -> Result<CheckResult<R>> {
    let p = a2.clone() + b2.clone() + c2.clone();
    let slack = if R::EXACT { R::zero() } else { R::from_f64(tol).unwrap_or_else(R::zero) };
    if p > R::one() + slack {
        return Err(Error::Precondition(format!(
            "{context}: a^2 + b^2 + c^2 = {p} exceeds 1"
        )));
    }
    let two = R::from_i64(2);
    let expanded = a2.square()
        + b2.square()
        + c2.square()
        + two * (a2.clone() * b2.clone() + a2 * c2.clone() + b2 * c2);
    let squared = p.square();
    let residual = (expanded.clone() - squared).abs();
    let agree = if R::EXACT {
        residual.is_zero()
    } else {
        residual.to_f64() <= 1e-14
    };
    assert!(agree, "expanded and squared forms disagree by {residual}");
    Ok(CheckResult::at_least(context, p, expanded, tol))
}

/// Scalar form on `a, b, c` themselves.
pub fn lemma3_check(a: f64, b: f64, c: f64, tol: f64) -> Result<CheckResult<f64>> {
    lemma3_squares(a * a, b * b, c * c, tol, "a^2+b^2+c^2 >= (a^2+b^2+c^2)^2")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::SquareMatrix;
    use crate::matrixlab::{sample_correlation, SampleMethod};
    use crate::scalar::{GaussRat, Rational};
    use num_complex::Complex64;

    #[test]
    fn lemma1_identity_matrix() {
        let i4 = CorrelationMatrix::new(SquareMatrix::<GaussRat>::identity(4)).unwrap();
        let r = verify_lemma1(&i4, 0.0).unwrap();
        assert!(r.holds());
        for c in &r.margins {
            assert_eq!(c.margin, Rational::one());
        }
        for c in &r.identities {
            assert_eq!(c.lhs, Rational::one());
            assert_eq!(c.rhs, Rational::one());
        }
    }

    #[test]
    fn lemma1_rank_one_is_tight() {
        let a = sample_correlation(4, 21, SampleMethod::RankDeficient(1)).unwrap();
        let r = verify_lemma1(&a, 1e-9).unwrap();
        assert!(r.holds());
        for (m, id) in r.margins.iter().zip(&r.identities) {
            // singular 3×3 minors
            assert!(id.lhs.abs() < 1e-12);
            assert!(m.margin.abs() < 1e-12);
        }
    }

    #[test]
    fn lemma1_half_matrix() {
        let half = SquareMatrix::from_fn(4, |i, j| {
            if i == j { GaussRat::one() } else { GaussRat::from_ratios(1, 2, 0, 1) }
        });
        let r = verify_lemma1(&CorrelationMatrix::new(half).unwrap(), 0.0).unwrap();
        for c in &r.margins {
            assert_eq!(c.margin, Rational::ratio(1, 2));
        }
    }

    #[test]
    fn lemma2_landmarks() {
        let i4 = CorrelationMatrix::new(SquareMatrix::<GaussRat>::identity(4)).unwrap();
        let r = verify_lemma2(&i4, 0.0).unwrap();
        assert!(r.holds());
        assert!(r.bounds.iter().all(|c| c.margin == Rational::zero()));

        let j4 = CorrelationMatrix::new(SquareMatrix::<GaussRat>::ones(4)).unwrap();
        let r = verify_lemma2(&j4, 0.0).unwrap();
        assert!(r.holds());
        for c in &r.bounds {
            assert_eq!(c.rhs, Rational::from_i64(6));
            assert_eq!(c.margin, Rational::from_i64(18));
        }

        let half = SquareMatrix::from_fn(4, |i, j| {
            if i == j { GaussRat::one() } else { GaussRat::from_ratios(1, 2, 0, 1) }
        });
        let r = verify_lemma2(&CorrelationMatrix::new(half).unwrap(), 0.0).unwrap();
        for c in &r.bounds {
            assert_eq!(c.lhs, Rational::ratio(65, 16));
            assert_eq!(c.rhs, Rational::from_i64(2));
        }
    }

    #[test]
    fn lemma2_on_float_samples() {
        for seed in 0..20 {
            let a = sample_correlation(4, seed, SampleMethod::GramUnitComplex).unwrap();
            assert!(verify_lemma2(&a, 1e-9).unwrap().holds());
        }
    }

    #[test]
    fn lemma3_examples() {
        assert_eq!(lemma3_check(0.0, 0.0, 0.0, 1e-9).unwrap().margin, 0.0);
        let v = (1.0f64 / 3.0).sqrt();
        let r = lemma3_check(v, v, v, 1e-9).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12 && (r.rhs - 1.0).abs() < 1e-12 && r.margin.abs() < 1e-12);
        assert_eq!(lemma3_check(0.5, 0.0, 0.0, 1e-9).unwrap().margin, 3.0 / 16.0);
        let big = 1.01f64.sqrt();
        assert!(matches!(lemma3_check(big, 0.0, 0.0, 1e-9), Err(Error::Precondition(_))));
    }

    #[test]
    fn lemma3_exact_rejects_just_above_one() {
        let tiny = Rational::ratio(1, 1_000_000_000_000);
        let err = lemma3_squares(Rational::one() + tiny, Rational::zero(), Rational::zero(), 1e-9, "x");
        assert!(err.is_err());
    }

    #[test]
    fn wrong_dimension() {
        let i3 = CorrelationMatrix::new(SquareMatrix::<Complex64>::identity(3)).unwrap();
        assert!(verify_lemma1(&i3, 1e-9).is_err());
        assert!(verify_lemma2(&i3, 1e-9).is_err());
    }
}
