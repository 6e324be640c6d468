//! Positive semidefinite and correlation matrices, plus the structural
//! operations used throughout the checker: Hadamard products, conjugation,
//! principal submatrices, permutation similarity and diagonal scaling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{Permutation, SquareMatrix};
use crate::scalar::{GaussRat, Rational, Real, Scalar};

/// Default relative tolerance on LDL* pivots (scaled by `n·max|Mᵢⱼ|`).
pub const PSD_TOL: f64 = 1e-10;
/// Allowed distance of a float diagonal entry from one.
pub const DIAG_TOL: f64 = 1e-12;

/// Record of a pivoted LDL* factorization attempt.
///
/// `pivots` are the accepted diagonal pivots in elimination order. When the
/// factorization stops early on a (numerically) zero trailing block, `rank`
/// is the number of pivots taken.
#[derive(Clone, Debug, Serialize)]
pub struct PsdCertificate<R> {
    pub psd: bool,
    pub pivots: Vec<R>,
    pub rank: usize,
    pub threshold: R,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl<R: Real> PsdCertificate<R> {
    /// Smallest accepted pivot, or zero for a rank-deficient factorization.
    pub fn min_pivot(&self) -> R {
        let mut min = if self.rank < self.pivots.len() || self.pivots.is_empty() {
            R::zero()
        } else {
            self.pivots[0].clone()
        };
        for p in &self.pivots {
            if *p < min {
                min = p.clone();
            }
        }
        min
    }
}

fn check_hermitian<S: Scalar>(m: &SquareMatrix<S>, tol: f64) -> Result<()> {
    let n = m.n();
    let scale = m.max_abs().max(1.0);
    for i in 0..n {
        for j in i..n {
            let diff = m.get(i, j).clone() - m.get(j, i).conj();
            let bad = if S::Real::EXACT {
                !diff.is_zero()
            } else {
                diff.abs_f64() > tol * scale
            };
            if bad {
                return Err(Error::NotHermitian {
                    i,
                    j,
                    residual: diff.abs_f64(),
                });
            }
        }
    }
    Ok(())
}

/// Decides positive semidefiniteness by diagonally pivoted LDL*.
///
/// Float matrices accept pivots down to `−tol·n·max|Mᵢⱼ|`; exact matrices use
/// exact rational pivots and `tol` is ignored. Once every remaining diagonal
/// entry is within the threshold of zero the trailing block must satisfy
/// `|Sᵢⱼ|² ≤ (|Sᵢᵢ|+θ)(|Sⱼⱼ|+θ)`, which for exact input forces it to vanish.
pub fn is_psd<S: Scalar>(m: &SquareMatrix<S>, tol: f64) -> Result<PsdCertificate<S::Real>> {
    check_hermitian(m, tol.max(PSD_TOL))?;
    let n = m.n();
    let threshold = if S::Real::EXACT {
        S::Real::zero()
    } else {
        S::Real::from_f64(tol * n as f64 * m.max_abs()).unwrap_or_else(S::Real::zero)
    };
    let mut work = m.clone();
    let mut active: Vec<usize> = (0..n).collect();
    let mut pivots = Vec::with_capacity(n);

    let reject = |pivots, reason: String, threshold| PsdCertificate {
        psd: false,
        rank: 0,
        pivots,
        threshold,
        reason: Some(reason),
    };

    while !active.is_empty() {
        let (pos, p) = active
            .iter()
            .enumerate()
            .map(|(pos, &i)| (pos, i))
            .fold(None::<(usize, usize)>, |best, (pos, i)| match best {
                Some((_, b)) if work.get(b, b).re() >= work.get(i, i).re() => best,
                _ => Some((pos, i)),
            })
            .expect("active set is non-empty");
        let d = work.get(p, p).re();
        if d < -threshold.clone() {
            let reason = format!("pivot {d} below -{threshold}");
            return Ok(reject(pivots, reason, threshold));
        }
        if d <= threshold {
            // Near-zero trailing block.
            for (a, &i) in active.iter().enumerate() {
                for &j in &active[a + 1..] {
                    let lhs = work.get(i, j).norm_sqr();
                    let rhs = (work.get(i, i).re().abs() + threshold.clone())
                        * (work.get(j, j).re().abs() + threshold.clone());
                    if lhs > rhs {
                        let reason = format!("singular trailing block has nonzero entry at ({i}, {j})");
                        return Ok(reject(pivots, reason, threshold));
                    }
                }
            }
            let rank = pivots.len();
            return Ok(PsdCertificate {
                psd: true,
                pivots,
                rank,
                threshold,
                reason: None,
            });
        }
        active.remove(pos);
        for &i in &active {
            let l = work.get(i, p).clone();
            if l.is_zero() {
                continue;
            }
            for &j in &active {
                let update = (l.clone() * work.get(p, j).clone()).scale(&(S::Real::one() / d.clone()));
                let v = work.get(i, j).clone() - update;
                work.set(i, j, v);
            }
        }
        pivots.push(d);
    }
    let rank = pivots.len();
    Ok(PsdCertificate {
        psd: true,
        pivots,
        rank,
        threshold,
        reason: None,
    })
}

/// Hermitian matrix that passed [`is_psd`].
#[derive(Clone, Debug, Serialize)]
pub struct PsdMatrix<S: Scalar> {
    matrix: SquareMatrix<S>,
    certificate: PsdCertificate<S::Real>,
}

impl<S: Scalar> PsdMatrix<S> {
    pub fn new(matrix: SquareMatrix<S>) -> Result<Self> {
        Self::with_tol(matrix, PSD_TOL)
    }

    pub fn with_tol(matrix: SquareMatrix<S>, tol: f64) -> Result<Self> {
        let certificate = is_psd(&matrix, tol)?;
        if !certificate.psd {
            return Err(Error::NotPsd(certificate.reason.unwrap_or_default()));
        }
        Ok(PsdMatrix { matrix, certificate })
    }

    pub fn matrix(&self) -> &SquareMatrix<S> {
        &self.matrix
    }

    pub fn certificate(&self) -> &PsdCertificate<S::Real> {
        &self.certificate
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn into_matrix(self) -> SquareMatrix<S> {
        self.matrix
    }
}

impl<S: Scalar> From<CorrelationMatrix<S>> for PsdMatrix<S> {
    fn from(c: CorrelationMatrix<S>) -> Self {
        PsdMatrix {
            matrix: c.matrix,
            certificate: c.certificate,
        }
    }
}

/// Hermitian PSD matrix with unit diagonal.
#[derive(Clone, Debug, Serialize)]
pub struct CorrelationMatrix<S: Scalar> {
    matrix: SquareMatrix<S>,
    certificate: PsdCertificate<S::Real>,
}

impl<S: Scalar> CorrelationMatrix<S> {
    pub fn new(matrix: SquareMatrix<S>) -> Result<Self> {
        Self::with_tol(matrix, PSD_TOL)
    }

    pub fn with_tol(matrix: SquareMatrix<S>, tol: f64) -> Result<Self> {
        let n = matrix.n();
        for i in 0..n {
            let d = matrix.get(i, i);
            let ok = if S::Real::EXACT {
                *d == S::one()
            } else {
                (d.clone() - S::one()).abs_f64() <= DIAG_TOL
            };
            if !ok {
                return Err(Error::NotCorrelation(format!(
                    "diagonal entry {i} is {:?}, expected 1",
                    d
                )));
            }
        }
        let certificate = is_psd(&matrix, tol)?;
        if !certificate.psd {
            return Err(Error::NotPsd(certificate.reason.unwrap_or_default()));
        }
        for i in 0..n {
            for j in 0..n {
                let v = matrix.get(i, j);
                let too_big = if S::Real::EXACT {
                    v.norm_sqr() > S::Real::one()
                } else {
                    v.abs_f64() > 1.0 + DIAG_TOL
                };
                if too_big {
                    return Err(Error::NotCorrelation(format!("|A[{i}][{j}]| exceeds 1")));
                }
            }
        }
        Ok(CorrelationMatrix { matrix, certificate })
    }

    pub fn matrix(&self) -> &SquareMatrix<S> {
        &self.matrix
    }

    pub fn certificate(&self) -> &PsdCertificate<S::Real> {
        &self.certificate
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn into_matrix(self) -> SquareMatrix<S> {
        self.matrix
    }
}

pub fn hadamard<S: Scalar>(a: &SquareMatrix<S>, b: &SquareMatrix<S>) -> Result<SquareMatrix<S>> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(SquareMatrix::from_fn(a.n(), |i, j| {
        a.get(i, j).clone() * b.get(i, j).clone()
    }))
}

pub fn conjugate<S: Scalar>(a: &SquareMatrix<S>) -> SquareMatrix<S> {
    a.map(Scalar::conj)
}

/// `A∘Ā`, whose entries are `|Aᵢⱼ|²`.
pub fn hadamard_abs2<S: Scalar>(a: &SquareMatrix<S>) -> SquareMatrix<S> {
    a.map(|v| S::from_real(v.norm_sqr()))
}

/// Deletes row and column `index` (0-based).
pub fn principal_submatrix<S: Scalar>(a: &SquareMatrix<S>, index: usize) -> Result<SquareMatrix<S>> {
    let n = a.n();
    if index >= n {
        return Err(Error::IndexOutOfRange { index, n });
    }
    let keep: Vec<usize> = (0..n).filter(|&k| k != index).collect();
    Ok(SquareMatrix::from_fn(n - 1, |i, j| a.get(keep[i], keep[j]).clone()))
}

/// `P A Pᵀ` for the permutation matrix of `sigma`: `B[i][j] = A[σ(i)][σ(j)]`.
pub fn permute_similarity<S: Scalar>(a: &SquareMatrix<S>, sigma: &Permutation) -> Result<SquareMatrix<S>> {
    if sigma.len() != a.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: sigma.len(),
        });
    }
    Ok(SquareMatrix::from_fn(a.n(), |i, j| {
        a.get(sigma.apply(i), sigma.apply(j)).clone()
    }))
}

/// Leading `k×k` block and trailing `(n−k)×(n−k)` block.
pub fn diagonal_blocks<S: Scalar>(a: &SquareMatrix<S>, k: usize) -> (SquareMatrix<S>, SquareMatrix<S>) {
    let n = a.n();
    let lead = SquareMatrix::from_fn(k, |i, j| a.get(i, j).clone());
    let trail = SquareMatrix::from_fn(n - k, |i, j| a.get(k + i, k + j).clone());
    (lead, trail)
}

/// Determinant by cofactor expansion along the first row (small `n` only).
pub fn determinant<S: Scalar>(a: &SquareMatrix<S>) -> Result<S> {
    let n = a.n();
    if n > 8 {
        return Err(Error::DimensionTooLarge {
            engine: "cofactor determinant",
            n,
            max: 8,
        });
    }
    fn det<S: Scalar>(a: &SquareMatrix<S>, rows: &[usize], cols: &[usize]) -> S {
        match rows.len() {
            0 => S::one(),
            1 => a.get(rows[0], cols[0]).clone(),
            _ => {
                let mut acc = S::zero();
                for (k, &c) in cols.iter().enumerate() {
                    let entry = a.get(rows[0], c);
                    if entry.is_zero() {
                        continue;
                    }
                    let minor_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                    let term = entry.clone() * det(a, &rows[1..], &minor_cols);
                    acc = if k % 2 == 0 { acc + term } else { acc - term };
                }
                acc
            }
        }
    }
    let idx: Vec<usize> = (0..n).collect();
    Ok(det(a, &idx, &idx))
}

/// Outcome of reducing a PSD matrix to a correlation matrix.
#[derive(Clone, Debug)]
pub enum Scaling<S: Scalar> {
    /// `C = D A D` with `D = diag(Aᵢᵢ^(−1/2))`. `diagonal` holds the `Aᵢᵢ`
    /// themselves so `per(A) = per(C)·Π Aᵢᵢ` can be evaluated exactly.
    Scaled {
        correlation: CorrelationMatrix<S>,
        diagonal: Vec<S::Real>,
        inv_sqrt: Vec<f64>,
    },
    /// A zero diagonal entry forces its whole row and column to vanish in a
    /// PSD matrix, so `per(A) = per(A∘Ā) = 0`.
    ZeroDiagonal { index: usize },
}

impl<S: Scalar> Scaling<S> {
    /// `Π Aᵢᵢ`, the factor relating `per(A)` to `per(C)`.
    pub fn diagonal_product(&self) -> S::Real {
        match self {
            Scaling::Scaled { diagonal, .. } => diagonal.iter().cloned().fold(S::Real::one(), |p, d| p * d),
            Scaling::ZeroDiagonal { .. } => S::Real::zero(),
        }
    }
}

pub fn scale_to_correlation<S: Scalar>(a: &PsdMatrix<S>) -> Result<Scaling<S>> {
    let m = a.matrix();
    let n = m.n();
    let diagonal: Vec<S::Real> = (0..n).map(|i| m.get(i, i).re()).collect();
    if let Some(index) = diagonal.iter().position(|d| *d <= S::Real::zero()) {
        return Ok(Scaling::ZeroDiagonal { index });
    }
    let roots = diagonal
        .iter()
        .map(|d| d.sqrt().ok_or_else(|| Error::NonSquareDiagonal(d.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let c = SquareMatrix::from_fn(n, |i, j| {
        if i == j {
            S::one()
        } else {
            m.get(i, j)
                .scale(&(S::Real::one() / (roots[i].clone() * roots[j].clone())))
        }
    });
    let inv_sqrt = roots.iter().map(|r| 1.0 / r.to_f64()).collect();
    Ok(Scaling::Scaled {
        correlation: CorrelationMatrix::new(c)?,
        diagonal,
        inv_sqrt,
    })
}

/// How [`sample_correlation`] draws its Gram vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleMethod {
    /// `n` uniform unit vectors in `ℂⁿ`.
    GramUnitComplex,
    /// `n` uniform unit vectors in `ℝⁿ`.
    GramUnitReal,
    /// `n` uniform unit vectors in `ℂᵏ`, giving rank at most `k`.
    RankDeficient(usize),
}

impl SampleMethod {
    /// Rotation used by the batch runners: complex, real, complex, then
    /// rank-deficient with `k` cycling through `1..n`. Requires `n ≥ 2`.
    pub fn cycled(n: usize, trial: u64) -> SampleMethod {
        match trial % 4 {
            0 | 2 => SampleMethod::GramUnitComplex,
            1 => SampleMethod::GramUnitReal,
            _ => SampleMethod::RankDeficient(1 + (trial / 4) as usize % (n - 1).max(1)),
        }
    }
}

pub(crate) fn unit_vector(rng: &mut impl Rng, dim: usize, real: bool) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = if real { 0.0 } else { rng.sample(StandardNormal) };
                Complex64::new(re, im)
            })
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Gram matrix `Aᵢⱼ = ⟨vᵢ, vⱼ⟩` of unit vectors, with the diagonal pinned to 1.
pub fn gram_matrix(vectors: &[Vec<Complex64>]) -> SquareMatrix<Complex64> {
    let n = vectors.len();
    SquareMatrix::from_fn(n, |i, j| {
        if i == j {
            Complex64::new(1.0, 0.0)
        } else {
            vectors[i]
                .iter()
                .zip(&vectors[j])
                .map(|(a, b)| a * b.conj())
                .sum()
        }
    })
}

/// Deterministic random correlation matrix for a given `(n, seed, method)`.
pub fn sample_correlation(n: usize, seed: u64, method: SampleMethod) -> Result<CorrelationMatrix<Complex64>> {
    if n == 0 {
        return Err(Error::Precondition("sample dimension must be at least 1".into()));
    }
    let (dim, real) = match method {
        SampleMethod::GramUnitComplex => (n, false),
        SampleMethod::GramUnitReal => (n, true),
        SampleMethod::RankDeficient(k) => {
            if k == 0 || k >= n {
                return Err(Error::Precondition(format!(
                    "rank-deficient sampling needs 1 <= k < n, got k = {k}, n = {n}"
                )));
            }
            (k, false)
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vectors: Vec<_> = (0..n).map(|_| unit_vector(&mut rng, dim, real)).collect();
    CorrelationMatrix::new(gram_matrix(&vectors))
}

fn rational_unit_vector(rng: &mut impl Rng, real_dim: usize) -> Vec<Rational> {
    // Inverse stereographic projection of a random rational point.
    let params: Vec<Rational> = (0..real_dim - 1)
        .map(|_| Rational::ratio(rng.random_range(-6..=6), rng.random_range(1..=6)))
        .collect();
    let norm2 = Rational::sum(params.iter().map(|a| a.square()));
    let denom = Rational::one() + norm2.clone();
    let two = Rational::from_i64(2);
    let mut v: Vec<Rational> = params
        .iter()
        .map(|a| (two.clone() * a.clone()) / denom.clone())
        .collect();
    v.push((norm2 - Rational::one()) / denom);
    v
}

/// Exact correlation matrix: Gram matrix of Gaussian-rational unit vectors in
/// `ℂ^dim` (or `ℝ^dim` when `real`), built from rational points on the sphere.
pub fn sample_rational_correlation(
    n: usize,
    dim: usize,
    real: bool,
    seed: u64,
) -> Result<CorrelationMatrix<GaussRat>> {
    if n == 0 || dim == 0 {
        return Err(Error::Precondition("dimensions must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vectors: Vec<Vec<GaussRat>> = (0..n)
        .map(|_| {
            if real {
                rational_unit_vector(&mut rng, dim)
                    .into_iter()
                    .map(GaussRat::from_real)
                    .collect()
            } else {
                let flat = rational_unit_vector(&mut rng, 2 * dim);
                flat.chunks(2)
                    .map(|c| GaussRat::new(c[0].clone(), c[1].clone()))
                    .collect()
            }
        })
        .collect();
    let m = SquareMatrix::from_fn(n, |i, j| {
        vectors[i]
            .iter()
            .zip(&vectors[j])
            .fold(GaussRat::zero(), |acc, (a, b)| acc + a.clone() * b.conj())
    });
    CorrelationMatrix::new(m)
}
