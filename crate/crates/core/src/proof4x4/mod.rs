//! Executable form of the `n = 4` argument.
//!
//! A 4×4 correlation matrix is fixed in the layout
//!
//! ```text
//!     1   x   y   z
//!     x̄   1   t   u
//!     ȳ   t̄   1   w
//!     z̄   ū   w̄   1
//! ```
//!
//! and everything below is phrased in terms of the six entries
//! `(x, y, z, t, u, w)`: the closed forms of `per(A)` and `per(A∘Ā)`, the
//! three lemmas, and the case chains that bound `per(A∘Ā)` by `per(A)²`.

mod chain;
mod lemmas;

pub use chain::{
    classify_case, exact_recheck, prove_trace, verify_case_chain, CaseLabel, Classification, ProofTrace,
    Verdict,
};
pub use lemmas::{
    lemma1_identities, lemma2_identities, lemma3_check, lemma3_squares, verify_lemma1, verify_lemma2,
    Lemma1Report, Lemma2Report,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::matrixlab::CorrelationMatrix;
use crate::scalar::{Real, Scalar};

/// Positions of `x, y, z, t, u, w` in the upper triangle.
pub const ENTRY_POSITIONS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Entries (indices into `x, y, z, t, u, w`) whose squared magnitudes make up
/// `s₁ … s₄`; the entries of the 3×3 principal submatrices `A(4) … A(1)`.
pub const S_SUPPORT: [[usize; 3]; 4] = [[0, 1, 3], [0, 2, 4], [1, 2, 5], [3, 4, 5]];

/// The complementary pairs `(x, w)`, `(y, u)`, `(z, t)`.
pub const PAIRS: [(usize, usize); 3] = [(0, 5), (1, 4), (2, 3)];

/// The six off-diagonal entries of a 4×4 correlation matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntryVector<S> {
    pub x: S,
    pub y: S,
    pub z: S,
    pub t: S,
    pub u: S,
    pub w: S,
}

impl<S: Scalar> EntryVector<S> {
    pub fn from_array([x, y, z, t, u, w]: [S; 6]) -> Self {
        EntryVector { x, y, z, t, u, w }
    }

    pub fn as_array(&self) -> [&S; 6] {
        [&self.x, &self.y, &self.z, &self.t, &self.u, &self.w]
    }

    /// Reads the upper triangle of any 4×4 matrix, without validation.
    pub fn from_matrix(m: &SquareMatrix<S>) -> Result<Self> {
        if m.n() != 4 {
            return Err(Error::WrongDimension {
                expected: 4,
                got: m.n(),
            });
        }
        Ok(Self::from_array(ENTRY_POSITIONS.map(|(i, j)| m.get(i, j).clone())))
    }

    /// The patterned Hermitian matrix with unit diagonal built from the six
    /// entries. It is a correlation matrix only when the entries allow it.
    pub fn assemble(&self) -> SquareMatrix<S> {
        let mut m = SquareMatrix::identity(4);
        for ((i, j), v) in ENTRY_POSITIONS.iter().zip(self.as_array()) {
            m.set(*i, *j, v.clone());
            m.set(*j, *i, v.conj());
        }
        m
    }

    /// `|x|², |y|², …, |w|²`
    pub fn squares(&self) -> [S::Real; 6] {
        self.as_array().map(Scalar::norm_sqr)
    }
}

pub fn extract_entries<S: Scalar>(a: &CorrelationMatrix<S>) -> Result<EntryVector<S>> {
    EntryVector::from_matrix(a.matrix())
}

/// The derived real quantities: cross terms `y₁…y₇` of `per(A)`, cross terms
/// `z₁…z₇` of `per(A∘Ā)`, the triple sums `s₁…s₄`, `T` and the pair sum
/// `|xw|² + |yu|² + |zt|²`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct YZTerms<R> {
    pub y: [R; 7],
    pub z: [R; 7],
    pub s: [R; 4],
    #[serde(rename = "T")]
    pub t_sum: R,
    pub pair_sum: R,
    /// `|x|², …, |w|²`
    pub squares: [R; 6],
}

impl<R: Real> YZTerms<R> {
    /// `|x|⁴ + … + |w|⁴`
    pub fn quartic_sum(&self) -> R {
        R::sum(self.squares.iter().map(Real::square))
    }

    /// `|xw|⁴ + |yu|⁴ + |zt|⁴`
    pub fn pair_quartic_sum(&self) -> R {
        R::sum(self.pair_squares().iter().map(Real::square))
    }

    /// `|xw|², |yu|², |zt|²`
    pub fn pair_squares(&self) -> [R; 3] {
        PAIRS.map(|(a, b)| self.squares[a].clone() * self.squares[b].clone())
    }

    /// Sum of the squared magnitudes of the three entries behind `sᵢ`, each
    /// raised to the fourth power: `|x|⁴ + |y|⁴ + |t|⁴` for `i = 0`.
    pub fn triple_quartics(&self, i: usize) -> R {
        R::sum(S_SUPPORT[i].iter().map(|&k| self.squares[k].square()))
    }

    /// `|abc|²` for the triple behind `sᵢ` (e.g. `|xyt|²`).
    pub fn triple_product(&self, i: usize) -> R {
        S_SUPPORT[i]
            .iter()
            .fold(R::one(), |p, &k| p * self.squares[k].clone())
    }
}

fn two_re<S: Scalar>(factors: &[S]) -> S::Real {
    let prod = factors[1..]
        .iter()
        .fold(factors[0].clone(), |p, f| p * f.clone());
    S::Real::from_i64(2) * prod.re()
}

pub fn compute_terms<S: Scalar>(e: &EntryVector<S>) -> YZTerms<S::Real> {
    let EntryVector { x, y, z, t, u, w } = e.clone();
    let ys = [
        two_re(&[x.clone(), y.conj(), t.clone()]),
        two_re(&[x.clone(), u.clone(), z.conj()]),
        two_re(&[y.clone(), w.clone(), z.conj()]),
        two_re(&[t.clone(), w.clone(), u.conj()]),
        two_re(&[x.clone(), t.clone(), w.clone(), z.conj()]),
        two_re(&[y.clone(), t.conj(), u.clone(), z.conj()]),
        two_re(&[x, u, y.conj(), w.conj()]),
    ];
    let sq = e.squares();
    let two = S::Real::from_i64(2);
    let prod = |idx: &[usize]| idx.iter().fold(two.clone(), |p, &k| p * sq[k].clone());
    // x=0 y=1 z=2 t=3 u=4 w=5
    let zs = [
        prod(&[0, 1, 3]),
        prod(&[0, 4, 2]),
        prod(&[1, 5, 2]),
        prod(&[3, 5, 4]),
        prod(&[0, 5, 2, 3]),
        prod(&[1, 4, 2, 3]),
        prod(&[0, 5, 1, 4]),
    ];
    let s = S_SUPPORT.map(|idx| S::Real::sum(idx.iter().map(|&k| sq[k].clone())));
    let t_sum = S::Real::sum(sq.iter().cloned());
    let pair_sum = S::Real::sum(PAIRS.iter().map(|&(a, b)| sq[a].clone() * sq[b].clone()));
    YZTerms {
        y: ys,
        z: zs,
        s,
        t_sum,
        pair_sum,
        squares: sq,
    }
}

/// `1 + T + |xw|² + |yu|² + |zt|² + Σ yᵢ`
pub fn per_from_terms<R: Real>(terms: &YZTerms<R>) -> R {
    R::one() + terms.t_sum.clone() + terms.pair_sum.clone() + R::sum(terms.y.iter().cloned())
}

/// `1 + Σ|·|⁴ + |xw|⁴ + |yu|⁴ + |zt|⁴ + Σ zᵢ`
pub fn per_hadamard_from_terms<R: Real>(terms: &YZTerms<R>) -> R {
    R::one() + terms.quartic_sum() + terms.pair_quartic_sum() + R::sum(terms.z.iter().cloned())
}

/// Closed form of `per(A)` in the fixed layout.
pub fn expansion_per<S: Scalar>(e: &EntryVector<S>) -> S::Real {
    per_from_terms(&compute_terms(e))
}

/// Closed form of `per(A∘Ā)` in the fixed layout.
pub fn expansion_per_hadamard<S: Scalar>(e: &EntryVector<S>) -> S::Real {
    per_hadamard_from_terms(&compute_terms(e))
}
