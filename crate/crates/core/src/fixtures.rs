//! Seeded random inputs for identity suites: Gaussian rationals with small
//! numerators and denominators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::SquareMatrix;
use crate::proof4x4::EntryVector;
use crate::scalar::GaussRat;

/// `p/q + (r/s)i` with `p, r ∈ [−9, 9]` and `q, s ∈ [1, 9]`.
pub fn random_gauss(rng: &mut impl Rng) -> GaussRat {
    GaussRat::from_ratios(
        rng.random_range(-9..=9),
        rng.random_range(1..=9),
        rng.random_range(-9..=9),
        rng.random_range(1..=9),
    )
}

pub fn random_exact_matrix(n: usize, seed: u64) -> SquareMatrix<GaussRat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SquareMatrix::from_fn(n, |_, _| random_gauss(&mut rng))
}

/// Six unconstrained Gaussian-rational entries; the patterned matrix they
/// assemble to is Hermitian but generally not PSD.
pub fn random_entry_vector(seed: u64) -> EntryVector<GaussRat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    EntryVector::from_array(std::array::from_fn(|_| random_gauss(&mut rng)))
}
