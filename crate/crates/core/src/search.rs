//! Gradient-free search for correlation matrices that push
//! `per(A∘Ā) / per(A)²` as high as possible.
//!
//! Candidates are Gram matrices of unit vectors, so every point visited is a
//! correlation matrix without any projection step.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::inequality::{adjudicate_reduced, real_permanent, Adjudication, DEFAULT_TOL};
use crate::io::MatrixFile;
use crate::matrixlab::{gram_matrix, hadamard_abs2, unit_vector, CorrelationMatrix};

/// Improvements smaller than this are treated as plateaus.
pub const MIN_IMPROVEMENT: f64 = 1e-15;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchConfig {
    pub n: usize,
    pub iterations: u64,
    pub restarts: u64,
    pub seed: u64,
    pub initial_step: f64,
    pub shrink: f64,
    pub target_ratio: f64,
}

impl SearchConfig {
    pub fn new(n: usize, iterations: u64, restarts: u64, seed: u64) -> Self {
        SearchConfig {
            n,
            iterations,
            restarts,
            seed,
            initial_step: 0.3,
            shrink: 0.7,
            target_ratio: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Precondition(format!("search needs n >= 2, got {}", self.n)));
        }
        if self.iterations == 0 || self.restarts == 0 {
            return Err(Error::Precondition("iterations and restarts must be at least 1".into()));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(Error::Precondition(format!("shrink must lie in (0, 1), got {}", self.shrink)));
        }
        if self.initial_step.is_nan() || self.initial_step <= 0.0 {
            return Err(Error::Precondition("initial step must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub best_matrix: CorrelationMatrix<Complex64>,
    pub best_ratio: f64,
    pub best_restart: u64,
    /// Best ratio reached by each restart, in restart order.
    pub history: Vec<f64>,
    pub evaluations: u64,
    /// Exact verdict when a ratio above `1 + 10⁻⁹` shows up at `n ≤ 4`.
    pub counterexample: Option<Adjudication>,
}

impl Serialize for SearchResult {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(rename_all = "camelCase")]
        struct Repr<'a> {
            best_matrix: MatrixFile,
            best_ratio: f64,
            best_restart: u64,
            history: &'a [f64],
            evaluations: u64,
            #[serde(skip_serializing_if = "Option::is_none")]
            counterexample: &'a Option<Adjudication>,
        }
        Repr {
            best_matrix: MatrixFile::from_matrix(self.best_matrix.matrix()),
            best_ratio: self.best_ratio,
            best_restart: self.best_restart,
            history: &self.history,
            evaluations: self.evaluations,
            counterexample: &self.counterexample,
        }
        .serialize(serializer)
    }
}

/// `per(A∘Ā) / per(A)²`.
pub fn ratio(a: &CorrelationMatrix<Complex64>) -> Result<f64> {
    let per = real_permanent(a.matrix())?;
    let per_h = real_permanent(&hadamard_abs2(a.matrix()))?;
    Ok(per_h / (per * per))
}

struct RestartOutcome {
    matrix: CorrelationMatrix<Complex64>,
    ratio: f64,
    evaluations: u64,
}

fn evaluate(vectors: &[Vec<Complex64>]) -> Option<(CorrelationMatrix<Complex64>, f64)> {
    let a = CorrelationMatrix::new(gram_matrix(vectors)).ok()?;
    let r = ratio(&a).ok()?;
    r.is_finite().then_some((a, r))
}

/// Random step of length `step` in the tangent space at `v`, renormalized.
fn perturb(v: &[Complex64], step: f64, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let g: Vec<Complex64> = v
        .iter()
        .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    let overlap: Complex64 = v.iter().zip(&g).map(|(a, b)| a.conj() * b).sum();
    let tangent: Vec<Complex64> = g.iter().zip(v).map(|(b, a)| b - overlap * a).collect();
    let tnorm = tangent.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
    let moved: Vec<Complex64> = v
        .iter()
        .zip(&tangent)
        .map(|(a, d)| a + d * (step / tnorm))
        .collect();
    let norm = moved.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    moved.into_iter().map(|z| z / norm).collect()
}

fn run_restart(config: &SearchConfig, restart: u64) -> RestartOutcome {
    let n = config.n;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ restart);
    let (mut vectors, mut current) = loop {
        let vs: Vec<Vec<Complex64>> = (0..n).map(|_| unit_vector(&mut rng, n, false)).collect();
        if let Some((a, r)) = evaluate(&vs) {
            break (vs, (a, r));
        }
    };
    let mut evaluations = 1;
    let mut step = config.initial_step;
    let mut rejections = 0;
    for it in 0..config.iterations {
        if current.1 > config.target_ratio {
            break;
        }
        let k = (it % n as u64) as usize;
        let candidate = perturb(&vectors[k], step, &mut rng);
        let previous = std::mem::replace(&mut vectors[k], candidate);
        evaluations += 1;
        match evaluate(&vectors) {
            Some((a, r)) if r > current.1 + MIN_IMPROVEMENT => {
                current = (a, r);
                rejections = 0;
            }
            _ => {
                vectors[k] = previous;
                rejections += 1;
                if rejections >= n {
                    step *= config.shrink;
                    rejections = 0;
                }
            }
        }
    }
    RestartOutcome {
        matrix: current.0,
        ratio: current.1,
        evaluations,
    }
}

/// Hill climbing over Gram parameterizations. Restarts run in parallel with
/// seeds `seed ⊕ restart`; the winner is the largest ratio, ties to the
/// smallest restart index.
pub fn hill_climb(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let outcomes: Vec<RestartOutcome> = (0..config.restarts)
        .into_par_iter()
        .map(|r| run_restart(config, r))
        .collect();
    let history: Vec<f64> = outcomes.iter().map(|o| o.ratio).collect();
    let evaluations = outcomes.iter().map(|o| o.evaluations).sum();
    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.ratio > outcomes[best].ratio {
            best = i;
        }
    }
    let winner = outcomes.into_iter().nth(best).expect("at least one restart");
    let counterexample = (config.n <= 4 && winner.ratio > 1.0 + DEFAULT_TOL)
        .then(|| adjudicate_reduced(winner.matrix.matrix()));
    Ok(SearchResult {
        best_matrix: winner.matrix,
        best_ratio: winner.ratio,
        best_restart: best as u64,
        history,
        evaluations,
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::SquareMatrix;
    use crate::scalar::Scalar;

    #[test]
    fn ratio_landmarks() {
        let i4 = CorrelationMatrix::new(SquareMatrix::<Complex64>::identity(4)).unwrap();
        assert_eq!(ratio(&i4).unwrap(), 1.0);
        let j4 = CorrelationMatrix::new(SquareMatrix::<Complex64>::ones(4)).unwrap();
        assert!((ratio(&j4).unwrap() - 1.0 / 24.0).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::new(1, 10, 1, 0).validate().is_err());
        assert!(SearchConfig::new(3, 0, 1, 0).validate().is_err());
        let mut c = SearchConfig::new(3, 10, 1, 0);
        c.shrink = 1.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn perturbation_stays_on_sphere() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v = unit_vector(&mut rng, 5, false);
        let w = perturb(&v, 0.3, &mut rng);
        let norm: f64 = w.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-14);
    }

    #[test]
    fn small_run_is_deterministic_and_consistent() {
        let cfg = SearchConfig::new(4, 300, 3, 9);
        let a = hill_climb(&cfg).unwrap();
        let b = hill_climb(&cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(a.best_ratio <= 1.0 + 1e-9);
        assert!((ratio(&a.best_matrix).unwrap() - a.best_ratio).abs() <= 1e-9);
        assert!(a.counterexample.is_none());
        assert_eq!(a.history.len(), 3);
        assert!(a.best_matrix.matrix().entries().iter().all(|z| z.abs_f64() <= 1.0 + 1e-12));
    }

    #[test]
    fn two_by_two_climbs_towards_identity() {
        let r = hill_climb(&SearchConfig::new(2, 3000, 2, 1)).unwrap();
        assert!(r.best_ratio >= 0.999, "{}", r.best_ratio);
    }
}
