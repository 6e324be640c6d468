// Batch check of per(A)^2 >= per(A o conj A), with exact adjudication of
// anything that fails in floating point.

use permcheck::cli::{cmd_check, CheckOptions, Form};
use permcheck::inequality::{check_chollet_reduced, DEFAULT_TOL};
use permcheck::io::Mode;
use permcheck::matrixlab::CorrelationMatrix;
use permcheck::{GaussRat, Rational, Real, SquareMatrix};

pub fn run_example() -> permcheck::Result<()> {
    let j4 = CorrelationMatrix::new(SquareMatrix::<GaussRat>::ones(4))?;
    let r = check_chollet_reduced(&j4, 0.0)?;
    assert_eq!(r.margin, Rational::from_i64(552));
    println!("J4: {} - {} = {}", r.lhs, r.rhs, r.margin);

    let report = cmd_check(&CheckOptions {
        n: 4,
        trials: 500,
        seed: 7,
        tol: DEFAULT_TOL,
        form: Form::Reduced,
        mode: Mode::Float,
    })?;
    let suite = &report.suites[0];
    println!(
        "{} checks, {} failures, min margin {:?} at trial {:?}",
        suite.checks, suite.failures, suite.min_margin, suite.min_margin_trial
    );
    Ok(())
}

fn main() -> permcheck::Result<()> {
    run_example()
}
