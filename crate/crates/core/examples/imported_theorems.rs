// Lieb's block inequality and the Grone–Pierce bound on one sample.

use permcheck::inequality::{check_grone_pierce, check_lieb, DEFAULT_TOL};
use permcheck::matrixlab::{sample_correlation, PsdMatrix, SampleMethod};

pub fn run_example() -> permcheck::Result<()> {
    let a = sample_correlation(6, 5, SampleMethod::GramUnitComplex)?;
    let psd = PsdMatrix::new(a.matrix().clone())?;
    for k in 1..6 {
        let r = check_lieb(&psd, k, DEFAULT_TOL)?;
        println!("k={k}: per(A) - per(B)per(D) = {:.6}", r.bound.margin);
        assert!(r.holds());
    }
    let gp = check_grone_pierce(&a, DEFAULT_TOL)?;
    println!("grone-pierce margin = {:.6}", gp.margin);
    Ok(())
}

fn main() -> permcheck::Result<()> {
    run_example()
}
