// Sampling correlation matrices and inspecting their PSD certificates.

use permcheck::matrixlab::{is_psd, sample_correlation, sample_rational_correlation, SampleMethod, PSD_TOL};

pub fn run_example() -> permcheck::Result<()> {
    for method in [
        SampleMethod::GramUnitComplex,
        SampleMethod::GramUnitReal,
        SampleMethod::RankDeficient(2),
    ] {
        let a = sample_correlation(5, 11, method)?;
        let cert = a.certificate();
        println!("{method:?}: rank {} min pivot {:.3e}", cert.rank, cert.min_pivot());
    }

    let exact = sample_rational_correlation(4, 2, false, 3)?;
    let cert = is_psd(exact.matrix(), PSD_TOL)?;
    println!("exact rank-2 sample: psd={} rank={}", cert.psd, cert.rank);
    println!("a12 = {}", exact.matrix().get(0, 1));
    Ok(())
}

fn main() -> permcheck::Result<()> {
    run_example()
}
