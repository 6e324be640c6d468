// Case classification and chain margins for a sampled 4x4 matrix.

use permcheck::matrixlab::{sample_correlation, SampleMethod};
use permcheck::proof4x4::{prove_trace, Verdict};

pub fn run_example() -> permcheck::Result<()> {
    let a = sample_correlation(4, 42, SampleMethod::GramUnitComplex)?;
    let trace = prove_trace(&a, 1e-9)?;
    println!("case {} (m = {:?})", trace.case_label.as_str(), trace.max_index);
    for link in &trace.links {
        println!("  {:<50} {:+.6e}", link.context, link.margin);
    }
    assert_eq!(trace.verdict, Verdict::Verified);
    Ok(())
}

fn main() -> permcheck::Result<()> {
    run_example()
}
