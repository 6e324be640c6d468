// The same trace in exact arithmetic: every margin is a rational number.

use permcheck::matrixlab::{sample_correlation, sample_rational_correlation, SampleMethod};
use permcheck::proof4x4::{exact_recheck, prove_trace, Verdict};

pub fn run_example() -> permcheck::Result<()> {
    let a = sample_rational_correlation(4, 3, false, 9)?;
    let trace = prove_trace(&a, 0.0)?;
    println!("case {}: final margin {}", trace.case_label.as_str(), trace.final_check().margin);
    assert_eq!(trace.verdict, Verdict::Verified);

    // float input, re-run on its exact rational image
    let f = sample_correlation(4, 1, SampleMethod::GramUnitComplex)?;
    println!("exact image of a float sample: {:?}", exact_recheck(&f)?.verdict);

    // a singular sample usually loses exact PSD-ness when rounded
    let g = sample_correlation(4, 1, SampleMethod::RankDeficient(2))?;
    match exact_recheck(&g) {
        Ok(t) => println!("rank-2 sample: {:?}", t.verdict),
        Err(e) => println!("rank-2 sample: inconclusive ({e})"),
    }
    Ok(())
}

fn main() -> permcheck::Result<()> {
    run_example()
}
