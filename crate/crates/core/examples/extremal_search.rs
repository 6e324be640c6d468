// Hill climbing on per(A o conj A) / per(A)^2.

use permcheck::search::{hill_climb, SearchConfig};

pub fn run_example() -> permcheck::Result<()> {
    for n in [2, 4, 5] {
        let result = hill_climb(&SearchConfig::new(n, 2_000, 3, 1))?;
        println!(
            "n={n}: best ratio {:.12} (restart {}, {} evaluations)",
            result.best_ratio, result.best_restart, result.evaluations
        );
    }
    Ok(())
}

fn main() -> permcheck::Result<()> {
    run_example()
}
