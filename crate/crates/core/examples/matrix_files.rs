// Round trip through the JSON matrix format.

use permcheck::cli::{cmd_perm, format_permanent};
use permcheck::io::{parse_matrix_str, MatrixFile};
use permcheck::permanent::Engine;
use permcheck::{GaussRat, Scalar, SquareMatrix};

pub fn run_example() -> permcheck::Result<()> {
    let m = SquareMatrix::from_fn(3, |i, j| if i == j { GaussRat::one() } else { GaussRat::from_ratios(1, 3, 0, 1) });
    let text = serde_json::to_string(&MatrixFile::from_matrix(&m))?;
    println!("{text}");
    let parsed = parse_matrix_str(&text)?;
    println!("per = {}", format_permanent(&cmd_perm(&parsed, Engine::Naive)?));
    Ok(())
}

fn main() -> permcheck::Result<()> {
    run_example()
}
