// Naive and Ryser permanents on exact and float inputs.

use num_complex::Complex64;
use permcheck::permanent::{permanent_naive, permanent_ryser};
use permcheck::{GaussRat, SquareMatrix};

pub fn run_example() -> permcheck::Result<()> {
    let j4 = SquareMatrix::<GaussRat>::ones(4);
    println!("per(J4) = {}", permanent_ryser(&j4)?);

    let m = SquareMatrix::from_fn(5, |i, j| GaussRat::from_ratios(i as i64 + 1, j as i64 + 2, j as i64 - i as i64, 3));
    let naive = permanent_naive(&m)?;
    let ryser = permanent_ryser(&m)?;
    assert_eq!(naive, ryser);
    println!("exact 5x5: {naive}");

    let f = SquareMatrix::from_fn(12, |i, j| Complex64::new(((i * j) % 5) as f64 / 4.0, (i as f64 - j as f64) / 10.0));
    println!("float 12x12: {}", permanent_ryser(&f)?);
    Ok(())
}

fn main() -> permcheck::Result<()> {
    run_example()
}
