pub mod cli;
pub mod error;
pub mod fixtures;
pub mod inequality;
pub mod io;
pub mod matrix;
pub mod matrixlab;
pub mod parallel;
pub mod permanent;
pub mod proof4x4;
pub mod scalar;
pub mod search;

pub use error::{Error, Result};
pub use matrix::{Permutation, SquareMatrix};
pub use scalar::{GaussRat, Rational, Real, Realization, Scalar};
