//! Frobenius modules over Laurent series rings and the Dwork construction.

mod arith;
pub mod error;
pub mod field;
pub mod linalg;
pub mod scalar;
pub mod series;
pub mod froblift;
pub mod fmodule;
pub mod dwork;
pub mod witt;
pub mod counterexample;
pub mod acceptance;
pub mod cli;

pub use error::{Error, Result};
