//! Truncated Witt vectors over Laurent series of characteristic `p` and
//! Artin-Schreier towers.

mod laurent;
mod table;
mod tower;
mod vec;

pub use laurent::{Fq, LaurentDoc, LaurentModP};
pub use table::{witt_polynomials, IntPoly, Monomial, WittPolyTable};
pub use tower::{solve_artin_schreier, ASTower, ASTowerDoc, GenExp, TowerElem, TowerElemDoc, DEFAULT_DEPTH_CAP};
pub use vec::{WittRing, WittVec, WittVecDoc};

pub const DEFAULT_LEN: usize = 6;

#[cfg(test)]
mod tests;
