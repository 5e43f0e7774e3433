//! Exact computation of minimal faithful upper-triangular matrix
//! representations of finite-dimensional solvable Lie algebras: the
//! invariant (smallest matrix size admitting a faithful triangular
//! embedding) together with an explicit representative, plus a
//! verified catalog of low-dimensional algebras and representatives.

pub mod algebra;
pub mod catalog;
pub mod format;
pub mod gauss;
pub mod poly;
pub mod scalar;
pub mod solver;
pub mod triangular;
