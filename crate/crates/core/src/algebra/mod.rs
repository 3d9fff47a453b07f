//! Exact linear algebra over ℚ and ℚ(i).

mod matrix;
mod poly;
mod scalar;
mod subspace;

pub use matrix::Matrix;
pub use poly::{integrate_poly_segment, Poly, PolyMatrix};
pub use scalar::{q, rat, Field, Rational, Scalar};
pub use subspace::{induced_filtration_on_quotient, Quotient, RowSolver, Subspace};
