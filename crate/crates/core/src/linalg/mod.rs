//! Exact dense linear algebra over ℚ and 𝔽_p.

mod matrix;
mod subspace;
pub mod vector;

pub use matrix::Matrix;
pub use subspace::{solve_affine, AffineSolution, Echelon, LinearSystem, Quotient, Subspace};
