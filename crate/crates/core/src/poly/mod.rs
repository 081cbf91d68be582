//! Sparse multivariate polynomials over exact fields.

mod matrix;
mod monomial;
mod parse;
mod polynomial;
mod resultant;
mod ring;
pub mod univariate;

pub use matrix::{det_bareiss, det_berkowitz, PolyMatrix};
pub use monomial::{Monomial, MonomialOrder};
pub use parse::{parse_poly, parse_poly_at};
pub use polynomial::Polynomial;
pub use resultant::{sylvester_matrix, sylvester_resultant};
pub use ring::Ring;
