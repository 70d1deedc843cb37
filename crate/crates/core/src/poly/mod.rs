//! Multivariate polynomials, binary forms on P¹ and their Laurent
//! extensions, with a text parser and Gröbner bases.

mod binary;
pub mod groebner;
mod laurent;
pub(crate) mod multi;
mod parse;

pub use binary::{gcd_bin, resultant_bin, BinaryForm};
pub use groebner::{affine_solutions, groebner_basis, is_unit_ideal, normal_form};
pub use laurent::LaurentForm;
pub use multi::{Exponent, MultiPoly};
pub use parse::{parse_binary_form, parse_curve, parse_poly, parse_poly_affine, parse_scalar};
