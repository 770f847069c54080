//! Exact arithmetic: rationals, sparse multivariate polynomials, the
//! localization at one variable, and symbolic matrices.

mod echelon;
mod localized;
mod matrix;
mod poly;
mod rational;

pub use echelon::{sparse_rank, RowEchelon, SparseRow};
pub use localized::LocalizedPoly;
pub use matrix::{rational_det, PolyMatrix, COFACTOR_LIMIT};
pub use poly::{Monomial, MultiPoly};
pub use rational::Rational;

use crate::error::AlgebraError;

/// Exact determinant of a square matrix.
pub fn poly_det(m: &PolyMatrix) -> Result<LocalizedPoly, AlgebraError> {
    m.det()
}

pub fn poly_eval(p: &MultiPoly, point: &[Rational]) -> Result<Rational, AlgebraError> {
    p.eval(point)
}

pub fn homogeneous_components(p: &MultiPoly) -> std::collections::BTreeMap<u32, MultiPoly> {
    p.homogeneous_components()
}
