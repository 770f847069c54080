//! Exact invariants of the Hankel determinant hypersurface `det H_n = 0` and
//! of secant varieties of curves: block reductions, composition-indexed
//! stratifications, Hodge polynomials and Betti numbers of Milnor fibers,
//! monodromy and nearby-cycle tables, intersection cohomology of secant
//! varieties, and the de Rham-Koszul complex.

pub mod error;
pub mod cli;
pub mod cohomtables;
pub mod compositions;
pub mod drk;
pub mod exactalg;
pub mod hankel;
pub mod hodge;
pub mod strata;

pub use error::{AlgebraError, Error, Result};
