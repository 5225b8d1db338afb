//! Exact tools for Fano complete intersections of index one.
//!
//! * [`arith`]: exact rationals and binomials.
//! * [`poly`], [`field`], [`serial`]: sparse polynomials over GF(p) or the rationals.
//! * [`dimension`]: Gröbner bases, projective codimension, regular sequences.
//! * [`regularity`]: the regularity condition for a complete intersection at a point.
//! * [`families`]: degree tuples, theorem hypotheses, certificates.
//! * [`audit`]: exact re-evaluation of the inequalities behind the regularity theorem.

pub mod arith;
pub mod audit;
pub mod dimension;
pub mod error;
pub mod families;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod regularity;
pub mod serial;

pub use arith::{binomial, Rational};
pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, RationalField};
pub use poly::{random_poly, Monomial, MultiPoly};
