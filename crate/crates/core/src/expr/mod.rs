//! Expression data model: ASTs, pure-correlator polynomials, canonical
//! forms, parsing and printing.

pub mod arg;
pub mod ast;
pub mod canon;
pub mod parse;
pub mod poly;
pub mod print;

/// Exact rational scalar. Always reduced, positive denominator; the crate
/// never touches floating point.
pub type Rat = num::BigRational;

pub use arg::{Base, Correlator, DummyId, Family, SlotName, VArg, Variance};
pub use ast::{
    bullet, corr, gdn, gup, nabla, prod, scale, slotv, sum, symmetrize, tau_minus, tau_plus, tee,
    tensor_ref, DummyGen, Expr, ScalarExpr, VectorExpr,
};
pub use canon::{canonical_factors, dummy_ids, remap_dummies, CanonError};
pub use parse::{parse, parse_with_tensors, ParseError};
pub use poly::TensorPoly;
pub use print::{print_correlator, print_poly, print_rat};

use num::BigInt;

/// `n` as a rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n/d` as a rational.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}
