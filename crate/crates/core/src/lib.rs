//! Exact verification of universal relations between correlation functions on
//! the big phase space.
//!
//! The crate has four layers:
//!
//! * [`expr`] — the expression data model: vector/scalar ASTs, pure-correlator
//!   polynomials with contracted dummy indices, canonical forms, parsing and
//!   printing. Everything downstream is built on canonical [`expr::TensorPoly`]
//!   values with exact rational coefficients.
//! * [`rewrite`] — definitional expansion to pure-correlator form, covariant
//!   differentiation, the directed topological-recursion rewrite system, and
//!   ideal-membership certification.
//! * [`tensors`] — the library of named tensors (`rho0`, `G`, `A1`, ...) and
//!   the catalog of identities they satisfy, with the moduli under which each
//!   identity is claimed.
//! * [`oracle`] — an independent numeric model (the point target) that
//!   evaluates any expression exactly at random rational points via
//!   psi-intersection numbers; used to falsify transcriptions and rules.
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod config;
pub mod expr;
pub mod oracle;
pub mod report;
pub mod rewrite;
pub mod tensors;

pub use config::{Bounds, EngineConfig};
pub use expr::{
    Correlator, DummyGen, DummyId, Rat, ScalarExpr, SlotName, TensorPoly, VArg, Variance,
    VectorExpr,
};
pub use report::Report;
pub use rewrite::{CertEntry, Ruleset};
pub use tensors::{catalog, IdentityStatement, Mode};
