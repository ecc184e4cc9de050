//! Exact polynomial arithmetic over a finitely generated differential field.

mod context;
mod derivation;
mod field;
mod monomial;
mod polynomial;
mod qpoly;
mod ratfun;

pub use context::{Ring, RingContext};
pub(crate) use context::same_ring;
pub use derivation::{
    coeff_delta, derivation_apply, evaluate, partial_derivative, poly_arith, rf_delta, ArithOp,
    DerivationSpec,
};
pub use field::FieldElement;
pub use monomial::{Monomial, MonomialOrder};
pub use polynomial::Polynomial;
pub use qpoly::{gcd as qpoly_gcd, QPoly, Rational};
pub use ratfun::RationalFunction;
pub(crate) use ratfun::flatten;
