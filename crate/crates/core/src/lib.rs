//! Exact differential-algebraic geometry of affine D-varieties.
//!
//! A D-variety is an affine variety `V` together with a section `s: V → τV`
//! of its prolongation; equivalently a derivation on the coordinate ring
//! k[V] extending the derivation on the base field k = ℚ(c₁,…,cₘ).
//!
//! The crate is layered bottom-up:
//!
//! - [`poly`]: exact polynomials and rational functions over k, and the
//!   derivation operators (f^δ, δ_s).
//! - [`ideal`]: Gröbner bases, normal forms with certificates, ideal and
//!   radical membership, elimination, Krull dimension.
//! - [`dvariety`]: tangent bundles, prolongations, section validation,
//!   induced derivations, D-subvarieties, D-points, products.
//! - [`ode`]: compiling a scalar ODE into a D-variety, type signatures.
//! - [`dmaps`]: D-rational maps, first integrals, Darboux polynomials,
//!   dominance and generic finiteness.
//! - [`expr`]: expression parser and canonical printer.

pub mod dmaps;
pub mod dvariety;
pub mod error;
pub mod expr;
pub mod ideal;
pub mod linalg;
pub mod ode;
pub mod poly;

pub use dvariety::{Claims, DVariety, DoubledVariety, Section, Variety};
pub use error::{DvarError, PolyError};
pub use ideal::{Dimension, GroebnerBasis, MembershipCertificate};
pub use poly::{
    DerivationSpec, FieldElement, Monomial, MonomialOrder, Polynomial, Rational, RationalFunction,
    Ring, RingContext,
};
