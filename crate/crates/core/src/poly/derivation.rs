//! Derivations on k[x] extending δ on the base field.

use std::collections::BTreeMap;

use super::context::{same_ring, Ring};
use super::field::FieldElement;
use super::polynomial::Polynomial;
use super::ratfun::RationalFunction;
use crate::error::PolyError;

/// δ on the ring: the parameter deltas come from the context, the variable
/// deltas gᵢ are stored here (one per variable, in context order).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DerivationSpec {
    ring: Ring,
    var_deltas: Vec<Polynomial>,
}

impl DerivationSpec {
    pub fn new(ring: &Ring, var_deltas: Vec<Polynomial>) -> Result<Self, PolyError> {
        if var_deltas.len() != ring.nvars() {
            return Err(PolyError::Arity {
                expected: ring.nvars(),
                found: var_deltas.len(),
            });
        }
        if var_deltas.iter().any(|g| !same_ring(g.ring(), ring)) {
            return Err(PolyError::ContextMismatch);
        }
        Ok(DerivationSpec {
            ring: ring.clone(),
            var_deltas,
        })
    }

    /// Every variable must appear exactly once in `deltas`.
    pub fn from_named(ring: &Ring, mut deltas: BTreeMap<String, Polynomial>) -> Result<Self, PolyError> {
        let mut out = Vec::with_capacity(ring.nvars());
        for v in ring.vars() {
            out.push(
                deltas
                    .remove(v)
                    .ok_or_else(|| PolyError::MissingDelta(v.clone()))?,
            );
        }
        if let Some(extra) = deltas.into_keys().next() {
            return Err(PolyError::UnknownVariable(extra));
        }
        Self::new(ring, out)
    }

    /// The zero vector field (δxᵢ = 0).
    pub fn zero(ring: &Ring) -> Self {
        DerivationSpec {
            ring: ring.clone(),
            var_deltas: vec![Polynomial::zero(ring); ring.nvars()],
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn var_deltas(&self) -> &[Polynomial] {
        &self.var_deltas
    }

    /// δ_s f = f^δ + Σᵢ ∂f/∂xᵢ · gᵢ, unreduced.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        debug_assert!(same_ring(f.ring(), &self.ring));
        let mut out = f.coeff_delta();
        for (i, g) in self.var_deltas.iter().enumerate() {
            if g.is_zero() || f.degree_in(i) == 0 {
                continue;
            }
            out = &out + &(&f.partial(i) * g);
        }
        out
    }

    /// Quotient rule on k(x).
    pub fn apply_rational(&self, phi: &RationalFunction) -> RationalFunction {
        let p = phi.numerator();
        let q = phi.denominator();
        if q.is_one() {
            return RationalFunction::from_polynomial(self.apply(p));
        }
        let dp = self.apply(p);
        let dq = self.apply(q);
        RationalFunction::new(&(&dp * q) - &(p * &dq), q * q).expect("nonzero denominator")
    }

    /// δ of a base-field element.
    pub fn apply_field(&self, a: &FieldElement) -> FieldElement {
        self.ring.delta_of(a)
    }
}

/// The three ring operations with explicit context checking.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(a: &Polynomial, b: &Polynomial, op: ArithOp) -> Result<Polynomial, PolyError> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
    }
}

pub fn partial_derivative(f: &Polynomial, var: &str) -> Result<Polynomial, PolyError> {
    f.partial_named(var)
}

/// f^δ, checked against the expected context.
pub fn coeff_delta(f: &Polynomial, ring: &Ring) -> Result<Polynomial, PolyError> {
    if !same_ring(f.ring(), ring) {
        return Err(PolyError::ContextMismatch);
    }
    Ok(f.coeff_delta())
}

pub fn derivation_apply(f: &Polynomial, d: &DerivationSpec) -> Result<Polynomial, PolyError> {
    if !same_ring(f.ring(), d.ring()) {
        return Err(PolyError::ContextMismatch);
    }
    Ok(d.apply(f))
}

pub fn evaluate(
    f: &Polynomial,
    point: &BTreeMap<String, FieldElement>,
) -> Result<FieldElement, PolyError> {
    f.evaluate_named(point)
}

pub fn rf_delta(phi: &RationalFunction, d: &DerivationSpec) -> Result<RationalFunction, PolyError> {
    if !same_ring(phi.ring(), d.ring()) {
        return Err(PolyError::ContextMismatch);
    }
    Ok(d.apply_rational(phi))
}
