//! Scalar ODEs δ^L x = num/den or P(x, δx, …, δ^L x) = 0 turned into
//! D-varieties.
//!
//! The jet variables u₀..u_L stand for x, δx, …, δ^L x. The compiled variety
//! lives on the jets below the top one plus a localizing variable `w` that
//! inverts the resolvent (`den` in the explicit form, ∂P/∂u_L in the
//! implicit one), which keeps the section polynomial.

use std::collections::BTreeMap;

use crate::dvariety::{validate_section, Claims, DVariety, Section, Variety};
use crate::error::{DvarError, PolyError};
use crate::poly::{
    flatten, qpoly_gcd, same_ring, DerivationSpec, FieldElement, MonomialOrder, Polynomial, QPoly,
    RationalFunction, Ring, RingContext,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OdeForm {
    /// δ^L x = num/den, with num and den free of u_L.
    Explicit { num: Polynomial, den: Polynomial },
    /// P(u₀, …, u_L) = 0 with ∂P/∂u_L ≠ 0.
    Implicit(Polynomial),
}

/// An order-L equation over a ring whose variables are exactly u₀..u_L.
#[derive(Clone, Debug)]
pub struct OdeSpec {
    ring: Ring,
    order: usize,
    form: OdeForm,
}

/// Ring with jet variables `{prefix}0 .. {prefix}{order}` over the base
/// field of `base`.
pub fn jet_ring(base: &RingContext, order: usize, prefix: &str) -> Result<Ring, PolyError> {
    let names: Vec<String> = (0..=order).map(|i| format!("{prefix}{i}")).collect();
    base.with_vars(&names)
}

impl OdeSpec {
    pub fn new(ring: &Ring, order: usize, form: OdeForm) -> Result<Self, DvarError> {
        if order == 0 {
            return Err(DvarError::Degenerate("order must be at least 1".into()));
        }
        if ring.nvars() != order + 1 {
            return Err(PolyError::Arity {
                expected: order + 1,
                found: ring.nvars(),
            }
            .into());
        }
        match &form {
            OdeForm::Explicit { num, den } => {
                if !same_ring(num.ring(), ring) || !same_ring(den.ring(), ring) {
                    return Err(PolyError::ContextMismatch.into());
                }
                if den.is_zero() {
                    return Err(PolyError::ZeroDenominator.into());
                }
                if num.degree_in(order) > 0 || den.degree_in(order) > 0 {
                    return Err(DvarError::Degenerate(format!(
                        "the right-hand side may not involve {}",
                        ring.vars()[order]
                    )));
                }
            }
            OdeForm::Implicit(p) => {
                if !same_ring(p.ring(), ring) {
                    return Err(PolyError::ContextMismatch.into());
                }
                if p.degree_in(order) == 0 {
                    return Err(DvarError::Degenerate(format!(
                        "the equation does not involve {}",
                        ring.vars()[order]
                    )));
                }
            }
        }
        Ok(OdeSpec {
            ring: ring.clone(),
            order,
            form,
        })
    }

    /// δ^L x = f given as a rational function of the lower jets.
    pub fn explicit(ring: &Ring, order: usize, rhs: &RationalFunction) -> Result<Self, DvarError> {
        let form = OdeForm::Explicit {
            num: rhs.numerator().clone(),
            den: rhs.denominator().clone(),
        };
        Self::new(ring, order, form)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn form(&self) -> &OdeForm {
        &self.form
    }

    /// The defining polynomial: P, or den·u_L − num.
    pub fn defining_polynomial(&self) -> Polynomial {
        match &self.form {
            OdeForm::Implicit(p) => p.clone(),
            OdeForm::Explicit { num, den } => &(den * &Polynomial::var(&self.ring, self.order)) - num,
        }
    }
}

/// The value of δu_L forced by differentiating P = 0:
/// −(P^δ + Σ_{i<L} ∂P/∂uᵢ·u_{i+1}) / ∂P/∂u_L.
pub fn next_derivative(p: &Polynomial) -> Result<RationalFunction, DvarError> {
    let l = top_index(p)?;
    let den = p.partial(l);
    RationalFunction::new(-&total_derivative_lower(p, l), den).map_err(DvarError::from)
}

fn top_index(p: &Polynomial) -> Result<usize, DvarError> {
    let l = p
        .ring()
        .nvars()
        .checked_sub(1)
        .ok_or_else(|| DvarError::Degenerate("no jet variables".into()))?;
    if p.degree_in(l) == 0 {
        return Err(DvarError::Degenerate("resolvent is identically zero".into()));
    }
    Ok(l)
}

/// P^δ + Σ_{i<L} ∂P/∂uᵢ·u_{i+1}.
fn total_derivative_lower(p: &Polynomial, l: usize) -> Polynomial {
    let ring = p.ring();
    let mut out = p.coeff_delta();
    for i in 0..l {
        let d = p.partial(i);
        if !d.is_zero() {
            out = &out + &(&d * &Polynomial::var(ring, i + 1));
        }
    }
    out
}

/// A compiled equation: the D-variety plus the names of its coordinates.
#[derive(Clone, Debug)]
pub struct CompiledDVariety {
    pub dvariety: DVariety,
    /// `jets[i]` is the variable standing for δ^i x.
    pub jets: Vec<String>,
    /// The variable inverting the resolvent, absent when the resolvent is
    /// a nonzero element of the base field.
    pub localizer: Option<String>,
}

pub fn compile(spec: &OdeSpec) -> Result<CompiledDVariety, DvarError> {
    let l = spec.order;
    let ring = &spec.ring;
    // jets kept in the compiled ring, the resolvent and the top component
    let (kept, resolvent, top, relation): (usize, Polynomial, Polynomial, Option<Polynomial>) =
        match &spec.form {
            OdeForm::Explicit { num, den } => (l, den.clone(), num.clone(), None),
            OdeForm::Implicit(p) => {
                let top = -&total_derivative_lower(p, l);
                (l + 1, p.partial(l), top, Some(p.clone()))
            }
        };
    if resolvent.is_zero() {
        return Err(DvarError::Degenerate("resolvent is identically zero".into()));
    }
    let jets: Vec<String> = ring.vars()[..kept].to_vec();
    let constant_resolvent = resolvent.as_constant();
    let mut names = jets.clone();
    let localizer = if constant_resolvent.is_some() {
        None
    } else {
        let w = ring.with_vars(&jets)?.fresh_name("w");
        names.push(w.clone());
        Some(w)
    };
    let cring = ring.with_vars(&names)?;
    // u_L is absent from everything moved in the explicit case, so its
    // slot in the map is arbitrary
    let map: Vec<usize> = (0..=l).map(|i| i.min(cring.nvars() - 1)).collect();
    let mv = |f: &Polynomial| -> Polynomial {
        debug_assert!(kept == l + 1 || f.degree_in(l) == 0);
        f.embed(&cring, &map)
    };

    let mut gens = Vec::new();
    if let Some(p) = &relation {
        gens.push(mv(p));
    }
    let mut comps: Vec<Polynomial> = (0..kept - 1).map(|i| Polynomial::var(&cring, i + 1)).collect();
    let top = mv(&top);
    match (&constant_resolvent, &localizer) {
        (Some(c), _) => comps.push(top.scale(&c.inv())),
        (None, Some(_)) => {
            let w = Polynomial::var(&cring, kept);
            gens.push(&(&w * &mv(&resolvent)) - &Polynomial::one(&cring));
            comps.push(&top * &w);
        }
        (None, None) => unreachable!(),
    }
    if localizer.is_some() {
        // δw from w·h = 1: δw = −w²·δ_s h, with δ_s from the jet components
        let w = Polynomial::var(&cring, kept);
        let mut partial = comps.clone();
        partial.push(Polynomial::zero(&cring));
        let jet_spec = DerivationSpec::new(&cring, partial)?;
        let dh = jet_spec.apply(&mv(&resolvent));
        comps.push(-&(&(&w * &w) * &dh));
    }
    let claims = Claims {
        radical: false,
        prime: false,
    };
    let v = Variety::new(&cring, gens, claims)?;
    let s = Section::new(&cring, comps)?;
    let dvariety = validate_section(&v, &s).map_err(|e| match e {
        DvarError::InvalidSection(_) => DvarError::Internal("compiled section failed validation".into()),
        e => e,
    })?;
    Ok(CompiledDVariety {
        dvariety,
        jets,
        localizer,
    })
}

/// The pair (ℓ, g) attached to an equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeSignature {
    pub ell: usize,
    pub g: Polynomial,
}

pub fn type_signature(spec: &OdeSpec) -> TypeSignature {
    TypeSignature {
        ell: spec.order,
        g: normalize_signature(&spec.defining_polynomial()),
    }
}

/// Clears parameter denominators, divides by the content over ℚ[c] and
/// fixes the sign and integer content: the result has coprime integer
/// coefficients and a positive leading coefficient (grevlex on the
/// variables, then lex on the parameters).
pub fn normalize_signature(p: &Polynomial) -> Polynomial {
    if p.is_zero() {
        return p.clone();
    }
    let ring = p.ring();
    let m = ring.nparams();
    let mut common = QPoly::one(m);
    for (_, c) in p.terms() {
        common = QPoly::lcm(&common, &c.denominator(m));
    }
    let mult = FieldElement::from_qpoly(common);
    let cleared = p.scale(&mult);
    let mut content = QPoly::zero(m);
    for (_, c) in cleared.terms() {
        content = qpoly_gcd(&content, &c.numerator(m));
    }
    let prim = cleared.scale(&FieldElement::from_qpoly(content).inv());
    // integer content and sign, read off the flattened form
    let flat = flatten(&prim, &FieldElement::one());
    let ip = flat.integer_primitive();
    let (_, lc) = flat.leading().expect("nonzero");
    let (_, lc2) = ip.leading().expect("nonzero");
    let mut out = prim.scale(&FieldElement::from_rational(lc2 / lc));
    let lead = out
        .leading_term(MonomialOrder::GrevLex)
        .map(|(_, c)| c.numerator(m).leading_coefficient())
        .expect("nonzero");
    if num_traits::Signed::is_negative(&lead) {
        out = -&out;
    }
    out
}

/// Named view of a compiled section, for reporting.
pub fn section_by_name(c: &CompiledDVariety) -> BTreeMap<String, Polynomial> {
    let d = &c.dvariety;
    d.ring()
        .vars()
        .iter()
        .cloned()
        .zip(d.section().components().iter().cloned())
        .collect()
}
