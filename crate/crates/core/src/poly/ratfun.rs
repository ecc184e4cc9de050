use std::ops::{Add, Mul, Neg, Sub};

use super::context::{same_ring, Ring};
use super::field::FieldElement;
use super::monomial::{Monomial, MonomialOrder};
use super::polynomial::Polynomial;
use super::qpoly::{gcd, QPoly};
use crate::error::PolyError;

/// A reduced fraction of polynomials: an element of k(x₁,…,xₙ).
///
/// The numerator and denominator are coprime in k[x] and the denominator is
/// monic under grevlex, so equal functions have equal representations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, PolyError> {
        if !same_ring(num.ring(), den.ring()) {
            return Err(PolyError::ContextMismatch);
        }
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        let (num, den) = normalize(num, den);
        Ok(RationalFunction { num, den })
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        let den = Polynomial::one(p.ring());
        RationalFunction { num: p, den }
    }

    pub fn zero(ring: &Ring) -> Self {
        Self::from_polynomial(Polynomial::zero(ring))
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn ring(&self) -> &Ring {
        self.num.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.den.is_one().then_some(&self.num)
    }

    /// `Some` when the function is an element of k.
    pub fn as_constant(&self) -> Option<FieldElement> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, PolyError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        RationalFunction {
            num: self.num.pow(k),
            den: self.den.pow(k),
        }
    }

    /// Plugs rational functions into a polynomial: `p(args₁,…,argsₙ)`.
    pub fn compose(p: &Polynomial, args: &[RationalFunction]) -> Result<Self, PolyError> {
        if args.len() != p.ring().nvars() {
            return Err(PolyError::Arity {
                expected: p.ring().nvars(),
                found: args.len(),
            });
        }
        let target = match args.first() {
            Some(a) => a.ring().clone(),
            None => {
                return p
                    .as_constant()
                    .map(|_| Self::from_polynomial(p.clone()))
                    .ok_or(PolyError::ContextMismatch)
            }
        };
        if !target.same_base_field(p.ring()) || args.iter().any(|a| !same_ring(a.ring(), &target)) {
            return Err(PolyError::ContextMismatch);
        }
        // Common denominator: each monomial is brought over Π denᵢ^{degᵢ p}.
        let degs: Vec<u32> = (0..args.len()).map(|i| p.degree_in(i)).collect();
        let mut num = Polynomial::zero(&target);
        for (m, c) in p.terms() {
            let mut t = Polynomial::constant(&target, c.clone());
            for (i, a) in args.iter().enumerate() {
                let e = m.get(i);
                if e > 0 {
                    t = &t * &a.num.pow(e);
                }
                if degs[i] > e {
                    t = &t * &a.den.pow(degs[i] - e);
                }
            }
            num = &num + &t;
        }
        let mut den = Polynomial::one(&target);
        for (i, a) in args.iter().enumerate() {
            if degs[i] > 0 && !a.den.is_one() {
                den = &den * &a.den.pow(degs[i]);
            }
        }
        Self::new(num, den)
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        Self::from_polynomial(p)
    }
}

fn normalize(num: Polynomial, den: Polynomial) -> (Polynomial, Polynomial) {
    let ring = num.ring().clone();
    if num.is_zero() {
        return (num, Polynomial::one(&ring));
    }
    if let Some(c) = den.as_constant() {
        return (num.scale(&c.inv()), Polynomial::one(&ring));
    }
    let m = ring.nparams();
    let mut common = QPoly::one(m);
    for (_, c) in num.terms().chain(den.terms()) {
        if !c.is_polynomial() {
            common = QPoly::lcm(&common, &c.denominator(m));
        }
    }
    let common = FieldElement::from_qpoly(common);
    let fnum = flatten(&num, &common);
    let fden = flatten(&den, &common);
    let g = gcd(&fnum, &fden);
    let (num, den) = if g.is_constant() {
        (num, den)
    } else {
        (
            unflatten(&fnum.div_exact(&g).expect("gcd divides"), &ring),
            unflatten(&fden.div_exact(&g).expect("gcd divides"), &ring),
        )
    };
    if let Some(c) = den.as_constant() {
        return (num.scale(&c.inv()), Polynomial::one(&ring));
    }
    let lc = den
        .leading_term(MonomialOrder::GrevLex)
        .map(|(_, c)| c.inv())
        .expect("nonzero denominator");
    (num.scale(&lc), den.scale(&lc))
}

/// Views `p · mult` as a polynomial over ℚ in variables followed by parameters.
/// `mult` must clear every coefficient denominator.
pub(crate) fn flatten(p: &Polynomial, mult: &FieldElement) -> QPoly {
    let ring = p.ring();
    let (n, m) = (ring.nvars(), ring.nparams());
    let mut terms = Vec::new();
    for (mono, c) in p.terms() {
        let c = c * mult;
        debug_assert!(c.is_polynomial());
        for (pe, q) in c.numerator(m).terms() {
            let mut e = Vec::with_capacity(n + m);
            e.extend_from_slice(mono.exponents());
            e.extend_from_slice(pe);
            terms.push((e, q.clone()));
        }
    }
    QPoly::from_terms(n + m, terms)
}

pub(crate) fn unflatten(q: &QPoly, ring: &Ring) -> Polynomial {
    let (n, m) = (ring.nvars(), ring.nparams());
    let mut grouped: std::collections::BTreeMap<Vec<u32>, Vec<(Vec<u32>, _)>> = Default::default();
    for (e, c) in q.terms() {
        grouped
            .entry(e[..n].to_vec())
            .or_default()
            .push((e[n..].to_vec(), c.clone()));
    }
    Polynomial::from_terms(
        ring,
        grouped.into_iter().map(|(ve, pts)| {
            (
                Monomial::from_exponents(ve),
                FieldElement::from_qpoly(QPoly::from_terms(m, pts)),
            )
        }),
    )
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            let (num, den) = normalize(&self.num + &rhs.num, self.den.clone());
            return RationalFunction { num, den };
        }
        let (num, den) = normalize(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        );
        RationalFunction { num, den }
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction {
                num: &self.num * &rhs.num,
                den: self.den.clone(),
            };
        }
        let (num, den) = normalize(&self.num * &rhs.num, &self.den * &rhs.den);
        RationalFunction { num, den }
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}
