//! Elements of the base differential field k = ℚ(c₁,…,cₘ).

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::qpoly::{gcd, QPoly, Rational};

/// A reduced quotient of polynomials in the parameters.
///
/// Canonical form: elements that are rational numbers are stored as such;
/// otherwise numerator and denominator are coprime and the denominator is
/// monic with respect to the lex order on parameters. Equality is therefore
/// structural.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElement(Repr);

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Repr {
    Rat(Rational),
    Frac { num: QPoly, den: QPoly },
}

impl FieldElement {
    pub fn zero() -> Self {
        FieldElement(Repr::Rat(Rational::zero()))
    }

    pub fn one() -> Self {
        FieldElement(Repr::Rat(Rational::one()))
    }

    pub fn from_rational(r: Rational) -> Self {
        FieldElement(Repr::Rat(r))
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    /// The `i`-th parameter of a field with `nparams` parameters.
    pub fn param(nparams: usize, i: usize) -> Self {
        Self::from_qpoly(QPoly::var(nparams, i))
    }

    pub fn from_qpoly(p: QPoly) -> Self {
        let n = p.nvars();
        Self::normalize(p, QPoly::one(n))
    }

    /// `num / den`; `None` when `den` is zero.
    pub fn from_parts(num: QPoly, den: QPoly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::normalize(num, den))
    }

    fn normalize(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(d) = den.constant_value() {
            if let Some(n) = num.constant_value() {
                return FieldElement(Repr::Rat(n / d));
            }
            let n = num.nvars();
            return FieldElement(Repr::Frac {
                num: num.scale(&d.recip()),
                den: QPoly::one(n),
            });
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        if den.is_constant() {
            return Self::normalize(num, den);
        }
        let lc = den.leading_coefficient().recip();
        FieldElement(Repr::Frac {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Rat(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.0, Repr::Rat(r) if r.is_one())
    }

    /// `Some` when the element lies in ℚ.
    pub fn as_rational(&self) -> Option<&Rational> {
        match &self.0 {
            Repr::Rat(r) => Some(r),
            Repr::Frac { .. } => None,
        }
    }

    /// True when the element is a polynomial in the parameters.
    pub fn is_polynomial(&self) -> bool {
        match &self.0 {
            Repr::Rat(_) => true,
            Repr::Frac { den, .. } => den.is_one(),
        }
    }

    /// Number of parameters, when it can be read off the representation.
    pub fn nparams(&self) -> Option<usize> {
        match &self.0 {
            Repr::Rat(_) => None,
            Repr::Frac { num, .. } => Some(num.nvars()),
        }
    }

    pub fn numerator(&self, nparams: usize) -> QPoly {
        match &self.0 {
            Repr::Rat(r) => QPoly::constant(nparams, r.clone()),
            Repr::Frac { num, .. } => {
                debug_assert_eq!(num.nvars(), nparams);
                num.clone()
            }
        }
    }

    pub fn denominator(&self, nparams: usize) -> QPoly {
        match &self.0 {
            Repr::Rat(_) => QPoly::one(nparams),
            Repr::Frac { den, .. } => {
                debug_assert_eq!(den.nvars(), nparams);
                den.clone()
            }
        }
    }

    fn arity(a: &Self, b: &Self) -> usize {
        match (a.nparams(), b.nparams()) {
            (Some(m), Some(n)) => {
                assert_eq!(m, n, "field elements from different base fields");
                m
            }
            (Some(m), None) | (None, Some(m)) => m,
            (None, None) => 0,
        }
    }

    pub fn inv(&self) -> Self {
        match &self.0 {
            Repr::Rat(r) => {
                assert!(!r.is_zero(), "inverse of zero");
                FieldElement(Repr::Rat(r.recip()))
            }
            Repr::Frac { num, den } => Self::normalize(den.clone(), num.clone()),
        }
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(self * &rhs.inv())
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// δ applied to this element, given δ of each parameter.
    ///
    /// Rational numbers are constants; otherwise δ(p/q) = (δp·q − p·δq)/q²
    /// with δp = Σⱼ ∂p/∂cⱼ · δcⱼ.
    pub fn delta(&self, param_deltas: &[FieldElement]) -> Self {
        match &self.0 {
            Repr::Rat(_) => Self::zero(),
            Repr::Frac { num, den } => {
                let dn = qpoly_delta(num, param_deltas);
                if den.is_one() {
                    return dn;
                }
                let dd = qpoly_delta(den, param_deltas);
                let n = num.nvars();
                let num_f = Self::from_qpoly(num.clone());
                let den_f = Self::from_qpoly(den.clone());
                let top = &(&dn * &den_f) - &(&num_f * &dd);
                let bottom = Self::from_qpoly(&den.clone() * den);
                debug_assert_eq!(bottom.nparams().unwrap_or(n), n);
                &top / &bottom
            }
        }
    }
}

fn qpoly_delta(p: &QPoly, param_deltas: &[FieldElement]) -> FieldElement {
    assert_eq!(p.nvars(), param_deltas.len(), "parameter deltas out of sync");
    let mut acc = FieldElement::zero();
    for (j, dj) in param_deltas.iter().enumerate() {
        if dj.is_zero() || p.degree_in(j) == 0 {
            continue;
        }
        acc = &acc + &(&FieldElement::from_qpoly(p.partial(j)) * dj);
    }
    acc
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        match (&self.0, &rhs.0) {
            (Repr::Rat(a), Repr::Rat(b)) => FieldElement(Repr::Rat(a + b)),
            _ => {
                let n = FieldElement::arity(self, rhs);
                let (an, ad) = (self.numerator(n), self.denominator(n));
                let (bn, bd) = (rhs.numerator(n), rhs.denominator(n));
                if ad == bd {
                    return FieldElement::normalize(&an + &bn, ad);
                }
                FieldElement::normalize(&(&an * &bd) + &(&bn * &ad), &ad * &bd)
            }
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self + &(-rhs)
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        match (&self.0, &rhs.0) {
            (Repr::Rat(a), Repr::Rat(b)) => FieldElement(Repr::Rat(a * b)),
            (Repr::Rat(a), Repr::Frac { num, den }) | (Repr::Frac { num, den }, Repr::Rat(a)) => {
                if a.is_zero() {
                    return FieldElement::zero();
                }
                FieldElement(Repr::Frac {
                    num: num.scale(a),
                    den: den.clone(),
                })
            }
            (Repr::Frac { num: an, den: ad }, Repr::Frac { num: bn, den: bd }) => {
                if ad.is_one() && bd.is_one() {
                    return FieldElement::normalize(an * bn, ad.clone());
                }
                FieldElement::normalize(an * bn, ad * bd)
            }
        }
    }
}

impl Div for &FieldElement {
    type Output = FieldElement;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &FieldElement) -> FieldElement {
        self * &rhs.inv()
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        match &self.0 {
            Repr::Rat(r) => FieldElement(Repr::Rat(-r)),
            Repr::Frac { num, den } => FieldElement(Repr::Frac {
                num: -num,
                den: den.clone(),
            }),
        }
    }
}

impl From<Rational> for FieldElement {
    fn from(r: Rational) -> Self {
        FieldElement::from_rational(r)
    }
}

impl From<i64> for FieldElement {
    fn from(n: i64) -> Self {
        FieldElement::from_integer(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c() -> FieldElement {
        FieldElement::param(1, 0)
    }

    #[test]
    fn rational_elements_collapse() {
        let a = &c() / &c();
        assert!(a.is_one());
        let z = &c() - &c();
        assert!(z.is_zero());
    }

    #[test]
    fn quotient_is_reduced_and_monic() {
        // (2c^2 - 2) / (4c + 4) = (c - 1)/2
        let c = c();
        let two = FieldElement::from_integer(2);
        let four = FieldElement::from_integer(4);
        let one = FieldElement::one();
        let a = &(&two * &(&c * &c)) - &two;
        let b = &(&four * &c) + &four;
        let q = &a / &b;
        let expected = &(&c - &one) / &two;
        assert_eq!(q, expected);
        assert!(q.is_polynomial());
    }

    #[test]
    fn delta_of_square_and_inverse() {
        // δc = 1: δ(c²) = 2c, δ(1/c) = −1/c²
        let c = c();
        let deltas = [FieldElement::one()];
        let sq = &c * &c;
        assert_eq!(sq.delta(&deltas), &FieldElement::from_integer(2) * &c);
        let inv = c.inv();
        assert_eq!(inv.delta(&deltas), -&(&inv * &inv));
    }
}
