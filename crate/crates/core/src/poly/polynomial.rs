use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::context::{same_ring, Ring};
use super::field::FieldElement;
use super::monomial::{Monomial, MonomialOrder};
use crate::error::PolyError;

/// Sparse polynomial in the variables of a [`RingContext`](super::RingContext)
/// with coefficients in the base field.
///
/// No zero coefficient is ever stored, so two polynomials are equal exactly
/// when their term maps are.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Ring,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, FieldElement::one())
    }

    pub fn constant(ring: &Ring, c: FieldElement) -> Self {
        Self::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn from_integer(ring: &Ring, n: i64) -> Self {
        Self::constant(ring, FieldElement::from_integer(n))
    }

    pub fn term(ring: &Ring, m: Monomial, c: FieldElement) -> Self {
        assert_eq!(m.len(), ring.nvars());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn var(ring: &Ring, i: usize) -> Self {
        Self::term(ring, Monomial::var(ring.nvars(), i), FieldElement::one())
    }

    pub fn var_named(ring: &Ring, name: &str) -> Result<Self, PolyError> {
        let i = ring
            .var_index(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(Self::var(ring, i))
    }

    /// The parameter `name` as a constant polynomial.
    pub fn param_named(ring: &Ring, name: &str) -> Result<Self, PolyError> {
        let j = ring
            .param_index(name)
            .ok_or_else(|| PolyError::UnknownParameter(name.to_string()))?;
        Ok(Self::constant(ring, FieldElement::param(ring.nparams(), j)))
    }

    pub fn from_terms<I>(ring: &Ring, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, FieldElement)>,
    {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            assert_eq!(m.len(), ring.nvars());
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElement)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// Constant polynomials (including zero) are elements of k.
    pub fn as_constant(&self) -> Option<FieldElement> {
        match self.terms.len() {
            0 => Some(FieldElement::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElement {
        self.terms.get(m).cloned().unwrap_or_else(FieldElement::zero)
    }

    pub fn constant_term(&self) -> FieldElement {
        self.coefficient(&Monomial::one(self.ring.nvars()))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.get(i)).max().unwrap_or(0)
    }

    /// Indices of variables occurring in some term.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.ring.nvars())
            .filter(|&i| self.degree_in(i) > 0)
            .collect()
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &FieldElement)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    /// Terms from largest to smallest under `order`.
    pub fn sorted_terms(&self, order: MonomialOrder) -> Vec<(&Monomial, &FieldElement)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp(b.0, a.0));
        v
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    /// Scales so the leading coefficient under `order` is 1.
    pub fn monic(&self, order: MonomialOrder) -> Self {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn check_ring(&self, other: &Polynomial) -> Result<(), PolyError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(PolyError::ContextMismatch)
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Self, PolyError> {
        self.check_ring(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Self, PolyError> {
        self.check_ring(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Self, PolyError> {
        self.check_ring(other)?;
        Ok(self * other)
    }

    /// Formal partial derivative in the `i`-th variable; parameters are scalars.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.get(i);
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.set(i, e - 1);
            out.add_term(m2, c * &FieldElement::from_integer(e as i64));
        }
        out
    }

    pub fn partial_named(&self, name: &str) -> Result<Self, PolyError> {
        let i = self
            .ring
            .var_index(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(self.partial(i))
    }

    /// f^δ: δ applied to every coefficient.
    pub fn coeff_delta(&self) -> Self {
        let deltas = self.ring.param_deltas();
        let mut out = Self::zero(&self.ring);
        if self.ring.is_autonomous() {
            return out;
        }
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.delta(deltas));
        }
        out
    }

    /// Substitutes `args[i]` for the `i`-th variable. The result lives in the
    /// ring of the arguments, which must present the same base field.
    pub fn substitute(&self, args: &[Polynomial]) -> Result<Polynomial, PolyError> {
        if args.len() != self.ring.nvars() {
            return Err(PolyError::Arity {
                expected: self.ring.nvars(),
                found: args.len(),
            });
        }
        let target = match args.first() {
            Some(a) => a.ring.clone(),
            None => self.ring.clone(),
        };
        if args.iter().any(|a| !same_ring(&a.ring, &target))
            || !target.same_base_field(&self.ring)
        {
            return Err(PolyError::ContextMismatch);
        }
        let mut powers: Vec<Vec<Polynomial>> = args.iter().map(|a| vec![Polynomial::one(&target), a.clone()]).collect();
        let mut out = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &args[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Exact value at a point with coordinates in k.
    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement, PolyError> {
        if point.len() != self.ring.nvars() {
            return Err(PolyError::Arity {
                expected: self.ring.nvars(),
                found: point.len(),
            });
        }
        let mut acc = FieldElement::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = &t * &point[i].pow(e);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    pub fn evaluate_named(
        &self,
        point: &BTreeMap<String, FieldElement>,
    ) -> Result<FieldElement, PolyError> {
        let coords = self
            .ring
            .vars()
            .iter()
            .map(|v| {
                point
                    .get(v)
                    .cloned()
                    .ok_or_else(|| PolyError::UnknownVariable(v.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.evaluate(&coords)
    }

    /// Moves the polynomial into `target`, sending variable `i` to
    /// `var_map[i]`. The base fields must agree.
    pub fn embed(&self, target: &Ring, var_map: &[usize]) -> Polynomial {
        assert_eq!(var_map.len(), self.ring.nvars());
        debug_assert!(target.same_base_field(&self.ring));
        let n = target.nvars();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; n];
            for (i, &k) in m.exponents().iter().enumerate() {
                e[var_map[i]] += k;
            }
            out.add_term(Monomial::from_exponents(e), c.clone());
        }
        out
    }

    /// Moves into a ring with the same variable names in any order, possibly
    /// with extra variables. Fails when a variable in use has no counterpart.
    pub fn rename_into(&self, target: &Ring) -> Result<Polynomial, PolyError> {
        if !target.same_base_field(&self.ring) {
            return Err(PolyError::ContextMismatch);
        }
        let used = self.variables();
        let mut map = vec![0; self.ring.nvars()];
        for (i, name) in self.ring.vars().iter().enumerate() {
            match target.var_index(name) {
                Some(j) => map[i] = j,
                None if !used.contains(&i) => map[i] = usize::MAX,
                None => return Err(PolyError::UnknownVariable(name.clone())),
            }
        }
        let n = target.nvars();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; n];
            for (i, &k) in m.exponents().iter().enumerate() {
                if k > 0 {
                    e[map[i]] += k;
                }
            }
            out.add_term(Monomial::from_exponents(e), c.clone());
        }
        Ok(out)
    }

    pub fn map_coefficients<F>(&self, mut f: F) -> Polynomial
    where
        F: FnMut(&FieldElement) -> FieldElement,
    {
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        debug_assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch");
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        debug_assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        debug_assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch");
        let mut out = Polynomial::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
