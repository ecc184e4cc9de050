//! Sparse polynomials over ℚ in a fixed number of indeterminates.
//!
//! `QPoly` is the workhorse underneath the base field: numerators and
//! denominators of [`FieldElement`](super::FieldElement)s are `QPoly`s in the
//! parameters, and rational functions flatten into `QPoly`s over variables and
//! parameters together when they need a gcd.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors. Vectors compare
//! lexicographically with index 0 most significant, so the last key is the
//! lex-leading term. Monic normalization always refers to that term.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl QPoly {
    pub fn zero(nvars: usize) -> Self {
        QPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, Rational::one());
        p
    }

    /// Builds a polynomial from possibly repeated terms; like terms merge and
    /// zeros vanish.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector has wrong length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<u32>, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// True for the zero polynomial and for nonzero constants.
    pub fn is_constant(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => self.terms.keys().next().unwrap().iter().all(|&e| e == 0),
            _ => false,
        }
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn coefficient(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Lex-leading term.
    pub fn leading(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    fn min_exponents(&self) -> Vec<u32> {
        (0..self.nvars)
            .map(|v| self.terms.keys().map(|e| e[v]).min().unwrap_or(0))
            .collect()
    }

    fn div_monomial(&self, m: &[u32]) -> QPoly {
        QPoly::from_terms(
            self.nvars,
            self.terms
                .iter()
                .map(|(e, c)| (e.iter().zip(m).map(|(x, y)| x - y).collect(), c.clone())),
        )
    }

    /// Substitutes `pts[i]` for every variable except `keep`.
    fn specialize_except(&self, keep: usize, pts: &[i64]) -> QPoly {
        let mut out = QPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut c = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if i != keep && k > 0 {
                    c *= Rational::from_integer(BigInt::from(pts[i]).pow(k));
                }
            }
            let mut e2 = vec![0; self.nvars];
            e2[keep] = e[keep];
            out.add_term(e2, c);
        }
        out
    }

    /// Coefficient of `x_v^d`, as a polynomial with `x_v` absent.
    pub fn coeff_in(&self, v: usize, d: u32) -> QPoly {
        let mut out = QPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[v] == d {
                let mut e2 = e.clone();
                e2[v] = 0;
                out.terms.insert(e2, c.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> QPoly {
        if c.is_zero() {
            return QPoly::zero(self.nvars);
        }
        QPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.clone(), a * c))
                .collect(),
        }
    }

    pub fn mul_var_pow(&self, v: usize, k: u32) -> QPoly {
        if k == 0 {
            return self.clone();
        }
        QPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2[v] += k;
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> QPoly {
        let mut acc = QPoly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn partial(&self, v: usize) -> QPoly {
        let mut out = QPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[v] > 0 {
                let mut e2 = e.clone();
                e2[v] -= 1;
                out.add_term(e2, c * Rational::from_integer(BigInt::from(e[v])));
            }
        }
        out
    }

    /// Scales so that the lex-leading coefficient is 1. Zero stays zero.
    pub fn monic(&self) -> QPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Exact quotient `self / b`, or `None` when `b` does not divide `self`.
    pub fn div_exact(&self, b: &QPoly) -> Option<QPoly> {
        assert!(!b.is_zero(), "division by zero polynomial");
        if let Some(c) = b.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (lb_e, lb_c) = b.leading().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut r = self.clone();
        let mut q = QPoly::zero(self.nvars);
        while let Some((e, c)) = r.leading().map(|(e, c)| (e.clone(), c.clone())) {
            if e.iter().zip(&lb_e).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Vec<u32> = e.iter().zip(&lb_e).map(|(a, b)| a - b).collect();
            let qc = &c / &lb_c;
            let t = QPoly::from_terms(self.nvars, [(qe.clone(), qc.clone())]);
            r = &r - &(&t * b);
            q.add_term(qe, qc);
        }
        Some(q)
    }

    /// Content with respect to `x_v`: the gcd of the coefficients of the
    /// powers of `x_v`. Monic.
    pub fn content_in(&self, v: usize) -> QPoly {
        let deg = self.degree_in(v);
        let mut g = QPoly::zero(self.nvars);
        for d in (0..=deg).rev() {
            let c = self.coeff_in(v, d);
            if c.is_zero() {
                continue;
            }
            g = gcd(&g, &c);
            if g.is_constant() && !g.is_zero() {
                break;
            }
        }
        g
    }

    pub fn primitive_in(&self, v: usize) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides")
    }

    /// Pseudo-remainder with respect to `x_v`.
    fn prem(&self, b: &QPoly, v: usize) -> QPoly {
        let db = b.degree_in(v);
        let lb = b.coeff_in(v, db);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= db {
            let dr = r.degree_in(v);
            let lr = r.coeff_in(v, dr);
            r = &(&lb * &r) - &(&lr.mul_var_pow(v, dr - db) * b);
        }
        r
    }

    /// Multiplies by the lcm of the coefficient denominators and divides by
    /// the gcd of the resulting integer numerators, then fixes the sign of
    /// the lex-leading coefficient to be positive.
    pub fn integer_primitive(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut l = BigInt::one();
        for c in self.terms.values() {
            l = num_integer::Integer::lcm(&l, c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            let n = (c * Rational::from_integer(l.clone())).to_integer();
            g = num_integer::Integer::gcd(&g, &n);
        }
        let mut factor = Rational::new(l, g);
        if self.leading_coefficient().is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    pub fn lcm(a: &QPoly, b: &QPoly) -> QPoly {
        if a.is_zero() || b.is_zero() {
            return QPoly::zero(a.nvars);
        }
        let g = gcd(a, b);
        (a * &b.div_exact(&g).expect("gcd divides")).monic()
    }
}

/// Greatest common divisor over ℚ, normalized monic; `gcd(0, 0) = 0`.
///
/// Recursive primitive-PRS: split off the content in the highest-indexed
/// variable present, run a primitive pseudo-remainder sequence on the
/// primitive parts, and multiply the content gcd back in.
pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    assert_eq!(a.nvars, b.nvars);
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return QPoly::one(a.nvars);
    }
    if a == b {
        return a.monic();
    }
    let n = a.nvars;
    // Monomial factors split off: neither cofactor is divisible by a variable.
    let (ma, mb) = (a.min_exponents(), b.min_exponents());
    if ma.iter().chain(&mb).any(|&k| k > 0) {
        let m: Vec<u32> = ma.iter().zip(&mb).map(|(x, y)| *x.min(y)).collect();
        let g = gcd(&a.div_monomial(&ma), &b.div_monomial(&mb));
        return QPoly::from_terms(n, g.terms.into_iter().map(|(e, c)| {
            (e.iter().zip(&m).map(|(x, y)| x + y).collect(), c)
        }));
    }
    let active: Vec<usize> = (0..n)
        .filter(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0)
        .collect();
    if active.is_empty() {
        return QPoly::one(n);
    }
    let v = if active.len() == 1 {
        active[0]
    } else {
        // Upper bounds on deg_v gcd from univariate images. An image that keeps
        // both leading coefficients is divisible by the image of the gcd.
        let mut best: Option<(u32, usize)> = None;
        for &w in &active {
            let bound = degree_bound(a, b, w);
            if bound > 0 && best.is_none_or(|(d, _)| bound < d) {
                best = Some((bound, w));
            }
        }
        match best {
            Some((_, w)) => w,
            None => return QPoly::one(n),
        }
    };
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let c = gcd(&ca, &cb);
    let mut r0 = a.div_exact(&ca).expect("content divides");
    let mut r1 = b.div_exact(&cb).expect("content divides");
    if r0.degree_in(v) < r1.degree_in(v) {
        std::mem::swap(&mut r0, &mut r1);
    }
    let g = loop {
        if r1.degree_in(v) == 0 {
            break QPoly::one(n);
        }
        let r = r0.prem(&r1, v);
        if r.is_zero() {
            break r1;
        }
        if r.degree_in(v) == 0 {
            break QPoly::one(n);
        }
        r0 = r1;
        r1 = r.primitive_in(v);
    };
    (&c * &g.primitive_in(v)).monic()
}

fn degree_bound(a: &QPoly, b: &QPoly, w: usize) -> u32 {
    let (da, db) = (a.degree_in(w), b.degree_in(w));
    let trivial = da.min(db);
    for attempt in 0..3i64 {
        let pts: Vec<i64> = (0..a.nvars as i64).map(|i| 3 + 7 * attempt + 2 * i + i * i).collect();
        let (ia, ib) = (a.specialize_except(w, &pts), b.specialize_except(w, &pts));
        if ia.degree_in(w) == da && ib.degree_in(w) == db && !ia.is_zero() && !ib.is_zero() {
            return gcd(&ia, &ib).degree_in(w);
        }
    }
    trivial
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = QPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn x(n: usize, i: usize) -> QPoly {
        QPoly::var(n, i)
    }

    #[test]
    fn gcd_of_shared_linear_factor() {
        // (x + y)(x - y) and (x + y)^2 share x + y
        let (a, b) = (x(2, 0), x(2, 1));
        let s = &a + &b;
        let d = &a - &b;
        let g = gcd(&(&s * &d), &(&s * &s));
        assert_eq!(g, s.monic());
    }

    #[test]
    fn gcd_coprime_is_one() {
        let a = &x(2, 0) + &QPoly::one(2);
        let b = &x(2, 1) - &QPoly::one(2);
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn gcd_with_content() {
        // 2y*x^2 - 2y  and  4y^2*x + 4y^2  ->  y(x + 1)
        let (xx, y) = (x(2, 0), x(2, 1));
        let one = QPoly::one(2);
        let a = (&y * &(&(&xx * &xx) - &one)).scale(&q(2));
        let b = (&(&y * &y) * &(&xx + &one)).scale(&q(4));
        assert_eq!(gcd(&a, &b), (&y * &(&xx + &one)).monic());
    }

    #[test]
    fn gcd_in_five_variables() {
        // g = x*w + y*v - 2 z, cofactors coprime
        let v: Vec<QPoly> = (0..5).map(|i| x(5, i)).collect();
        let one = QPoly::one(5);
        let g = &(&(&v[0] * &v[4]) + &(&v[1] * &v[3])) - &v[2].scale(&q(2));
        let a = &g * &(&(&v[0] * &v[0]) + &v[3]);
        let b = &g * &(&(&v[1] * &v[2]) - &one);
        assert_eq!(gcd(&a, &b), g.monic());
        assert!(gcd(&(&(&v[0] * &v[0]) + &v[3]), &(&(&v[1] * &v[2]) - &one)).is_one());
    }

    #[test]
    fn gcd_keeps_shared_monomials() {
        // x^2 y (x + 1) and x y^3 -> x y
        let (xx, y) = (x(2, 0), x(2, 1));
        let a = &(&(&xx * &xx) * &y) * &(&xx + &QPoly::one(2));
        let b = &xx * &y.pow(3);
        assert_eq!(gcd(&a, &b), &xx * &y);
    }

    #[test]
    fn exact_division_and_failure() {
        let (xx, y) = (x(2, 0), x(2, 1));
        let p = &(&xx + &y) * &(&xx - &y);
        assert_eq!(p.div_exact(&(&xx - &y)).unwrap(), &xx + &y);
        assert!(p.div_exact(&xx).is_none());
    }

    #[test]
    fn integer_primitive_sign_and_content() {
        let p = QPoly::from_terms(1, [(vec![1], q(-4)), (vec![0], Rational::new(2.into(), 3.into()))]);
        let r = p.integer_primitive();
        assert_eq!(r, QPoly::from_terms(1, [(vec![1], q(6)), (vec![0], q(-1))]));
    }
}
