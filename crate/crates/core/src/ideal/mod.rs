//! Ideal machinery: Gröbner bases, normal forms with certificates, ideal and
//! radical membership, elimination and Krull dimension.

mod dimension;
mod groebner;

use crate::error::PolyError;
use crate::poly::{same_ring, Monomial, MonomialOrder, Polynomial, Ring};

pub use dimension::{krull_dimension, Dimension};
pub(crate) use dimension::dimension_of;
pub(crate) use groebner::SortedPoly;

/// A reduced Gröbner basis together with the generators it came from.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Ring,
    order: MonomialOrder,
    gens: Vec<Polynomial>,
    source: Vec<Polynomial>,
    sorted: Vec<SortedPoly>,
}

/// `f = Σ cofactorᵢ · basisᵢ + remainder`, with no term of the remainder
/// divisible by a leading monomial of the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipCertificate {
    pub cofactors: Vec<Polynomial>,
    pub remainder: Polynomial,
}

impl MembershipCertificate {
    /// Recomputes Σ cofactorᵢ · basisᵢ + remainder.
    pub fn reconstruct(&self, gb: &GroebnerBasis) -> Polynomial {
        self.cofactors
            .iter()
            .zip(gb.gens())
            .fold(self.remainder.clone(), |acc, (c, g)| &acc + &(c * g))
    }
}

impl GroebnerBasis {
    pub fn compute(ring: &Ring, source: &[Polynomial], order: MonomialOrder) -> Self {
        debug_assert!(source.iter().all(|f| same_ring(f.ring(), ring)));
        let sorted = groebner::buchberger(source, order);
        let gens = sorted.iter().map(|g| g.to_poly(ring)).collect();
        GroebnerBasis {
            ring: ring.clone(),
            order,
            gens,
            source: source.to_vec(),
            sorted,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn source(&self) -> &[Polynomial] {
        &self.source
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_one()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.sorted.iter().map(|g| g.lm().clone()).collect()
    }

    /// Division with cofactors. The certificate is rechecked in debug builds.
    pub fn normal_form(&self, f: &Polynomial) -> MembershipCertificate {
        let mut quotients = vec![Vec::new(); self.sorted.len()];
        let r = groebner::reduce(
            &SortedPoly::from_poly(f, self.order),
            &self.sorted,
            self.order,
            Some(&mut quotients),
        );
        let cofactors = quotients
            .into_iter()
            .map(|q| Polynomial::from_terms(&self.ring, q))
            .collect();
        let cert = MembershipCertificate {
            cofactors,
            remainder: r.to_poly(&self.ring),
        };
        debug_assert!(cert.reconstruct(self) == *f, "membership certificate does not reconstruct");
        cert
    }

    /// Remainder only.
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        groebner::reduce(&SortedPoly::from_poly(f, self.order), &self.sorted, self.order, None)
            .to_poly(&self.ring)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.reduce(f).is_zero()
    }

    /// Buchberger's criterion, checked directly on every pair.
    pub fn s_pairs_reduce_to_zero(&self) -> bool {
        let g = &self.gens;
        for j in 0..g.len() {
            for i in 0..j {
                let (li, ci) = g[i].leading_term(self.order).unwrap();
                let (lj, cj) = g[j].leading_term(self.order).unwrap();
                let l = li.lcm(lj);
                let s = &g[i].mul_term(&l.div(li), &ci.inv()) - &g[j].mul_term(&l.div(lj), &cj.inv());
                if !self.contains(&s) {
                    return false;
                }
            }
        }
        true
    }

    /// Checks the defining properties of a reduced basis: monic elements and
    /// no term of any element divisible by another element's leading monomial.
    pub fn is_reduced(&self) -> bool {
        let lms = self.leading_monomials();
        self.gens.iter().enumerate().all(|(i, g)| {
            g.leading_term(self.order).is_some_and(|(_, c)| c.is_one())
                && g.terms()
                    .all(|(m, _)| lms.iter().enumerate().all(|(j, l)| j == i || !l.divides(m)))
        })
    }

    /// Monomials of total degree ≤ `degree` outside the leading-term ideal,
    /// in increasing order. They form a k-basis of the degree-filtered
    /// quotient ring.
    pub fn standard_monomials(&self, degree: u32) -> Vec<Monomial> {
        let lms = self.leading_monomials();
        let mut out: Vec<Monomial> = monomials_up_to(self.ring.nvars(), degree)
            .into_iter()
            .filter(|m| !lms.iter().any(|l| l.divides(m)))
            .collect();
        out.sort_by(|a, b| self.order.cmp(a, b));
        out
    }
}

/// All exponent vectors in `n` variables with total degree ≤ `degree`.
pub fn monomials_up_to(n: usize, degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == cur.len() {
            out.push(Monomial::from_exponents(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, degree, &mut cur, &mut out);
    out
}

fn common_ring<'a>(polys: impl IntoIterator<Item = &'a Polynomial>) -> Result<Option<Ring>, PolyError> {
    let mut ring: Option<Ring> = None;
    for p in polys {
        match &ring {
            None => ring = Some(p.ring().clone()),
            Some(r) if same_ring(r, p.ring()) => {}
            Some(_) => return Err(PolyError::ContextMismatch),
        }
    }
    Ok(ring)
}

pub fn groebner(ring: &Ring, gens: &[Polynomial], order: MonomialOrder) -> Result<GroebnerBasis, PolyError> {
    if gens.iter().any(|g| !same_ring(g.ring(), ring)) {
        return Err(PolyError::ContextMismatch);
    }
    Ok(GroebnerBasis::compute(ring, gens, order))
}

pub fn normal_form(f: &Polynomial, gb: &GroebnerBasis) -> Result<MembershipCertificate, PolyError> {
    if !same_ring(f.ring(), gb.ring()) {
        return Err(PolyError::ContextMismatch);
    }
    Ok(gb.normal_form(f))
}

/// Decides f ∈ ⟨gens⟩ with a grevlex basis; the certificate is returned
/// either way and refers to that basis.
pub fn ideal_member(
    f: &Polynomial,
    gens: &[Polynomial],
) -> Result<(bool, MembershipCertificate), PolyError> {
    common_ring(gens.iter().chain([f]))?;
    let gb = GroebnerBasis::compute(f.ring(), gens, MonomialOrder::GrevLex);
    let cert = gb.normal_form(f);
    Ok((cert.remainder.is_zero(), cert))
}

/// Decides f ∈ √⟨gens⟩: 1 ∈ ⟨gens, 1 − t·f⟩ for a fresh variable t.
pub fn radical_member(f: &Polynomial, gens: &[Polynomial]) -> Result<bool, PolyError> {
    common_ring(gens.iter().chain([f]))?;
    Ok(radical_member_unchecked(f, gens))
}

pub(crate) fn radical_member_unchecked(f: &Polynomial, gens: &[Polynomial]) -> bool {
    if f.is_zero() {
        return true;
    }
    let ring = f.ring();
    let nonzero: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        // k[x] is reduced
        return false;
    }
    let gb = GroebnerBasis::compute(ring, &nonzero, MonomialOrder::GrevLex);
    radical_member_in(f, &gb)
}

/// Radical membership against an already computed basis.
pub(crate) fn radical_member_in(f: &Polynomial, gb: &GroebnerBasis) -> bool {
    if gb.contains(f) {
        return true;
    }
    if gb.is_zero_ideal() {
        return false;
    }
    let ring = gb.ring();
    let n = ring.nvars();
    let mut names: Vec<String> = ring.vars().to_vec();
    names.push(ring.fresh_name("t"));
    let ext = ring.with_vars(&names).expect("fresh name");
    let map: Vec<usize> = (0..n).collect();
    let mut gens: Vec<Polynomial> = gb.gens().iter().map(|g| g.embed(&ext, &map)).collect();
    let t = Polynomial::var(&ext, n);
    gens.push(&Polynomial::one(&ext) - &(&t * &f.embed(&ext, &map)));
    GroebnerBasis::compute(&ext, &gens, MonomialOrder::GrevLex).is_unit()
}

/// √⟨a⟩ = √⟨b⟩, by mutual radical containment of generators.
pub fn radical_equal(a: &[Polynomial], b: &[Polynomial]) -> Result<bool, PolyError> {
    common_ring(a.iter().chain(b))?;
    let contained = |xs: &[Polynomial], ys: &[Polynomial]| -> bool {
        let nonzero: Vec<Polynomial> = ys.iter().filter(|g| !g.is_zero()).cloned().collect();
        if nonzero.is_empty() {
            return xs.iter().all(Polynomial::is_zero);
        }
        let gb = GroebnerBasis::compute(nonzero[0].ring(), &nonzero, MonomialOrder::GrevLex);
        xs.iter().all(|x| radical_member_in(x, &gb))
    };
    Ok(contained(a, b) && contained(b, a))
}

/// Generators of ⟨gens⟩ ∩ k[variables not in `drop`], computed with a block
/// order that puts the dropped variables first. The result lives in the
/// original ring.
pub fn eliminate(gens: &[Polynomial], drop: &[&str]) -> Result<Vec<Polynomial>, PolyError> {
    let ring = match common_ring(gens)? {
        Some(r) => r,
        None => return Ok(Vec::new()),
    };
    for d in drop {
        if ring.var_index(d).is_none() {
            return Err(PolyError::UnknownVariable(d.to_string()));
        }
    }
    if drop.is_empty() {
        return Ok(GroebnerBasis::compute(&ring, gens, MonomialOrder::GrevLex).gens().to_vec());
    }
    let mut names: Vec<String> = drop.iter().map(|s| s.to_string()).collect();
    names.extend(ring.vars().iter().filter(|v| !drop.contains(&v.as_str())).cloned());
    let reordered = ring.with_vars(&names)?;
    let moved: Vec<Polynomial> = gens
        .iter()
        .map(|g| g.rename_into(&reordered))
        .collect::<Result<_, _>>()?;
    let gb = GroebnerBasis::compute(&reordered, &moved, MonomialOrder::Block(drop.len()));
    gb.gens()
        .iter()
        .filter(|g| (0..drop.len()).all(|i| g.degree_in(i) == 0))
        .map(|g| g.rename_into(&ring))
        .collect()
}
