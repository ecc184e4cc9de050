//! Buchberger's algorithm over k = ℚ(c₁,…,cₘ).
//!
//! Pair selection is normal-strategy (smallest lcm degree first, ties broken
//! by the monomial order and then by indices), with the coprime-leading-term
//! and chain criteria. All loops run over index order, so a fixed input and
//! order always produce the same basis.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::poly::{FieldElement, Monomial, MonomialOrder, Polynomial, Ring};

/// Terms sorted ascending under the order: the leading term is last.
#[derive(Clone, Debug)]
pub(crate) struct SortedPoly {
    pub(crate) terms: Vec<(Monomial, FieldElement)>,
}

impl SortedPoly {
    pub(crate) fn from_poly(p: &Polynomial, order: MonomialOrder) -> Self {
        let mut terms: Vec<_> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        terms.sort_by(|a, b| order.cmp(&a.0, &b.0));
        SortedPoly { terms }
    }

    pub(crate) fn to_poly(&self, ring: &Ring) -> Polynomial {
        Polynomial::from_terms(ring, self.terms.iter().cloned())
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn lm(&self) -> &Monomial {
        &self.terms.last().expect("nonzero").0
    }

    pub(crate) fn lc(&self) -> &FieldElement {
        &self.terms.last().expect("nonzero").1
    }

    pub(crate) fn make_monic(&mut self) {
        if self.terms.is_empty() || self.lc().is_one() {
            return;
        }
        let inv = self.lc().inv();
        for t in &mut self.terms {
            t.1 = &t.1 * &inv;
        }
    }

    /// `self − c·m·g`, merged in order.
    pub(crate) fn sub_mul(
        &self,
        c: &FieldElement,
        m: &Monomial,
        g: &SortedPoly,
        order: MonomialOrder,
    ) -> SortedPoly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = g
            .terms
            .iter()
            .map(|(t, k)| (t.mul(m), k * c))
            .peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => {
                    let (t, k) = b.next().unwrap();
                    out.push((t, -&k));
                }
                (Some(x), Some(y)) => match order.cmp(&x.0, &y.0) {
                    Ordering::Less => out.push(a.next().unwrap().clone()),
                    Ordering::Greater => {
                        let (t, k) = b.next().unwrap();
                        out.push((t, -&k));
                    }
                    Ordering::Equal => {
                        let (t, k) = b.next().unwrap();
                        let s = &a.next().unwrap().1 - &k;
                        if !s.is_zero() {
                            out.push((t, s));
                        }
                    }
                },
            }
        }
        SortedPoly { terms: out }
    }
}

/// Full reduction of `f` by `basis`. When `quotients` is given, the
/// multipliers used for each basis element are accumulated there.
pub(crate) fn reduce(
    f: &SortedPoly,
    basis: &[SortedPoly],
    order: MonomialOrder,
    mut quotients: Option<&mut Vec<Vec<(Monomial, FieldElement)>>>,
) -> SortedPoly {
    let mut p = f.clone();
    let mut rem_desc: Vec<(Monomial, FieldElement)> = Vec::new();
    while let Some((lm, lc)) = p.terms.last().cloned() {
        match basis.iter().position(|g| g.lm().divides(&lm)) {
            Some(k) => {
                let g = &basis[k];
                let c = &lc / g.lc();
                let m = lm.div(g.lm());
                p = p.sub_mul(&c, &m, g, order);
                if let Some(q) = quotients.as_deref_mut() {
                    q[k].push((m, c));
                }
            }
            None => {
                rem_desc.push(p.terms.pop().unwrap());
            }
        }
    }
    rem_desc.reverse();
    SortedPoly { terms: rem_desc }
}

fn s_polynomial(f: &SortedPoly, g: &SortedPoly, order: MonomialOrder) -> SortedPoly {
    // f and g are monic
    let l = f.lm().lcm(g.lm());
    let zero = SortedPoly { terms: Vec::new() };
    zero.sub_mul(&-&FieldElement::one(), &l.div(f.lm()), f, order)
        .sub_mul(&FieldElement::one(), &l.div(g.lm()), g, order)
}

/// Reduced Gröbner basis of the ideal generated by `gens`, sorted by
/// decreasing leading monomial, every element monic.
pub(crate) fn buchberger(gens: &[Polynomial], order: MonomialOrder) -> Vec<SortedPoly> {
    let mut basis: Vec<SortedPoly> = Vec::new();
    for f in gens {
        if f.is_zero() {
            continue;
        }
        let mut p = SortedPoly::from_poly(f, order);
        p.make_monic();
        if p.lm().is_one() {
            return vec![p];
        }
        basis.push(p);
    }
    if basis.is_empty() {
        return basis;
    }

    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.insert((i, j));
        }
    }

    while let Some(&(i, j)) = pairs.iter().min_by(|a, b| pair_key(&basis, **a, **b, order)) {
        pairs.remove(&(i, j));
        let (li, lj) = (basis[i].lm(), basis[j].lm());
        if li.is_coprime(lj) {
            continue;
        }
        let l = li.lcm(lj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lm().divides(&l)
                && !pairs.contains(&ordered(i, k))
                && !pairs.contains(&ordered(j, k))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j], order);
        let mut r = reduce(&s, &basis, order, None);
        if r.is_zero() {
            continue;
        }
        r.make_monic();
        if r.lm().is_one() {
            return vec![r];
        }
        let n = basis.len();
        basis.push(r);
        for k in 0..n {
            pairs.insert((k, n));
        }
    }

    interreduce(basis, order)
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn pair_key(
    basis: &[SortedPoly],
    a: (usize, usize),
    b: (usize, usize),
    order: MonomialOrder,
) -> Ordering {
    let la = basis[a.0].lm().lcm(basis[a.1].lm());
    let lb = basis[b.0].lm().lcm(basis[b.1].lm());
    la.degree()
        .cmp(&lb.degree())
        .then_with(|| order.cmp(&la, &lb))
        .then_with(|| a.cmp(&b))
}

fn interreduce(basis: Vec<SortedPoly>, order: MonomialOrder) -> Vec<SortedPoly> {
    let minimal: Vec<SortedPoly> = basis
        .iter()
        .enumerate()
        .filter(|(i, g)| {
            !basis.iter().enumerate().any(|(j, h)| {
                j != *i && h.lm().divides(g.lm()) && (h.lm() != g.lm() || j < *i)
            })
        })
        .map(|(_, g)| g.clone())
        .collect();
    let mut reduced: Vec<SortedPoly> = (0..minimal.len())
        .map(|i| {
            let others: Vec<SortedPoly> = minimal
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g.clone())
                .collect();
            let mut r = reduce(&minimal[i], &others, order, None);
            r.make_monic();
            r
        })
        .collect();
    reduced.sort_by(|a, b| order.cmp(b.lm(), a.lm()));
    reduced
}
