//! Bounded-degree searches for first integrals and Darboux polynomials.
//!
//! Unknown polynomials are written over the ℚ-basis π·m, where m runs over
//! standard monomials of I(V) (so distinct coefficient vectors give distinct
//! classes modulo I(V)) and π over monomials in the parameters up to the
//! same degree bound. Every identity in k is split into ℚ-linear equations
//! by clearing denominators and comparing parameter monomials.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::solve::{rational_points, Unsolved};
use crate::dvariety::{induced_derivation, DVariety};
use crate::error::DvarError;
use crate::ideal::{eliminate, monomials_up_to};
use crate::linalg::{independent_subset, kernel};
use crate::poly::{FieldElement, Monomial, MonomialOrder, Polynomial, QPoly, Rational, RationalFunction, RingContext};

/// Nonconstant polynomial first integrals of total degree ≤ `degree_bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstIntegralBasis {
    pub degree_bound: u32,
    pub basis: Vec<Polynomial>,
}

/// δ_s p ≡ cofactor · p modulo I(V).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DarbouxPolynomial {
    pub p: Polynomial,
    pub cofactor: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DarbouxSearch {
    pub polynomials: Vec<DarbouxPolynomial>,
    /// Normalizations whose cofactor equations had infinitely many (or
    /// intractable) solutions and were therefore not enumerated.
    pub unresolved: usize,
}

/// The ℚ-basis π·m of the ansatz space, with the variable monomial m kept.
fn ansatz(d: &DVariety, degree: u32) -> Vec<(Monomial, Polynomial)> {
    let ring = d.ring();
    let m = ring.nparams();
    let monos = d.variety().groebner().standard_monomials(degree);
    let pmonos = monomials_up_to(m, if m == 0 { 0 } else { degree });
    let mut out = Vec::new();
    for mono in &monos {
        for pm in &pmonos {
            let pi = FieldElement::from_qpoly(QPoly::from_terms(
                m,
                [(pm.exponents().to_vec(), Rational::from_integer(1.into()))],
            ));
            out.push((mono.clone(), Polynomial::term(ring, mono.clone(), pi)));
        }
    }
    out
}

/// Rows over ℚ of the linear system Σⱼ aⱼ·columnⱼ = 0 with aⱼ ∈ ℚ.
fn rational_rows(columns: &[Polynomial]) -> Vec<Vec<Rational>> {
    let n = columns.len();
    let Some(first) = columns.first() else {
        return Vec::new();
    };
    let m = first.ring().nparams();
    let mut by_mono: BTreeMap<Monomial, Vec<(usize, FieldElement)>> = BTreeMap::new();
    for (j, col) in columns.iter().enumerate() {
        for (mono, c) in col.terms() {
            by_mono.entry(mono.clone()).or_default().push((j, c.clone()));
        }
    }
    let mut rows = Vec::new();
    for entries in by_mono.values() {
        let mut den = QPoly::one(m);
        for (_, c) in entries {
            den = QPoly::lcm(&den, &c.denominator(m));
        }
        let den = FieldElement::from_qpoly(den);
        let mut by_param: BTreeMap<Vec<u32>, Vec<Rational>> = BTreeMap::new();
        for (j, c) in entries {
            for (e, q) in (c * &den).numerator(m).terms() {
                let row = by_param
                    .entry(e.clone())
                    .or_insert_with(|| vec![Rational::zero(); n]);
                row[*j] += q;
            }
        }
        rows.extend(by_param.into_values());
    }
    rows
}

fn combine(basis: &[(Monomial, Polynomial)], coeffs: &[Rational]) -> Polynomial {
    let ring = basis[0].1.ring();
    let mut p = Polynomial::zero(ring);
    for ((_, b), c) in basis.iter().zip(coeffs) {
        if !c.is_zero() {
            p = &p + &b.scale(&FieldElement::from_rational(c.clone()));
        }
    }
    p
}

/// Indices of a maximal subset of `polys` independent over k modulo k·1.
fn independent_mod_constants(polys: &[Polynomial], monos: &[Monomial]) -> Vec<usize> {
    let cols: Vec<&Monomial> = monos.iter().filter(|m| !m.is_one()).collect();
    let vectors: Vec<Vec<FieldElement>> = polys
        .iter()
        .map(|p| cols.iter().map(|m| p.coefficient(m)).collect())
        .collect();
    independent_subset(&vectors, cols.len())
}

fn max_param_degree(p: &Polynomial) -> u32 {
    let m = p.ring().nparams();
    p.terms()
        .map(|(_, c)| c.numerator(m).total_degree().max(c.denominator(m).total_degree()))
        .max()
        .unwrap_or(0)
}

/// Simplest candidates first, so the greedy selection keeps them.
fn by_simplicity(polys: &mut [Polynomial]) {
    polys.sort_by_cached_key(|p| (p.total_degree(), max_param_degree(p), p.num_terms(), p.to_string()));
}

/// Divides by the leading coefficient when that does not change the
/// derivation's behaviour (the coefficient is a δ-constant).
fn normalize(p: &Polynomial) -> Polynomial {
    let Some((_, lc)) = p.leading_term(MonomialOrder::GrevLex) else {
        return p.clone();
    };
    if p.ring().delta_of(lc).is_zero() {
        p.scale(&lc.inv())
    } else {
        p.clone()
    }
}

/// Basis of {p : deg p ≤ bound, δ_s p ≡ 0 mod I(V)} modulo constants.
pub fn polynomial_first_integrals(d: &DVariety, degree_bound: u32) -> Result<FirstIntegralBasis, DvarError> {
    let basis = ansatz(d, degree_bound);
    let cols: Vec<Polynomial> = basis
        .iter()
        .map(|(_, b)| induced_derivation(d, b))
        .collect::<Result<_, _>>()?;
    let rows = rational_rows(&cols);
    let mut cands: Vec<Polynomial> = kernel(&rows, basis.len())
        .iter()
        .map(|v| combine(&basis, v))
        .collect();
    by_simplicity(&mut cands);
    let monos = d.variety().groebner().standard_monomials(degree_bound);
    let kept = independent_mod_constants(&cands, &monos);
    let mut out = Vec::new();
    for i in kept {
        let p = normalize(&cands[i]);
        if !induced_derivation(d, &p)?.is_zero() {
            return Err(DvarError::Internal("first integral failed its recheck".into()));
        }
        out.push(p);
    }
    Ok(FirstIntegralBasis {
        degree_bound,
        basis: out,
    })
}

/// All (p, λ) with deg p ≤ `degree_bound`, deg λ ≤ `cofactor_bound` and
/// δ_s p ≡ λ·p modulo I(V), up to k-multiples; one basis of each
/// eigenspace is returned.
pub fn darboux_polynomials(d: &DVariety, degree_bound: u32, cofactor_bound: u32) -> Result<DarbouxSearch, DvarError> {
    let ring = d.ring();
    let v = d.variety();
    let ps = ansatz(d, degree_bound);
    let ls = ansatz(d, cofactor_bound);
    let (na, nb) = (ps.len(), ls.len());

    // columns for the unknowns aᵢ and the products aᵢ·b_k
    let mut cols: Vec<Polynomial> = ps
        .iter()
        .map(|(_, p)| induced_derivation(d, p))
        .collect::<Result<_, _>>()?;
    for (_, p) in &ps {
        for (_, l) in &ls {
            cols.push(-&v.reduce(&(l * p)));
        }
    }
    let rows = rational_rows(&cols);

    let mut names: Vec<String> = (0..na).map(|i| format!("a{i}")).collect();
    names.extend((0..nb).map(|k| format!("b{k}")));
    let ab = RingContext::autonomous(&names)?;
    let b_ring = RingContext::autonomous(&names[na..])?;
    let eqs: Vec<Polynomial> = rows
        .iter()
        .map(|row| {
            let mut e = Polynomial::zero(&ab);
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut t = Polynomial::constant(&ab, FieldElement::from_rational(c.clone()));
                if j < na {
                    t = &t * &Polynomial::var(&ab, j);
                } else {
                    let (i, k) = ((j - na) / nb, (j - na) % nb);
                    t = &(&t * &Polynomial::var(&ab, i)) * &Polynomial::var(&ab, na + k);
                }
                e = &e + &t;
            }
            e
        })
        .filter(|e| !e.is_zero())
        .collect();

    let a_names: Vec<&str> = names[..na].iter().map(String::as_str).collect();
    let pivots: Vec<usize> = (0..na).filter(|&i| !ps[i].0.is_one()).collect();
    let mut cofactors: Vec<Polynomial> = Vec::new();
    let mut unresolved = 0;
    for (n, &i) in pivots.iter().enumerate() {
        let mut gens = eqs.clone();
        gens.push(&Polynomial::var(&ab, i) - &Polynomial::one(&ab));
        gens.extend(pivots[..n].iter().map(|&j| Polynomial::var(&ab, j)));
        let elim = eliminate(&gens, &a_names)?;
        let moved: Vec<Polynomial> = elim
            .iter()
            .map(|g| g.rename_into(&b_ring))
            .collect::<Result<_, _>>()?;
        match rational_points(&b_ring, &moved) {
            Ok(points) => {
                for pt in points {
                    let lambda = combine(&ls, &pt);
                    if !cofactors.contains(&lambda) {
                        cofactors.push(lambda);
                    }
                }
            }
            Err(Unsolved::PositiveDimensional | Unsolved::HugeCoefficients) => unresolved += 1,
        }
    }

    let monos = v.groebner().standard_monomials(degree_bound);
    let mut found = Vec::new();
    for lambda in cofactors {
        let cols: Vec<Polynomial> = ps
            .iter()
            .map(|(_, p)| Ok(&induced_derivation(d, p)? - &v.reduce(&(&lambda * p))))
            .collect::<Result<_, DvarError>>()?;
        let rows = rational_rows(&cols);
        let mut cands: Vec<Polynomial> = kernel(&rows, na).iter().map(|c| combine(&ps, c)).collect();
        by_simplicity(&mut cands);
        for i in independent_mod_constants(&cands, &monos) {
            let p = &cands[i];
            if v.vanishes(p) {
                continue;
            }
            let p = normalize(p);
            let cofactor = recheck_cofactor(d, &p, &lambda)?;
            found.push(DarbouxPolynomial { p, cofactor });
        }
    }
    found.sort_by_cached_key(|dp| (dp.p.total_degree(), dp.p.to_string(), dp.cofactor.to_string()));
    let _ = ring;
    Ok(DarbouxSearch {
        polynomials: found,
        unresolved,
    })
}

/// After normalization by a δ-constant the cofactor is unchanged; confirm.
fn recheck_cofactor(d: &DVariety, p: &Polynomial, lambda: &Polynomial) -> Result<Polynomial, DvarError> {
    let lhs = induced_derivation(d, p)?;
    let rhs = d.variety().reduce(&(lambda * p));
    if lhs != rhs {
        return Err(DvarError::Internal("Darboux congruence failed its recheck".into()));
    }
    Ok(lambda.clone())
}

/// Exponent vectors (mᵢ) with Σ_{mᵢ>0} mᵢ·deg pᵢ ≤ bound and
/// Σ_{mᵢ<0} |mᵢ|·deg pᵢ ≤ bound, not all zero.
fn exponent_vectors(degs: &[u32], bound: u32) -> Vec<Vec<i32>> {
    fn rec(i: usize, degs: &[u32], pos: u32, neg: u32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if i == degs.len() {
            if cur.iter().any(|&e| e != 0) {
                out.push(cur.clone());
            }
            return;
        }
        let d = degs[i].max(1);
        for e in -((neg / d) as i32)..=((pos / d) as i32) {
            cur[i] = e;
            let (p, n) = if e >= 0 {
                (pos - e as u32 * d, neg)
            } else {
                (pos, neg - (-e) as u32 * d)
            };
            rec(i + 1, degs, p, n, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, degs, bound, bound, &mut vec![0; degs.len()], &mut out);
    // low degree and few negative exponents first: that representative
    // survives deduplication against inverses
    out.sort_by_key(|m| {
        let deg: u32 = m.iter().zip(degs).map(|(e, d)| e.unsigned_abs() * d).sum();
        let neg = m.iter().filter(|&&e| e < 0).count();
        let rev: Vec<i32> = m.iter().map(|e| -e).collect();
        (deg, neg, rev)
    });
    out
}

/// Whether φ restricted to V is an element of k.
fn constant_on(d: &DVariety, phi: &RationalFunction) -> bool {
    if phi.as_constant().is_some() {
        return true;
    }
    let v = d.variety();
    let n = v.reduce(phi.numerator());
    let m = v.reduce(phi.denominator());
    let (Some((_, cn)), Some((_, cm))) = (n.leading_term(MonomialOrder::GrevLex), m.leading_term(MonomialOrder::GrevLex)) else {
        return true;
    };
    let c = cn * &cm.inv();
    v.vanishes(&(&n - &m.scale(&c)))
}

/// Products Πpᵢ^{mᵢ} of Darboux polynomials whose cofactors cancel, with
/// numerator and denominator degree ≤ `degree_bound`; each is rechecked
/// to satisfy δ_s φ = 0 on V.
pub fn rational_first_integrals(
    d: &DVariety,
    degree_bound: u32,
    cofactor_bound: u32,
) -> Result<Vec<RationalFunction>, DvarError> {
    let search = darboux_polynomials(d, degree_bound, cofactor_bound)?;
    let dps = &search.polynomials;
    let v = d.variety();
    let ring = d.ring();
    let degs: Vec<u32> = dps.iter().map(|dp| dp.p.total_degree()).collect();
    let mut out: Vec<RationalFunction> = Vec::new();
    for ms in exponent_vectors(&degs, degree_bound) {
        let mut sum = Polynomial::zero(ring);
        for (dp, &e) in dps.iter().zip(&ms) {
            if e != 0 {
                sum = &sum + &dp.cofactor.scale(&FieldElement::from_integer(e as i64));
            }
        }
        if !v.reduce(&sum).is_zero() {
            continue;
        }
        let mut num = Polynomial::one(ring);
        let mut den = Polynomial::one(ring);
        for (dp, &e) in dps.iter().zip(&ms) {
            if e > 0 {
                num = &num * &dp.p.pow(e as u32);
            } else if e < 0 {
                den = &den * &dp.p.pow((-e) as u32);
            }
        }
        let phi = RationalFunction::new(normalize(&num), den)?;
        if constant_on(d, &phi) {
            continue;
        }
        if !v.vanishes(d.spec().apply_rational(&phi).numerator()) {
            continue;
        }
        let dup = out
            .iter()
            .any(|psi| *psi == phi || psi.inv().map(|i| i == phi).unwrap_or(false) || proportional(psi, &phi));
        if !dup {
            out.push(phi);
        }
    }
    out.sort_by_cached_key(|f| (f.numerator().total_degree() + f.denominator().total_degree(), f.to_string()));
    Ok(out)
}

/// ψ = c·φ for some c ∈ k.
fn proportional(psi: &RationalFunction, phi: &RationalFunction) -> bool {
    if psi.denominator() != phi.denominator() {
        return false;
    }
    let (a, b) = (psi.numerator(), phi.numerator());
    match (a.leading_term(MonomialOrder::GrevLex), b.leading_term(MonomialOrder::GrevLex)) {
        (Some((ma, ca)), Some((mb, cb))) if ma == mb => *a == b.scale(&(ca * &cb.inv())),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dvariety::{validate_section, Section, Variety};
    use crate::expr::parse_polynomial;

    fn affine(names: &[&str], comps: &[&str]) -> DVariety {
        let r = RingContext::autonomous(names).unwrap();
        let s: Vec<Polynomial> = comps.iter().map(|c| parse_polynomial(c, &r).unwrap()).collect();
        validate_section(&Variety::affine_space(&r), &Section::new(&r, s).unwrap()).unwrap()
    }

    fn strings(ps: &[Polynomial]) -> Vec<String> {
        ps.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn saddle_has_xy() {
        let d = affine(&["x", "y"], &["x", "-y"]);
        let fi = polynomial_first_integrals(&d, 2).unwrap();
        assert_eq!(strings(&fi.basis), vec!["x*y"]);
    }

    #[test]
    fn unit_field_has_no_polynomial_integral() {
        let d = affine(&["x"], &["1"]);
        assert!(polynomial_first_integrals(&d, 3).unwrap().basis.is_empty());
    }

    #[test]
    fn darboux_of_logistic_field() {
        let d = affine(&["x"], &["x^2 - x"]);
        let s = darboux_polynomials(&d, 1, 1).unwrap();
        let got: Vec<(String, String)> = s
            .polynomials
            .iter()
            .map(|dp| (dp.p.to_string(), dp.cofactor.to_string()))
            .collect();
        assert_eq!(got, vec![("x".into(), "x - 1".into()), ("x - 1".into(), "x".into())]);
        assert_eq!(s.unresolved, 0);
    }

    #[test]
    fn saddle_darboux_and_rational_integrals() {
        let d = affine(&["x", "y"], &["x", "-y"]);
        let s = darboux_polynomials(&d, 1, 0).unwrap();
        let got: Vec<(String, String)> = s
            .polynomials
            .iter()
            .map(|dp| (dp.p.to_string(), dp.cofactor.to_string()))
            .collect();
        assert_eq!(got, vec![("x".into(), "1".into()), ("y".into(), "-1".into())]);
        let ri = rational_first_integrals(&d, 2, 0).unwrap();
        assert!(ri.iter().any(|f| f.to_string() == "x*y"));
    }

    #[test]
    fn shear_field_integral_surfaces_through_cofactor_zero() {
        let d = affine(&["x", "y"], &["x", "x"]);
        let ri = rational_first_integrals(&d, 1, 0).unwrap();
        assert!(ri.iter().any(|f| f.to_string() == "x - y"));
    }

    #[test]
    fn exponent_vectors_respect_budgets() {
        let v = exponent_vectors(&[1, 2], 2);
        assert!(v.contains(&vec![2, -1]));
        assert!(!v.contains(&vec![1, 1]));
    }
}
