//! D-rational maps between D-varieties, first integrals and dominance.

mod integrals;
mod solve;

pub use integrals::{
    darboux_polynomials, polynomial_first_integrals, rational_first_integrals, DarbouxPolynomial,
    DarbouxSearch, FirstIntegralBasis,
};

use crate::dvariety::{validate_section, DVariety, Section, Variety};
use crate::error::{DvarError, PolyError};
use crate::ideal::{eliminate, krull_dimension, Dimension};
use crate::poly::{same_ring, Polynomial, RationalFunction, Ring};

/// f = (f₁, …, f_m): source ⇢ target, one component per target variable.
#[derive(Clone, Debug)]
pub struct RationalMap {
    source: DVariety,
    target: DVariety,
    components: Vec<RationalFunction>,
}

impl RationalMap {
    /// Components must live over the source ring and have denominators that
    /// do not vanish identically on the source.
    pub fn new(source: DVariety, target: DVariety, components: Vec<RationalFunction>) -> Result<Self, DvarError> {
        if !source.ring().same_base_field(target.ring()) {
            return Err(DvarError::BaseFieldMismatch);
        }
        if components.len() != target.ring().nvars() {
            return Err(PolyError::Arity {
                expected: target.ring().nvars(),
                found: components.len(),
            }
            .into());
        }
        for (j, c) in components.iter().enumerate() {
            if !same_ring(c.ring(), source.ring()) {
                return Err(PolyError::ContextMismatch.into());
            }
            if source.variety().vanishes(c.denominator()) {
                return Err(DvarError::SingularComponent(j));
            }
        }
        Ok(RationalMap {
            source,
            target,
            components,
        })
    }

    /// The map D → (𝔸¹, 0) given by a single function, with target
    /// variable `t`.
    pub fn to_constants(source: DVariety, phi: RationalFunction) -> Result<Self, DvarError> {
        let ring = source.ring().with_vars(&["t"])?;
        let target = validate_section(&Variety::affine_space(&ring), &Section::zero(&ring))?;
        Self::new(source, target, vec![phi])
    }

    pub fn source(&self) -> &DVariety {
        &self.source
    }

    pub fn target(&self) -> &DVariety {
        &self.target
    }

    pub fn components(&self) -> &[RationalFunction] {
        &self.components
    }

    /// g ∘ self.
    pub fn then(&self, g: &RationalMap) -> Result<RationalMap, DvarError> {
        let comps = g
            .components
            .iter()
            .map(|c| compose_rational(c, &self.components))
            .collect::<Result<Vec<_>, _>>()?;
        RationalMap::new(self.source.clone(), g.target.clone(), comps)
    }
}

/// φ(args) for a rational function φ.
fn compose_rational(phi: &RationalFunction, args: &[RationalFunction]) -> Result<RationalFunction, DvarError> {
    let n = RationalFunction::compose(phi.numerator(), args)?;
    let d = RationalFunction::compose(phi.denominator(), args)?;
    Ok(n.checked_div(&d)?)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoordinateCheck {
    pub target_var: String,
    /// Normal form of the numerator of δ(fⱼ) − tⱼ(f) modulo I(source).
    pub residue: Polynomial,
    pub passed: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MapReport {
    pub holds: bool,
    pub coordinates: Vec<CoordinateCheck>,
}

fn check_lands_in_target(f: &RationalMap) -> Result<(), DvarError> {
    for h in f.target.variety().gens() {
        let comp = RationalFunction::compose(h, &f.components)?;
        if !f.source.variety().vanishes(comp.numerator()) {
            return Err(DvarError::NotIntoTarget(h.to_string()));
        }
    }
    Ok(())
}

/// δ_{s₁}(fⱼ) = tⱼ(f) in k(source) for every j, tested on numerators
/// modulo √I(source).
pub fn is_d_rational_map(f: &RationalMap) -> Result<MapReport, DvarError> {
    check_lands_in_target(f)?;
    let src = &f.source;
    let mut coordinates = Vec::new();
    for (j, (fj, tj)) in f
        .components
        .iter()
        .zip(f.target.spec().var_deltas())
        .enumerate()
    {
        let lhs = src.spec().apply_rational(fj);
        let rhs = RationalFunction::compose(tj, &f.components)?;
        let diff = &lhs - &rhs;
        let num = diff.numerator();
        coordinates.push(CoordinateCheck {
            target_var: f.target.ring().vars()[j].clone(),
            residue: src.variety().reduce(num),
            passed: src.variety().vanishes(num),
        });
    }
    Ok(MapReport {
        holds: coordinates.iter().all(|c| c.passed),
        coordinates,
    })
}

/// Generators (in the target ring) of the Zariski closure of the image.
pub fn image_closure(f: &RationalMap) -> Result<Vec<Polynomial>, DvarError> {
    let src = f.source.ring();
    let tgt = f.target.ring();
    let (ns, nt) = (src.nvars(), tgt.nvars());
    let mut names: Vec<String> = src.vars().to_vec();
    for v in tgt.vars() {
        let probe = src.with_vars(&names)?;
        names.push(probe.fresh_name(v));
    }
    let probe = src.with_vars(&names)?;
    let w = probe.fresh_name("w");
    names.push(w.clone());
    let graph: Ring = src.with_vars(&names)?;
    let smap: Vec<usize> = (0..ns).collect();

    let mut gens: Vec<Polynomial> = f
        .source
        .variety()
        .gens()
        .iter()
        .map(|g| g.embed(&graph, &smap))
        .collect();
    let mut dens = Polynomial::one(&graph);
    for (j, c) in f.components.iter().enumerate() {
        let num = c.numerator().embed(&graph, &smap);
        let den = c.denominator().embed(&graph, &smap);
        let y = Polynomial::var(&graph, ns + j);
        gens.push(&(&den * &y) - &num);
        dens = &dens * &den;
    }
    gens.push(&(&Polynomial::var(&graph, ns + nt) * &dens) - &Polynomial::one(&graph));
    let mut drop: Vec<&str> = src.vars().iter().map(String::as_str).collect();
    drop.push(&w);
    let elim = eliminate(&gens, &drop)?;
    let back: Vec<usize> = (0..names.len())
        .map(|i| if (ns..ns + nt).contains(&i) { i - ns } else { 0 })
        .collect();
    Ok(elim.iter().map(|g| g.embed(tgt, &back)).collect())
}

fn require_prime_target(f: &RationalMap) -> Result<(), DvarError> {
    if f.target.variety().is_prime() {
        Ok(())
    } else {
        Err(DvarError::TargetNotPrime)
    }
}

/// The image is Zariski dense in the (irreducible) target.
pub fn is_dominant(f: &RationalMap) -> Result<bool, DvarError> {
    require_prime_target(f)?;
    check_lands_in_target(f)?;
    let closure = image_closure(f)?;
    let dim = krull_dimension(f.target.ring(), &closure)?;
    let tv = f.target.variety();
    Ok(dim == Dimension::Dim(tv.dimension()) && closure.iter().all(|g| tv.vanishes(g)))
}

/// The generic fibre is finite: dim source = dim of the image closure.
pub fn is_generically_finite(f: &RationalMap) -> Result<bool, DvarError> {
    require_prime_target(f)?;
    check_lands_in_target(f)?;
    let closure = image_closure(f)?;
    let dim = krull_dimension(f.target.ring(), &closure)?;
    Ok(dim == Dimension::Dim(f.source.variety().dimension()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{FieldElement, RingContext};
    use std::collections::BTreeMap;

    fn affine(names: &[&str], comps: &[&str]) -> DVariety {
        let r = RingContext::autonomous(names).unwrap();
        let s: Vec<Polynomial> = comps
            .iter()
            .map(|c| crate::expr::parse_polynomial(c, &r).unwrap())
            .collect();
        validate_section(&Variety::affine_space(&r), &Section::new(&r, s).unwrap()).unwrap()
    }

    fn map(src: &DVariety, tgt: &DVariety, comps: &[&str]) -> RationalMap {
        let c = comps
            .iter()
            .map(|c| crate::expr::parse_rational_function(c, src.ring()).unwrap())
            .collect();
        RationalMap::new(src.clone(), tgt.clone(), c).unwrap()
    }

    #[test]
    fn scaling_map_is_a_d_map() {
        let src = affine(&["x", "y"], &["x", "y"]);
        let tgt = affine(&["t"], &["t"]);
        assert!(is_d_rational_map(&map(&src, &tgt, &["x"])).unwrap().holds);
        assert!(!is_d_rational_map(&map(&src, &tgt, &["x + 1"])).unwrap().holds);
    }

    #[test]
    fn translation_to_constants() {
        let mut d = BTreeMap::new();
        d.insert("d0".to_string(), FieldElement::one());
        let r = RingContext::new(&["x"], &["d0"], d).unwrap();
        let one = Polynomial::one(&r);
        let src = validate_section(&Variety::affine_space(&r), &Section::new(&r, vec![one]).unwrap()).unwrap();
        let phi = crate::expr::parse_rational_function("x - d0", &r).unwrap();
        let f = RationalMap::to_constants(src, phi).unwrap();
        assert!(is_d_rational_map(&f).unwrap().holds);
    }

    #[test]
    fn dominance_truth_table() {
        let a2 = affine(&["x", "y"], &["0", "0"]);
        let a1 = affine(&["t"], &["0"]);
        let proj = map(&a2, &a1, &["x"]);
        assert!(is_dominant(&proj).unwrap());
        assert!(!is_generically_finite(&proj).unwrap());
        let curve = map(&a1, &a2, &["t", "t^2"]);
        assert!(!is_dominant(&curve).unwrap());
        let sq = map(&a1, &a1, &["t^2"]);
        assert!(is_dominant(&sq).unwrap());
        assert!(is_generically_finite(&sq).unwrap());
    }
}
