//! Affine varieties with a section of the prolongation.

use std::collections::BTreeMap;

use crate::error::{DvarError, PolyError};
use crate::ideal::{dimension_of, radical_member_in, Dimension, GroebnerBasis};
use crate::poly::{same_ring, DerivationSpec, FieldElement, MonomialOrder, Polynomial, Ring};

/// Properties of I(V) asserted by the user. Nothing here is verified.
#[derive(Clone, Copy, Default, PartialEq, Eq, Debug)]
pub struct Claims {
    pub radical: bool,
    pub prime: bool,
}

/// V ⊆ 𝔸ⁿ given by generators of its ideal.
#[derive(Clone, Debug)]
pub struct Variety {
    ring: Ring,
    gens: Vec<Polynomial>,
    claims: Claims,
    gb: GroebnerBasis,
}

impl Variety {
    /// Rejects the empty variety. An empty or all-zero generator list is
    /// affine space.
    pub fn new(ring: &Ring, gens: Vec<Polynomial>, claims: Claims) -> Result<Self, DvarError> {
        if gens.iter().any(|g| !same_ring(g.ring(), ring)) {
            return Err(PolyError::ContextMismatch.into());
        }
        let gb = GroebnerBasis::compute(ring, &gens, MonomialOrder::GrevLex);
        if gb.is_unit() {
            return Err(DvarError::EmptyVariety);
        }
        Ok(Variety {
            ring: ring.clone(),
            gens,
            claims,
            gb,
        })
    }

    pub fn affine_space(ring: &Ring) -> Self {
        Self::new(ring, Vec::new(), Claims::default()).expect("affine space is nonempty")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn claims(&self) -> Claims {
        self.claims
    }

    /// Affine space is irreducible without being told.
    pub fn is_prime(&self) -> bool {
        self.claims.prime || self.gb.is_zero_ideal()
    }

    pub fn groebner(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn dimension(&self) -> usize {
        match dimension_of(&self.gb) {
            Dimension::Dim(d) => d,
            Dimension::Empty => unreachable!("varieties are nonempty"),
        }
    }

    /// f ∈ √I(V).
    pub fn vanishes(&self, f: &Polynomial) -> bool {
        radical_member_in(f, &self.gb)
    }

    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        self.gb.reduce(f)
    }
}

/// One polynomial per variable: the components gᵢ of s.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Section {
    components: Vec<Polynomial>,
}

impl Section {
    pub fn new(ring: &Ring, components: Vec<Polynomial>) -> Result<Self, PolyError> {
        // DerivationSpec performs the arity and ring checks
        DerivationSpec::new(ring, components.clone())?;
        Ok(Section { components })
    }

    pub fn from_named(ring: &Ring, components: BTreeMap<String, Polynomial>) -> Result<Self, PolyError> {
        let spec = DerivationSpec::from_named(ring, components)?;
        Ok(Section {
            components: spec.var_deltas().to_vec(),
        })
    }

    pub fn zero(ring: &Ring) -> Self {
        Section {
            components: vec![Polynomial::zero(ring); ring.nvars()],
        }
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }
}

/// A generator together with the normal form of the quantity tested for it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratorCheck {
    pub generator: Polynomial,
    pub residue: Polynomial,
    pub passed: bool,
}

/// A variety with a section that has passed validation. The only way to
/// obtain one is [`validate_section`] (or operations built on it).
#[derive(Clone, Debug)]
pub struct DVariety {
    variety: Variety,
    section: Section,
    spec: DerivationSpec,
}

impl DVariety {
    pub fn variety(&self) -> &Variety {
        &self.variety
    }

    pub fn section(&self) -> &Section {
        &self.section
    }

    pub fn spec(&self) -> &DerivationSpec {
        &self.spec
    }

    pub fn ring(&self) -> &Ring {
        self.variety.ring()
    }
}

/// TV or τV: the variables x₁..xₙ followed by their duals.
#[derive(Clone, Debug)]
pub struct DoubledVariety {
    ring: Ring,
    gens: Vec<Polynomial>,
}

impl DoubledVariety {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn base_vars(&self) -> usize {
        self.ring.nvars() / 2
    }
}

/// Doubled ring: each variable `v` gets a dual `v_d`, renamed if taken.
fn doubled_ring(ring: &Ring) -> Ring {
    let mut names: Vec<String> = ring.vars().to_vec();
    for v in ring.vars() {
        let probe = ring.with_vars(&names).expect("distinct names");
        names.push(probe.fresh_name(&format!("{v}_d")));
    }
    ring.with_vars(&names).expect("fresh duals")
}

fn doubled(v: &Variety, twisted: bool) -> DoubledVariety {
    let ring = doubled_ring(v.ring());
    let n = v.ring().nvars();
    let base: Vec<usize> = (0..n).collect();
    let mut gens = Vec::new();
    for f in v.gens().iter().filter(|f| !f.is_zero()) {
        gens.push(f.embed(&ring, &base));
    }
    for f in v.gens().iter().filter(|f| !f.is_zero()) {
        let mut lin = if twisted {
            f.coeff_delta().embed(&ring, &base)
        } else {
            Polynomial::zero(&ring)
        };
        for i in 0..n {
            let d = f.partial(i);
            if !d.is_zero() {
                lin = &lin + &(&d.embed(&ring, &base) * &Polynomial::var(&ring, n + i));
            }
        }
        gens.push(lin);
    }
    DoubledVariety { ring, gens }
}

/// TV: f(x) and Σ ∂f/∂xᵢ·yᵢ for each generator f.
pub fn tangent_bundle(v: &Variety) -> DoubledVariety {
    doubled(v, false)
}

/// τV: f(x) and f^δ(x) + Σ ∂f/∂xᵢ·yᵢ for each generator f.
pub fn prolongation(v: &Variety) -> DoubledVariety {
    doubled(v, true)
}

/// Checks that s maps V into τV: every f^δ + Σ ∂f/∂xᵢ·gᵢ lies in √I(V).
pub fn validate_section(v: &Variety, s: &Section) -> Result<DVariety, DvarError> {
    if v.groebner().is_unit() {
        return Err(DvarError::EmptyVariety);
    }
    let spec = DerivationSpec::new(v.ring(), s.components.clone())?;
    let checks = section_residues(v, &spec);
    if checks.iter().all(|c| c.passed) {
        Ok(DVariety {
            variety: v.clone(),
            section: s.clone(),
            spec,
        })
    } else {
        Err(DvarError::InvalidSection(
            checks.into_iter().filter(|c| !c.passed).collect(),
        ))
    }
}

fn section_residues(v: &Variety, spec: &DerivationSpec) -> Vec<GeneratorCheck> {
    v.gens()
        .iter()
        .map(|f| {
            let r = spec.apply(f);
            GeneratorCheck {
                generator: f.clone(),
                passed: v.vanishes(&r),
                residue: v.reduce(&r),
            }
        })
        .collect()
}

/// δ_s(f + I(V)) as the normal form of δ_s f.
pub fn induced_derivation(d: &DVariety, f: &Polynomial) -> Result<Polynomial, DvarError> {
    if !same_ring(f.ring(), d.ring()) {
        return Err(PolyError::ContextMismatch.into());
    }
    Ok(d.variety.reduce(&d.spec.apply(f)))
}

/// Outcome of a δ-closure check on a list of generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubvarietyReport {
    pub holds: bool,
    pub checks: Vec<GeneratorCheck>,
}

/// W = V(w_gens) is a D-subvariety iff δ_s h ∈ √I(W) for each generator h.
/// W must lie inside V.
pub fn is_d_subvariety(d: &DVariety, w_gens: &[Polynomial]) -> Result<SubvarietyReport, DvarError> {
    if w_gens.iter().any(|h| !same_ring(h.ring(), d.ring())) {
        return Err(PolyError::ContextMismatch.into());
    }
    let wgb = GroebnerBasis::compute(d.ring(), w_gens, MonomialOrder::GrevLex);
    if let Some(f) = d.variety.gens().iter().find(|f| !radical_member_in(f, &wgb)) {
        return Err(DvarError::NotSubvariety(f.to_string()));
    }
    let mut all = w_gens.to_vec();
    all.extend(d.variety.gens().iter().cloned());
    let gb = GroebnerBasis::compute(d.ring(), &all, MonomialOrder::GrevLex);
    let checks: Vec<GeneratorCheck> = w_gens
        .iter()
        .map(|h| {
            let r = d.spec.apply(h);
            GeneratorCheck {
                generator: h.clone(),
                passed: radical_member_in(&r, &gb),
                residue: gb.reduce(&r),
            }
        })
        .collect();
    Ok(SubvarietyReport {
        holds: checks.iter().all(|c| c.passed),
        checks,
    })
}

/// A coordinate where gᵢ(a) ≠ δ(aᵢ).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointMismatch {
    pub var: String,
    pub section_value: FieldElement,
    pub delta_value: FieldElement,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DPointReport {
    pub holds: bool,
    pub mismatches: Vec<PointMismatch>,
}

/// s(a) = ∇(a): the point lies on V and gᵢ(a) = δ(aᵢ) for every i.
pub fn is_d_point(d: &DVariety, point: &BTreeMap<String, FieldElement>) -> Result<DPointReport, DvarError> {
    let ring = d.ring();
    for name in point.keys() {
        if ring.var_index(name).is_none() {
            return Err(PolyError::UnknownVariable(name.clone()).into());
        }
    }
    if let Some(v) = ring.vars().iter().find(|v| !point.contains_key(*v)) {
        return Err(DvarError::Degenerate(format!("no value given for {v}")));
    }
    for f in d.variety.gens() {
        if !f.evaluate_named(point)?.is_zero() {
            return Err(DvarError::NotOnVariety(f.to_string()));
        }
    }
    let mut mismatches = Vec::new();
    for (i, g) in d.spec.var_deltas().iter().enumerate() {
        let name = &ring.vars()[i];
        let section_value = g.evaluate_named(point)?;
        let delta_value = ring.delta_of(&point[name]);
        if section_value != delta_value {
            mismatches.push(PointMismatch {
                var: name.clone(),
                section_value,
                delta_value,
            });
        }
    }
    Ok(DPointReport {
        holds: mismatches.is_empty(),
        mismatches,
    })
}

/// (V × W, s × t). Variables of the second factor that clash with the first
/// get the suffix `_2`.
pub fn product(d1: &DVariety, d2: &DVariety) -> Result<DVariety, DvarError> {
    let (r1, r2) = (d1.ring(), d2.ring());
    if !r1.same_base_field(r2) {
        return Err(DvarError::BaseFieldMismatch);
    }
    let mut names: Vec<String> = r1.vars().to_vec();
    for v in r2.vars() {
        let probe = r1.with_vars(&names)?;
        let name = if probe.var_index(v).is_some() || probe.param_index(v).is_some() {
            probe.fresh_name(&format!("{v}_2"))
        } else {
            v.clone()
        };
        names.push(name);
    }
    let ring = r1.with_vars(&names)?;
    let (n1, n2) = (r1.nvars(), r2.nvars());
    let m1: Vec<usize> = (0..n1).collect();
    let m2: Vec<usize> = (n1..n1 + n2).collect();
    let gens: Vec<Polynomial> = d1
        .variety
        .gens()
        .iter()
        .map(|f| f.embed(&ring, &m1))
        .chain(d2.variety.gens().iter().map(|f| f.embed(&ring, &m2)))
        .collect();
    let comps: Vec<Polynomial> = d1
        .spec
        .var_deltas()
        .iter()
        .map(|g| g.embed(&ring, &m1))
        .chain(d2.spec.var_deltas().iter().map(|g| g.embed(&ring, &m2)))
        .collect();
    let claims = Claims {
        radical: d1.variety.claims.radical && d2.variety.claims.radical,
        prime: false,
    };
    let v = Variety::new(&ring, gens, claims)?;
    let s = Section::new(&ring, comps)?;
    validate_section(&v, &s).map_err(|e| match e {
        DvarError::InvalidSection(_) => DvarError::Internal("product section failed validation".into()),
        e => e,
    })
}

/// Verdicts for a user-supplied decomposition of V into components.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ComponentsReport {
    /// The section is not a section of V itself; I(V) is not a δ-ideal.
    AmbientFailure(Vec<GeneratorCheck>),
    Components(Vec<SubvarietyReport>),
}

impl ComponentsReport {
    pub fn holds(&self) -> bool {
        match self {
            ComponentsReport::AmbientFailure(_) => false,
            ComponentsReport::Components(rs) => rs.iter().all(|r| r.holds),
        }
    }
}

/// Checks that the components cut out V (up to radical) and runs the
/// D-subvariety test on each. Primality of the components is not checked.
pub fn components_delta_check(
    d: &DVariety,
    components: &[Vec<Polynomial>],
) -> Result<Vec<SubvarietyReport>, DvarError> {
    if components.is_empty() {
        return Err(DvarError::DecompositionMismatch);
    }
    for c in components {
        if c.iter().any(|h| !same_ring(h.ring(), d.ring())) {
            return Err(PolyError::ContextMismatch.into());
        }
    }
    // generators of the product ideal Π Cⱼ, whose radical is that of ∩ Cⱼ
    let mut products = vec![Polynomial::one(d.ring())];
    for c in components {
        let gens: Vec<&Polynomial> = c.iter().filter(|h| !h.is_zero()).collect();
        if gens.is_empty() {
            // the zero ideal: this component is all of 𝔸ⁿ
            continue;
        }
        products = products
            .iter()
            .flat_map(|p| gens.iter().map(move |h| p * *h))
            .collect();
    }
    if components.iter().any(|c| c.iter().all(Polynomial::is_zero)) {
        products = vec![Polynomial::zero(d.ring())];
    }
    let same = crate::ideal::radical_equal(&products, d.variety.gens())?;
    if !same {
        return Err(DvarError::DecompositionMismatch);
    }
    components.iter().map(|c| is_d_subvariety(d, c)).collect()
}

/// As [`components_delta_check`], starting from a section that has not been
/// validated. An invalid section means I(V) itself is not a δ-ideal.
pub fn components_delta_check_ambient(
    v: &Variety,
    s: &Section,
    components: &[Vec<Polynomial>],
) -> Result<ComponentsReport, DvarError> {
    match validate_section(v, s) {
        Ok(d) => Ok(ComponentsReport::Components(components_delta_check(&d, components)?)),
        Err(DvarError::InvalidSection(fails)) => Ok(ComponentsReport::AmbientFailure(fails)),
        Err(e) => Err(e),
    }
}

/// Dimension of the generic type: dim V.
pub fn generic_type_dimension(d: &DVariety) -> usize {
    d.variety.dimension()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::RingContext;

    fn poizat() -> DVariety {
        let r = RingContext::autonomous(&["x", "y", "z"]).unwrap();
        let (x, y, z) = (Polynomial::var(&r, 0), Polynomial::var(&r, 1), Polynomial::var(&r, 2));
        let one = Polynomial::one(&r);
        let v = Variety::new(&r, vec![&(&x * &z) - &one], Claims::default()).unwrap();
        let s = Section::new(&r, vec![y.clone(), &y * &z, -&(&y * &(&z * &z))]).unwrap();
        validate_section(&v, &s).unwrap()
    }

    #[test]
    fn poizat_validates_and_kills_its_generator() {
        let d = poizat();
        let f = d.variety().gens()[0].clone();
        assert!(induced_derivation(&d, &f).unwrap().is_zero());
        assert_eq!(generic_type_dimension(&d), 2);
    }

    #[test]
    fn circle_with_constant_field_is_not_a_section() {
        let r = RingContext::autonomous(&["x", "y"]).unwrap();
        let (x, y) = (Polynomial::var(&r, 0), Polynomial::var(&r, 1));
        let f = &(&(&x * &x) + &(&y * &y)) - &Polynomial::one(&r);
        let v = Variety::new(&r, vec![f], Claims::default()).unwrap();
        let s = Section::new(&r, vec![Polynomial::one(&r), Polynomial::zero(&r)]).unwrap();
        match validate_section(&v, &s) {
            Err(DvarError::InvalidSection(fails)) => {
                assert_eq!(fails[0].residue, x.scale(&FieldElement::from_integer(2)));
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn empty_variety_is_rejected() {
        let r = RingContext::autonomous(&["x"]).unwrap();
        let x = Polynomial::var(&r, 0);
        let one = Polynomial::one(&r);
        assert!(matches!(
            Variety::new(&r, vec![x.clone(), &x + &one], Claims::default()),
            Err(DvarError::EmptyVariety)
        ));
    }

    #[test]
    fn tangent_bundle_of_hyperbola() {
        let d = poizat();
        let tb = tangent_bundle(d.variety());
        assert_eq!(tb.ring().nvars(), 6);
        assert_eq!(tb.gens().len(), 2);
        let lin = &tb.gens()[1];
        let r = tb.ring();
        let expected = &(&Polynomial::var(r, 2) * &Polynomial::var(r, 3))
            + &(&Polynomial::var(r, 0) * &Polynomial::var(r, 5));
        assert_eq!(lin, &expected);
    }

    #[test]
    fn product_with_affine_line() {
        let d = poizat();
        let r = RingContext::autonomous(&["x"]).unwrap();
        let line = validate_section(&Variety::affine_space(&r), &Section::zero(&r)).unwrap();
        let p = product(&d, &line).unwrap();
        assert_eq!(p.ring().vars(), &["x", "y", "z", "x_2"]);
        assert_eq!(generic_type_dimension(&p), 3);
    }
}
