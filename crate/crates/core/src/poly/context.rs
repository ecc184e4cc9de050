use std::collections::BTreeMap;
use std::sync::Arc;

use super::field::FieldElement;
use crate::error::PolyError;

/// Shared handle to a ring context. Polynomials hold one of these.
pub type Ring = Arc<RingContext>;

/// Variables of k[x₁,…,xₙ] together with the presentation of the base field
/// k = ℚ(c₁,…,cₘ) and the derivation on it.
///
/// Parameters without an explicit delta are constants (δc = 0). With no
/// parameters at all the derivation is trivial on k: the autonomous case.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingContext {
    vars: Vec<String>,
    params: Vec<String>,
    param_deltas: Vec<FieldElement>,
}

impl RingContext {
    pub fn new<S: AsRef<str>>(
        vars: &[S],
        params: &[S],
        param_deltas: BTreeMap<String, FieldElement>,
    ) -> Result<Ring, PolyError> {
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        let params: Vec<String> = params.iter().map(|s| s.as_ref().to_string()).collect();
        let mut seen = std::collections::BTreeSet::new();
        for name in vars.iter().chain(&params) {
            if !seen.insert(name.as_str()) {
                return Err(PolyError::DuplicateName(name.clone()));
            }
        }
        let mut deltas = vec![FieldElement::zero(); params.len()];
        for (name, d) in param_deltas {
            let i = params
                .iter()
                .position(|p| *p == name)
                .ok_or_else(|| PolyError::UnknownParameter(name.clone()))?;
            if d.nparams().is_some_and(|m| m != params.len()) {
                return Err(PolyError::ContextMismatch);
            }
            deltas[i] = d;
        }
        Ok(Arc::new(RingContext {
            vars,
            params,
            param_deltas: deltas,
        }))
    }

    /// Autonomous context: no parameters.
    pub fn autonomous<S: AsRef<str>>(vars: &[S]) -> Result<Ring, PolyError> {
        Self::new::<S>(vars, &[], BTreeMap::new())
    }

    /// Same base field, different variables.
    pub fn with_vars<S: AsRef<str>>(&self, vars: &[S]) -> Result<Ring, PolyError> {
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        let mut seen = std::collections::BTreeSet::new();
        for name in vars.iter().chain(&self.params) {
            if !seen.insert(name.as_str()) {
                return Err(PolyError::DuplicateName(name.clone()));
            }
        }
        Ok(Arc::new(RingContext {
            vars,
            params: self.params.clone(),
            param_deltas: self.param_deltas.clone(),
        }))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn param_deltas(&self) -> &[FieldElement] {
        &self.param_deltas
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn nparams(&self) -> usize {
        self.params.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|v| v == name)
    }

    pub fn is_autonomous(&self) -> bool {
        self.param_deltas.iter().all(FieldElement::is_zero)
    }

    /// True when both contexts present the same differential base field.
    pub fn same_base_field(&self, other: &RingContext) -> bool {
        self.params == other.params && self.param_deltas == other.param_deltas
    }

    /// A name that is neither a variable nor a parameter, derived from `base`.
    pub fn fresh_name(&self, base: &str) -> String {
        let taken = |s: &str| self.vars.iter().chain(&self.params).any(|v| v == s);
        if !taken(base) {
            return base.to_string();
        }
        (1..)
            .map(|i| format!("{base}{i}"))
            .find(|s| !taken(s))
            .unwrap()
    }

    /// δ of an element of k.
    pub fn delta_of(&self, a: &FieldElement) -> FieldElement {
        a.delta(&self.param_deltas)
    }
}

pub(crate) fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_overlapping_names() {
        let err = RingContext::new(&["x", "c"], &["c"], BTreeMap::new()).unwrap_err();
        assert!(matches!(err, PolyError::DuplicateName(n) if n == "c"));
    }

    #[test]
    fn rejects_delta_of_unknown_param() {
        let mut d = BTreeMap::new();
        d.insert("q".to_string(), FieldElement::one());
        assert!(RingContext::new(&["x"], &["c"], d).is_err());
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let r = RingContext::autonomous(&["t", "t1"]).unwrap();
        assert_eq!(r.fresh_name("t"), "t2");
        assert_eq!(r.fresh_name("w"), "w");
    }
}
