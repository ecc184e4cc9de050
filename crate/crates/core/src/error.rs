use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("name `{0}` is declared twice")]
    DuplicateName(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("operands live in different rings")]
    ContextMismatch,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("expected {expected} entries, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("no delta given for variable `{0}`")]
    MissingDelta(String),
}

/// Failures of the geometric layer. Verdicts that are simply "no" (a failed
/// subvariety check, a point that is not a D-point) are reported in the
/// result types, not here.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DvarError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("the generators contain 1: the variety is empty")]
    EmptyVariety,
    #[error("not a section: {} generator(s) fail", .0.len())]
    InvalidSection(Vec<crate::dvariety::GeneratorCheck>),
    #[error("not a subvariety: generator {0} of V is not in the radical of I(W)")]
    NotSubvariety(String),
    #[error("point is not on V: generator {0} does not vanish")]
    NotOnVariety(String),
    #[error("decomposition mismatch: the components do not cut out V")]
    DecompositionMismatch,
    #[error("map does not land in the target: generator {0} does not vanish on the image")]
    NotIntoTarget(String),
    #[error("component {0} has a denominator vanishing on the source")]
    SingularComponent(usize),
    #[error("target variety is not claimed irreducible")]
    TargetNotPrime,
    #[error("degenerate resolvent: {0}")]
    Degenerate(String),
    #[error("factors live over different base fields")]
    BaseFieldMismatch,
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
