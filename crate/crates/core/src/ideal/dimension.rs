use crate::error::PolyError;
use crate::poly::{MonomialOrder, Polynomial, Ring};

use super::GroebnerBasis;

/// Krull dimension of k[x]/I. The unit ideal has an empty zero set.
#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord)]
pub enum Dimension {
    Empty,
    Dim(usize),
}

impl Dimension {
    pub fn as_usize(self) -> Option<usize> {
        match self {
            Dimension::Empty => None,
            Dimension::Dim(d) => Some(d),
        }
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Dimension::Empty => f.write_str("empty"),
            Dimension::Dim(d) => write!(f, "{d}"),
        }
    }
}

/// Largest set of variables independent modulo the leading-term ideal.
pub fn krull_dimension(ring: &Ring, gens: &[Polynomial]) -> Result<Dimension, PolyError> {
    let gb = super::groebner(ring, gens, MonomialOrder::GrevLex)?;
    Ok(dimension_of(&gb))
}

pub(crate) fn dimension_of(gb: &GroebnerBasis) -> Dimension {
    if gb.is_unit() {
        return Dimension::Empty;
    }
    let n = gb.ring().nvars();
    let supports: Vec<u64> = gb
        .leading_monomials()
        .iter()
        .map(|m| m.support().fold(0u64, |acc, i| acc | (1 << i)))
        .collect();
    assert!(n < 64, "too many variables for dimension computation");
    let mut best = 0;
    for s in 0u64..(1u64 << n) {
        let size = s.count_ones() as usize;
        if size > best && supports.iter().all(|&m| m & !s != 0) {
            best = size;
        }
    }
    Dimension::Dim(best)
}
