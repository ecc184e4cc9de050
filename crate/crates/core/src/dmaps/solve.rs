//! Rational solutions of polynomial systems over ℚ, by lex Gröbner bases
//! and triangular back-substitution.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ideal::GroebnerBasis;
use crate::poly::{FieldElement, MonomialOrder, Polynomial, Rational, Ring};

/// Why a system could not be solved completely.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Unsolved {
    PositiveDimensional,
    /// A univariate polynomial with coefficients too large to enumerate
    /// candidate roots for.
    HugeCoefficients,
}

/// All points of V(gens) ⊆ ℚⁿ, where `ring` is autonomous. Fails when the
/// complex solution set is infinite.
pub(crate) fn rational_points(ring: &Ring, gens: &[Polynomial]) -> Result<Vec<Vec<Rational>>, Unsolved> {
    solve(ring, gens.to_vec(), ring.nvars())
}

fn solve(ring: &Ring, gens: Vec<Polynomial>, active: usize) -> Result<Vec<Vec<Rational>>, Unsolved> {
    let gb = GroebnerBasis::compute(ring, &gens, MonomialOrder::Lex);
    if gb.is_unit() {
        return Ok(Vec::new());
    }
    if active == 0 {
        return Ok(vec![Vec::new()]);
    }
    let lms = gb.leading_monomials();
    for i in 0..active {
        let pure = lms.iter().any(|m| m.get(i) > 0 && m.degree() == m.get(i));
        if !pure {
            return Err(Unsolved::PositiveDimensional);
        }
    }
    let v = active - 1;
    let uni = gb
        .gens()
        .iter()
        .find(|g| g.variables().iter().all(|&i| i == v))
        .expect("zero-dimensional lex basis has a univariate element");
    let mut out = Vec::new();
    for r in rational_roots(uni, v)? {
        let args: Vec<Polynomial> = (0..ring.nvars())
            .map(|i| {
                if i == v {
                    Polynomial::constant(ring, FieldElement::from_rational(r.clone()))
                } else {
                    Polynomial::var(ring, i)
                }
            })
            .collect();
        let sub: Vec<Polynomial> = gb
            .gens()
            .iter()
            .map(|g| g.substitute(&args).expect("same ring"))
            .collect();
        for mut p in solve(ring, sub, v)? {
            p.push(r.clone());
            out.push(p);
        }
    }
    Ok(out)
}

const DIVISOR_LIMIT: u64 = 1 << 40;

/// Distinct rational roots of a polynomial in the single variable `v`,
/// in increasing order.
fn rational_roots(p: &Polynomial, v: usize) -> Result<Vec<Rational>, Unsolved> {
    let deg = p.degree_in(v) as usize;
    let mut coeffs = vec![Rational::zero(); deg + 1];
    for (m, c) in p.terms() {
        coeffs[m.get(v) as usize] = c.as_rational().expect("rational coefficients").clone();
    }
    let mut roots = Vec::new();
    let low = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if low > 0 {
        roots.push(Rational::zero());
    }
    let coeffs = &coeffs[low..];
    if coeffs.len() > 1 {
        let l = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let ps = divisors(&ints[0])?;
        let qs = divisors(ints.last().unwrap())?;
        let mut cands: Vec<Rational> = Vec::new();
        for p in &ps {
            for q in &qs {
                for s in [1i64, -1] {
                    let r = Rational::new(BigInt::from(*p) * s, BigInt::from(*q));
                    if !cands.contains(&r) {
                        cands.push(r);
                    }
                }
            }
        }
        for r in cands {
            let val = coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * &r + c);
            if val.is_zero() {
                roots.push(r);
            }
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

fn divisors(n: &BigInt) -> Result<Vec<u64>, Unsolved> {
    let n = n.abs().to_u64().filter(|&n| n <= DIVISOR_LIMIT).ok_or(Unsolved::HugeCoefficients)?;
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_polynomial;
    use crate::poly::RingContext;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn finds_all_rational_points_of_a_triangular_system() {
        let r = RingContext::autonomous(&["a", "b"]).unwrap();
        let gens = vec![
            parse_polynomial("b^2 - b", &r).unwrap(),
            parse_polynomial("a + b + 1", &r).unwrap(),
        ];
        let pts = rational_points(&r, &gens).unwrap();
        assert_eq!(pts, vec![vec![q(-1, 1), q(0, 1)], vec![q(-2, 1), q(1, 1)]]);
    }

    #[test]
    fn irrational_roots_are_skipped() {
        let r = RingContext::autonomous(&["a"]).unwrap();
        let gens = vec![parse_polynomial("(2*a - 1)*(a^2 - 2)", &r).unwrap()];
        assert_eq!(rational_points(&r, &gens).unwrap(), vec![vec![q(1, 2)]]);
    }

    #[test]
    fn positive_dimension_is_reported() {
        let r = RingContext::autonomous(&["a", "b"]).unwrap();
        let gens = vec![parse_polynomial("a*b", &r).unwrap()];
        assert_eq!(rational_points(&r, &gens), Err(Unsolved::PositiveDimensional));
    }
}
