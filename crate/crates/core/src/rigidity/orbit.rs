use super::hom::TrivialHom;
use crate::adic::LatticeChain;
use crate::error::{Error, Result};
use crate::fgab::Lattice;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use std::collections::BTreeSet;

/// A coset `x + Z^d` with rational `x`, stored with coordinates in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalCoset(Vec<BigRational>);

impl RationalCoset {
    pub fn new(x: Vec<BigRational>) -> Self {
        RationalCoset(x.into_iter().map(|q| &q - q.floor()).collect())
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    fn common_denominator(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
    }
}

impl std::fmt::Display for RationalCoset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let cells: Vec<String> = self.0.iter().map(|q| q.to_string()).collect();
        write!(f, "({})", cells.join(", "))
    }
}

impl Serialize for RationalCoset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Image of `x + Z^d` under the quotient map induced by `σ`: split `x = z + c` with
/// `z ∈ Z^d` and `c` in the closure of `r_level`, then apply `σ` to `c`.
pub fn apply_hom(h: &TrivialHom, chain: &LatticeChain, x: &RationalCoset) -> Result<RationalCoset> {
    let n = x.common_denominator();
    let index = chain.index(h.level);
    let e = n.extended_gcd(&index);
    if !e.gcd.is_one() {
        return Err(Error::Precondition(format!(
            "denominator {n} is not a unit in the completion"
        )));
    }
    let inv = e.x.mod_floor(&index);
    let u: Vec<BigInt> = x.0.iter().map(|q| q.numer() * (&n / q.denom())).collect();
    let domain: Lattice = chain.lattice(h.level);
    let z = domain.reduce(&u.iter().map(|ui| (ui * &inv).mod_floor(&index)).collect::<Vec<_>>())?;
    let c: Vec<BigInt> = u.iter().zip(&z).map(|(ui, zi)| ui - &n * zi).collect();
    let coords = domain.coords(&c).expect("split lands in the domain");
    let y = h.w.vec_mul(&coords)?;
    Ok(RationalCoset::new(
        y.into_iter().map(|yi| BigRational::new(yi, n.clone())).collect(),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub elements: Vec<RationalCoset>,
    pub size: usize,
    /// No new coset appeared in the last round.
    pub closed: bool,
    pub steps: usize,
}

/// Cosets reachable from `x` by at most `steps` applications of the given homs.
pub fn apply_hom_orbit(
    homs: &[TrivialHom],
    chain: &LatticeChain,
    x: &[BigRational],
    steps: usize,
) -> Result<OrbitReport> {
    if x.len() != chain.dim() {
        return Err(Error::Dimension("point and chain dimensions differ".into()));
    }
    let start = RationalCoset::new(x.to_vec());
    let mut seen = BTreeSet::from([start.clone()]);
    let mut elements = vec![start.clone()];
    let mut frontier = vec![start];
    let mut closed = false;
    for _ in 0..steps {
        let mut next = Vec::new();
        for y in &frontier {
            for h in homs {
                let z = apply_hom(h, chain, y)?;
                if seen.insert(z.clone()) {
                    elements.push(z.clone());
                    next.push(z);
                }
            }
        }
        if next.is_empty() {
            closed = true;
            break;
        }
        frontier = next;
    }
    if frontier.is_empty() {
        closed = true;
    }
    let size = elements.len();
    Ok(OrbitReport {
        elements,
        size,
        closed,
        steps,
    })
}

pub fn coset_zero(d: usize) -> RationalCoset {
    RationalCoset(vec![BigRational::zero(); d])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::IntMatrix;
    use crate::steinitz::DivisorSequence;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn two() -> LatticeChain {
        LatticeChain::from_divisors(&DivisorSequence::powers(2))
    }

    #[test]
    fn orbit_examples() {
        let c = two();
        let x = [q(1, 5)];
        let id = apply_hom_orbit(&[TrivialHom::identity(1)], &c, &x, 5).unwrap();
        assert_eq!(id.size, 1);
        assert!(id.closed);
        let zero = apply_hom_orbit(&[TrivialHom::zero(1)], &c, &x, 5).unwrap();
        assert_eq!(zero.elements, vec![RationalCoset::new(vec![q(1, 5)]), coset_zero(1)]);
        let three = TrivialHom::new(0, IntMatrix::from_i64(&[[3]])).unwrap();
        let o = apply_hom_orbit(&[three], &c, &x, 10).unwrap();
        let got: Vec<String> = o.elements.iter().map(|e| e.to_string()).collect();
        assert_eq!(got, ["(1/5)", "(3/5)", "(4/5)", "(2/5)"]);
        assert!(o.closed);
    }

    #[test]
    fn half_map() {
        let c = two();
        let half = TrivialHom::new(1, IntMatrix::from_i64(&[[1]])).unwrap();
        let y = apply_hom(&half, &c, &RationalCoset::new(vec![q(1, 3)])).unwrap();
        assert_eq!(y, RationalCoset::new(vec![q(2, 3)]));
        assert!(apply_hom(&half, &c, &RationalCoset::new(vec![q(1, 2)])).is_err());
    }
}
