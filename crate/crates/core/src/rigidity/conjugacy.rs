use crate::adic::LatticeChain;
use crate::error::{Error, Result};
use crate::fgab::{IntMatrix, Lattice};
use crate::steinitz::{cofinality, supernatural_of, SupernaturalNumber};
use num_traits::Signed;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    Conjugate,
    NotConjugateAtDepth { depth: usize },
    Undecided { depth: usize },
}

/// `forward[i] = j` with `ℓ_j ⊆ M r_i`, `backward[j] = i` with `M r_i ⊆ ℓ_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CofinalityWitness {
    pub forward: Vec<usize>,
    pub backward: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugacyReport {
    #[serde(flatten)]
    pub verdict: Verdict,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<IntMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<CofinalityWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub supernatural: Option<(SupernaturalNumber, SupernaturalNumber)>,
    pub reason: String,
}

impl ConjugacyReport {
    pub fn is_conjugate(&self) -> bool {
        self.verdict == Verdict::Conjugate
    }
}

fn unimodular_box(d: usize, bound: i64) -> Vec<IntMatrix> {
    let side = (2 * bound + 1) as u64;
    let mut out: Vec<IntMatrix> = (0..side.pow((d * d) as u32))
        .map(|mut code| {
            let entries = (0..d * d)
                .map(|_| {
                    let e = (code % side) as i64 - bound;
                    code /= side;
                    e.into()
                })
                .collect();
            IntMatrix::new(d, d, entries).expect("shape")
        })
        .filter(|m| m.det().expect("square").abs() == 1.into())
        .collect();
    let id = IntMatrix::identity(d);
    out.sort_by_key(|m| m != &id);
    out
}

fn least<F: Fn(usize) -> bool>(limit: usize, f: F) -> Option<usize> {
    (0..=limit).find(|&k| f(k))
}

/// Mutual cofinality of `(r_i M)` and `(ℓ_j)` for indices up to `depth`, searching
/// partners up to the horizon.
fn cofinal_under(
    r: &LatticeChain,
    l: &LatticeChain,
    m: &IntMatrix,
    depth: usize,
    horizon: usize,
) -> Option<CofinalityWitness> {
    let rm: Vec<Lattice> = (0..=horizon)
        .map(|i| Lattice::row_span(&r.v(i).mul(m).expect("square")))
        .collect();
    let ls: Vec<Lattice> = (0..=horizon).map(|j| l.lattice(j)).collect();
    let contains = |a: &Lattice, b: &Lattice| a.contains_lattice(b).expect("same dimension");
    let forward = (0..=depth)
        .map(|i| least(horizon, |j| contains(&rm[i], &ls[j])))
        .collect::<Option<Vec<_>>>()?;
    let backward = (0..=depth)
        .map(|j| least(horizon, |i| contains(&ls[j], &rm[i])))
        .collect::<Option<Vec<_>>>()?;
    Some(CofinalityWitness { forward, backward })
}

/// Decides whether the odometers of two chains are conjugate by a change of
/// coordinates `M ∈ GL_d(Z)` with entries bounded by `bound`. One-dimensional chains
/// are decided by their Steinitz invariants; in higher dimension only positive
/// answers are certified.
pub fn chains_conjugate(
    r: &LatticeChain,
    l: &LatticeChain,
    depth: usize,
    bound: u64,
    prime_bound: u64,
) -> Result<ConjugacyReport> {
    let d = r.dim();
    if l.dim() != d {
        return Err(Error::Dimension("chains of different dimension".into()));
    }
    if let (Some(a), Some(b)) = (r.to_divisors(), l.to_divisors()) {
        let sa = supernatural_of(&a, prime_bound)?;
        let sb = supernatural_of(&b, prime_bound)?;
        if sa != sb {
            return Ok(ConjugacyReport {
                verdict: Verdict::NotConjugateAtDepth { depth },
                m: None,
                witness: None,
                reason: format!("Steinitz invariants differ: {sa} vs {sb}"),
                supernatural: Some((sa, sb)),
            });
        }
        let c = cofinality(&a, &b, depth);
        let witness = c.holds().then(|| CofinalityWitness {
            forward: c.forward.iter().map(|j| j.expect("holds")).collect(),
            backward: c.backward.iter().map(|i| i.expect("holds")).collect(),
        });
        let verdict = if witness.is_some() {
            Verdict::Conjugate
        } else {
            Verdict::Undecided { depth }
        };
        return Ok(ConjugacyReport {
            verdict,
            m: Some(IntMatrix::identity(1)),
            witness,
            reason: format!("equal Steinitz invariants {sa}"),
            supernatural: Some((sa, sb)),
        });
    }
    let horizon = 4 * (depth + 1);
    for m in unimodular_box(d, bound as i64) {
        if let Some(w) = cofinal_under(r, l, &m, depth, horizon) {
            return Ok(ConjugacyReport {
                verdict: Verdict::Conjugate,
                m: Some(m),
                witness: Some(w),
                supernatural: None,
                reason: "mutually cofinal chains".into(),
            });
        }
    }
    Ok(ConjugacyReport {
        verdict: Verdict::Undecided { depth },
        m: None,
        witness: None,
        supernatural: None,
        reason: format!("no change of coordinates with entries up to {bound} found"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steinitz::{DivisorSequence, DEFAULT_PRIME_BOUND};

    fn powers(p: u64) -> LatticeChain {
        LatticeChain::from_divisors(&DivisorSequence::powers(p))
    }

    fn run(a: &LatticeChain, b: &LatticeChain) -> ConjugacyReport {
        chains_conjugate(a, b, 6, 1, DEFAULT_PRIME_BOUND).unwrap()
    }

    #[test]
    fn one_dimensional_examples() {
        let r = run(&powers(2), &powers(4));
        assert!(r.is_conjugate());
        assert_eq!(r.witness.unwrap().forward, vec![0, 1, 1, 2, 2, 3, 3]);
        let r = run(&powers(2), &powers(6));
        assert_eq!(r.verdict, Verdict::NotConjugateAtDepth { depth: 6 });
        assert!(run(&powers(3), &powers(3)).is_conjugate());
    }

    #[test]
    fn planar_examples() {
        let a = LatticeChain::periodic(IntMatrix::diag(&[2, 3])).unwrap();
        let b = LatticeChain::periodic(IntMatrix::diag(&[3, 2])).unwrap();
        let r = run(&a, &b);
        assert!(r.is_conjugate());
        assert_ne!(r.m.unwrap(), IntMatrix::identity(2));
        let c = LatticeChain::periodic(IntMatrix::diag(&[2, 5])).unwrap();
        assert_eq!(run(&a, &c).verdict, Verdict::Undecided { depth: 6 });
        assert!(run(&a, &a).is_conjugate());
    }
}
