//! Divisor sequences, supernatural numbers and the classification of
//! one-dimensional solenoids.

mod primes;

pub use primes::{factorize, is_prime, valuation, DEFAULT_PRIME_BOUND};

use crate::error::{Error, Result};
use crate::fgab::{from_json_vec, json_vec, JsonInt};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// `a_0 = 1 | a_1 | a_2 | ...` given by an explicit prefix and a repeating
/// cycle of multipliers: after the prefix, `a_{i+1} = a_i · cycle[j mod len]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorSequence {
    prefix: Vec<BigInt>,
    cycle: Vec<BigInt>,
}

impl DivisorSequence {
    pub fn new(prefix: Vec<BigInt>, cycle: Vec<BigInt>) -> Result<Self> {
        if prefix.first() != Some(&BigInt::one()) {
            return Err(Error::Precondition("a divisor sequence starts with a_0 = 1".into()));
        }
        for w in prefix.windows(2) {
            if w[1] <= BigInt::zero() || !w[1].is_multiple_of(&w[0]) {
                return Err(Error::Precondition(format!("{} does not divide {}", w[0], w[1])));
            }
        }
        if cycle.is_empty() {
            return Err(Error::Precondition("the tail cycle is empty".into()));
        }
        if let Some(c) = cycle.iter().find(|c| **c < BigInt::one()) {
            return Err(Error::Precondition(format!("cycle multiplier {c} is below 1")));
        }
        Ok(DivisorSequence { prefix, cycle })
    }

    pub fn from_i64(prefix: &[i64], cycle: &[i64]) -> Result<Self> {
        Self::new(
            prefix.iter().map(|&x| x.into()).collect(),
            cycle.iter().map(|&x| x.into()).collect(),
        )
    }

    /// `(1, p, p^2, ...)`.
    pub fn powers(p: u64) -> Self {
        Self::from_i64(&[1], &[p as i64]).expect("valid power sequence")
    }

    pub fn prefix(&self) -> &[BigInt] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[BigInt] {
        &self.cycle
    }

    /// Product of the cycle multipliers.
    pub fn cycle_product(&self) -> BigInt {
        self.cycle.iter().product()
    }

    /// `a_{i+1} / a_i`.
    pub fn ratio(&self, i: usize) -> BigInt {
        let k = self.prefix.len() - 1;
        if i < k {
            &self.prefix[i + 1] / &self.prefix[i]
        } else {
            self.cycle[(i - k) % self.cycle.len()].clone()
        }
    }

    pub fn term(&self, i: usize) -> BigInt {
        let k = self.prefix.len() - 1;
        if i <= k {
            return self.prefix[i].clone();
        }
        let mut a = self.prefix[k].clone();
        for j in k..i {
            a *= self.ratio(j);
        }
        a
    }

    pub fn terms(&self, n: usize) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(n);
        let mut a = BigInt::one();
        for i in 0..n {
            if i > 0 {
                a *= self.ratio(i - 1);
            }
            out.push(a.clone());
        }
        out
    }

    /// Index after which the multipliers are periodic.
    pub fn tail_start(&self) -> usize {
        self.prefix.len() - 1
    }

    /// Subsequence `(a_0, a_{s}, a_{s+L}, ...)` style re-indexing: keeps `a_0`
    /// and then every term from `start` on in steps of `step`.
    pub fn subsequence(&self, start: usize, step: usize) -> Result<Self> {
        if step == 0 || start == 0 {
            return Err(Error::Precondition("subsequence needs positive start and step".into()));
        }
        let base = start.max(self.tail_start());
        let base = base + (self.cycle.len() - (base - self.tail_start()) % self.cycle.len()) % self.cycle.len();
        let mut prefix = vec![BigInt::one()];
        let mut i = start;
        while i < base {
            prefix.push(self.term(i));
            i += step;
        }
        prefix.push(self.term(i));
        let period = self.cycle.len() * step / gcd_usize(self.cycle.len(), step);
        let count = period / step;
        let mut cycle = Vec::with_capacity(count);
        for c in 0..count {
            let j = i + c * step;
            cycle.push(self.term(j + step) / self.term(j));
        }
        DivisorSequence::new(prefix, cycle)
    }
}

fn gcd_usize(a: usize, b: usize) -> usize {
    a.gcd(&b)
}

impl fmt::Display for DivisorSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms(self.prefix.len() + self.cycle.len() + 1);
        let parts: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
        write!(f, "({}, ...)", parts.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeqRepr {
    prefix: Vec<JsonInt>,
    cycle: Vec<JsonInt>,
}

impl Serialize for DivisorSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeqRepr {
            prefix: json_vec(&self.prefix),
            cycle: json_vec(&self.cycle),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DivisorSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SeqRepr::deserialize(d)?;
        DivisorSequence::new(from_json_vec(r.prefix), from_json_vec(r.cycle)).map_err(serde::de::Error::custom)
    }
}

/// `∏ p^{e_p}` with `e_p ∈ N ∪ {∞}`, finitely many nonzero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SupernaturalNumber {
    pub finite_part: BTreeMap<u64, u32>,
    pub infinite_primes: BTreeSet<u64>,
}

impl SupernaturalNumber {
    pub fn new(finite_part: BTreeMap<u64, u32>, infinite_primes: BTreeSet<u64>) -> Result<Self> {
        if let Some(p) = finite_part.keys().find(|p| infinite_primes.contains(p)) {
            return Err(Error::Precondition(format!("prime {p} is both finite and infinite")));
        }
        let finite_part = finite_part.into_iter().filter(|(_, e)| *e > 0).collect();
        Ok(SupernaturalNumber {
            finite_part,
            infinite_primes,
        })
    }

    pub fn infinite(primes: &[u64]) -> Self {
        SupernaturalNumber {
            finite_part: BTreeMap::new(),
            infinite_primes: primes.iter().copied().collect(),
        }
    }

    /// Exponent of `p`, `None` meaning infinite.
    pub fn exponent(&self, p: u64) -> Option<u32> {
        if self.infinite_primes.contains(&p) {
            None
        } else {
            Some(self.finite_part.get(&p).copied().unwrap_or(0))
        }
    }

    /// Whether the natural number `n` divides this supernatural number.
    pub fn divisible_by(&self, n: &BigInt, bound: u64) -> Result<bool> {
        Ok(factorize(n, bound)?
            .into_iter()
            .all(|(p, e)| self.exponent(p).is_none_or(|k| e <= k)))
    }

    pub fn is_finite(&self) -> bool {
        self.infinite_primes.is_empty()
    }
}

impl fmt::Display for SupernaturalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let primes: BTreeSet<u64> = self.finite_part.keys().chain(&self.infinite_primes).copied().collect();
        if primes.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = primes
            .iter()
            .map(|&p| match self.exponent(p) {
                None => format!("{p}^inf"),
                Some(1) => p.to_string(),
                Some(e) => format!("{p}^{e}"),
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Steinitz invariant of a divisor sequence.
pub fn supernatural_of(a: &DivisorSequence, bound: u64) -> Result<SupernaturalNumber> {
    let infinite: BTreeSet<u64> = factorize(&a.cycle_product(), bound)?.into_keys().collect();
    let last = a.term(a.tail_start());
    let finite = factorize(&last, bound)?
        .into_iter()
        .filter(|(p, _)| !infinite.contains(p))
        .collect();
    SupernaturalNumber::new(finite, infinite)
}

/// The divisible group `Z_a / Z`, determined by the primes of infinite exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct H0Structure {
    pub infinite_primes: BTreeSet<u64>,
    pub continuum_rank: bool,
}

impl H0Structure {
    pub fn of(s: &SupernaturalNumber) -> Self {
        H0Structure {
            infinite_primes: s.infinite_primes.clone(),
            continuum_rank: !s.infinite_primes.is_empty(),
        }
    }

    /// Human-readable description; `Fin` is the set of primes of finite exponent.
    pub fn structure_string(&self) -> String {
        if !self.continuum_rank {
            return "0".to_string();
        }
        let inf: Vec<String> = self.infinite_primes.iter().map(|p| p.to_string()).collect();
        format!(
            "Q^(2^ℵ0) ⊕ ⊕_{{p∈Fin}} Z(p^∞), Fin = all primes except {{{}}}",
            inf.join(", ")
        )
    }

    /// Whether `p` contributes a Prüfer summand `Z(p^∞)`.
    pub fn has_prufer(&self, p: u64) -> bool {
        self.continuum_rank && !self.infinite_primes.contains(&p)
    }
}

impl fmt::Display for H0Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.structure_string())
    }
}

/// Mutual cofinality witnesses: `forward[i] = j` with `a_i | b_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cofinality {
    pub forward: Vec<Option<usize>>,
    pub backward: Vec<Option<usize>>,
}

impl Cofinality {
    pub fn holds(&self) -> bool {
        self.forward.iter().chain(&self.backward).all(Option::is_some)
    }
}

/// Least `j` with `a_i | b_j`, if any. Divisibility is monotone in `j` and
/// every period of `b` raises each infinite prime by at least one, so the search
/// stops after `log2(a_i) + 1` periods past the prefix.
fn first_divisible(ai: &BigInt, b: &DivisorSequence) -> Option<usize> {
    let limit = b.tail_start() + b.cycle.len() * (ai.bits() as usize + 1);
    let mut bj = BigInt::one();
    for j in 0..=limit {
        if j > 0 {
            bj *= b.ratio(j - 1);
        }
        if bj.is_multiple_of(ai) {
            return Some(j);
        }
    }
    None
}

/// Direct cofinality check of the first `depth + 1` terms in both directions.
pub fn cofinality(a: &DivisorSequence, b: &DivisorSequence, depth: usize) -> Cofinality {
    Cofinality {
        forward: a.terms(depth + 1).iter().map(|x| first_divisible(x, b)).collect(),
        backward: b.terms(depth + 1).iter().map(|x| first_divisible(x, a)).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub baer_equivalent: bool,
    pub homeomorphic: bool,
    pub steenrod_isomorphic: bool,
    pub supernatural: (SupernaturalNumber, SupernaturalNumber),
    pub fin_summary: (BTreeSet<u64>, BTreeSet<u64>),
    pub h0: (H0Structure, H0Structure),
    /// Whether the direct cofinality check agrees with the invariant comparison.
    pub cofinality_agrees: bool,
}

pub const COFINALITY_DEPTH: usize = 32;

pub fn classify_pair(a: &DivisorSequence, b: &DivisorSequence, bound: u64) -> Result<Classification> {
    let sa = supernatural_of(a, bound)?;
    let sb = supernatural_of(b, bound)?;
    let baer = sa == sb;
    let direct = cofinality(a, b, COFINALITY_DEPTH).holds();
    Ok(Classification {
        baer_equivalent: baer,
        homeomorphic: baer,
        steenrod_isomorphic: sa.infinite_primes == sb.infinite_primes,
        fin_summary: (sa.infinite_primes.clone(), sb.infinite_primes.clone()),
        h0: (H0Structure::of(&sa), H0Structure::of(&sb)),
        supernatural: (sa, sb),
        cofinality_agrees: direct == baer,
    })
}

/// `k` sequences `q^(i+1) · p^∞`, `q` the least odd prime different from `p`:
/// equal Steenrod homology, pairwise non-homeomorphic solenoids.
pub fn family_same_steenrod(k: usize, base_prime: u64) -> Result<Vec<DivisorSequence>> {
    if k < 2 {
        return Err(Error::Precondition("a family needs at least two members".into()));
    }
    if !is_prime(base_prime) {
        return Err(Error::Precondition(format!("{base_prime} is not prime")));
    }
    let q = (3..)
        .step_by(2)
        .find(|&q| is_prime(q) && q != base_prime)
        .expect("primes are infinite");
    (0..k)
        .map(|i| {
            let f = BigInt::from(q).pow(i as u32 + 1);
            DivisorSequence::new(vec![BigInt::one(), f], vec![BigInt::from(base_prime)])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sn(a: &DivisorSequence) -> SupernaturalNumber {
        supernatural_of(a, DEFAULT_PRIME_BOUND).unwrap()
    }

    #[test]
    fn supernatural_examples() {
        assert_eq!(sn(&DivisorSequence::powers(2)).to_string(), "2^inf");
        assert_eq!(sn(&DivisorSequence::powers(6)).to_string(), "2^inf*3^inf");
        let a = DivisorSequence::from_i64(&[1, 3], &[2]).unwrap();
        assert_eq!(a.terms(5), crate::fgab::bigs(&[1, 3, 6, 12, 24]));
        assert_eq!(sn(&a).to_string(), "2^inf*3");
    }

    #[test]
    fn classification_examples() {
        let b = DEFAULT_PRIME_BOUND;
        let c = classify_pair(&DivisorSequence::powers(2), &DivisorSequence::powers(4), b).unwrap();
        assert!(c.baer_equivalent && c.cofinality_agrees);
        let c = classify_pair(&DivisorSequence::powers(2), &DivisorSequence::powers(3), b).unwrap();
        assert!(!c.baer_equivalent && !c.homeomorphic && !c.steenrod_isomorphic);
        let a3 = DivisorSequence::from_i64(&[1, 3], &[2]).unwrap();
        let a9 = DivisorSequence::from_i64(&[1, 9], &[2]).unwrap();
        let c = classify_pair(&a3, &a9, b).unwrap();
        assert!(c.steenrod_isomorphic && !c.homeomorphic && c.cofinality_agrees);
    }

    #[test]
    fn family() {
        let fam = family_same_steenrod(3, 2).unwrap();
        let names: Vec<String> = fam.iter().map(|a| sn(a).to_string()).collect();
        assert_eq!(names, ["2^inf*3", "2^inf*3^2", "2^inf*3^3"]);
        assert!(family_same_steenrod(1, 2).is_err());
    }

    #[test]
    fn structure_string() {
        let h = H0Structure::of(&sn(&DivisorSequence::powers(2)));
        assert!(h.structure_string().starts_with("Q^(2^ℵ0) ⊕ ⊕_{p∈Fin} Z(p^∞)"));
        assert!(h.has_prufer(3) && !h.has_prufer(2));
    }

    #[test]
    fn subsequence_keeps_invariant() {
        let a = DivisorSequence::from_i64(&[1, 3, 6], &[2, 5]).unwrap();
        for (s, t) in [(1, 1), (2, 3), (3, 2), (1, 4)] {
            let b = a.subsequence(s, t).unwrap();
            assert_eq!(sn(&b), sn(&a), "start {s} step {t}");
        }
    }

    #[test]
    fn json() {
        let a: DivisorSequence = serde_json::from_str(r#"{"prefix":[1,3],"cycle":[2]}"#).unwrap();
        assert_eq!(a, DivisorSequence::from_i64(&[1, 3], &[2]).unwrap());
        assert!(serde_json::from_str::<DivisorSequence>(r#"{"prefix":[1,3],"cycle":[]}"#).is_err());
        assert!(serde_json::from_str::<DivisorSequence>(r#"{"prefix":[2],"cycle":[2]}"#).is_err());
    }
}
