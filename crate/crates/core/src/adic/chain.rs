use crate::error::{Error, Result};
use crate::fgab::{
    from_json_vec, json_vec, ser, solve_linear, stable_sublattice, IntMatrix, JsonInt, Lattice, MAX_STABLE_DIM,
};
use crate::steinitz::DivisorSequence;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Decreasing chain `r_i = Z^d V_i` of full-rank sublattices with `V_0 = I` and
/// `V_{i+1} = A_i V_i`; the transitions `A_i` are a prefix followed by a repeating cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeChain {
    d: usize,
    transitions: Vec<IntMatrix>,
    cycle: Vec<IntMatrix>,
}

impl LatticeChain {
    pub fn new(d: usize, transitions: Vec<IntMatrix>, cycle: Vec<IntMatrix>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::Precondition("the transition cycle must be nonempty".into()));
        }
        for (i, m) in transitions.iter().chain(&cycle).enumerate() {
            if m.rows() != d || m.cols() != d {
                return Err(Error::Dimension(format!("transition {i} is not {d}x{d}")));
            }
            if m.det()?.is_zero() {
                return Err(Error::Precondition(format!("transition {i} is singular")));
            }
        }
        Ok(LatticeChain { d, transitions, cycle })
    }

    /// `r_i = a_i Z` for a divisor sequence.
    pub fn from_divisors(a: &DivisorSequence) -> Self {
        let one = |x: &BigInt| IntMatrix::new(1, 1, vec![x.clone()]).expect("1x1");
        let transitions = (0..a.tail_start()).map(|i| one(&a.ratio(i))).collect();
        let cycle = a.cycle().iter().map(one).collect();
        LatticeChain::new(1, transitions, cycle).expect("positive ratios")
    }

    /// The divisor sequence `a_i = |det V_i|` of a one-dimensional chain.
    pub fn to_divisors(&self) -> Option<DivisorSequence> {
        if self.d != 1 {
            return None;
        }
        let mut prefix = vec![BigInt::from(1)];
        for t in &self.transitions {
            let next = prefix.last().expect("nonempty") * t.get(0, 0).abs();
            prefix.push(next);
        }
        let cycle = self.cycle.iter().map(|c| c.get(0, 0).abs()).collect();
        DivisorSequence::new(prefix, cycle).ok()
    }

    /// Constant transition `A`.
    pub fn periodic(a: IntMatrix) -> Result<Self> {
        LatticeChain::new(a.rows(), vec![], vec![a])
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn transitions(&self) -> &[IntMatrix] {
        &self.transitions
    }

    pub fn cycle(&self) -> &[IntMatrix] {
        &self.cycle
    }

    /// `A_i`.
    pub fn transition(&self, i: usize) -> &IntMatrix {
        if i < self.transitions.len() {
            &self.transitions[i]
        } else {
            &self.cycle[(i - self.transitions.len()) % self.cycle.len()]
        }
    }

    /// `V_i = A_{i−1} ⋯ A_0`.
    pub fn v(&self, i: usize) -> IntMatrix {
        let mut v = IntMatrix::identity(self.d);
        for k in 0..i {
            v = self.transition(k).mul(&v).expect("square");
        }
        v
    }

    /// `r_i` as a row lattice.
    pub fn lattice(&self, i: usize) -> Lattice {
        Lattice::row_span(&self.v(i))
    }

    /// `[Z^d : r_i] = |det V_i|`.
    pub fn index(&self, i: usize) -> BigInt {
        (0..i)
            .map(|k| self.transition(k).det().expect("square").abs())
            .product()
    }

    /// `∩ r_i = 0`, decided on the cycle product; `None` above the supported dimension.
    pub fn trivial_intersection(&self) -> Option<bool> {
        if self.d > MAX_STABLE_DIM {
            return None;
        }
        let mut p = IntMatrix::identity(self.d);
        for m in &self.cycle {
            p = m.mul(&p).expect("square");
        }
        stable_sublattice(&p.transpose()).ok().map(|s| s.is_zero())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainRepr {
    d: usize,
    #[serde(default)]
    transitions: Vec<IntMatrix>,
    cycle: Vec<IntMatrix>,
}

impl Serialize for LatticeChain {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ChainRepr {
            d: self.d,
            transitions: self.transitions.clone(),
            cycle: self.cycle.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticeChain {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ChainRepr::deserialize(d)?;
        LatticeChain::new(r.d, r.transitions, r.cycle).map_err(D::Error::custom)
    }
}

/// Transversal `F_i` of `Z^d / Z^d A_i`, i.e. of `r_i / r_{i+1}` in `V_i` coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DigitSet {
    pub level: usize,
    /// Hermite basis of `Z^d A_i`.
    pub basis: Lattice,
    #[serde(serialize_with = "ser::vecs")]
    pub digits: Vec<Vec<BigInt>>,
    /// All basis entries are non-negative.
    pub nonnegative: bool,
    /// Each pivot equals the order of the matching unit vector modulo `Z^d A_i`.
    pub minimal: bool,
}

impl DigitSet {
    fn new(level: usize, a: &IntMatrix) -> Self {
        let basis = Lattice::row_span(a);
        let digits = basis.fundamental_box().expect("full rank");
        let nonnegative = basis.basis_rows().iter().flatten().all(|x| !x.is_negative());
        let d = a.rows();
        let minimal = (0..d).all(|k| {
            let pivot = basis.basis().get(k, basis.pivots()[k]).clone();
            let mut e = vec![BigInt::zero(); d];
            let mut m = BigInt::zero();
            loop {
                m += 1;
                e[k] = m.clone();
                if basis.contains(&e) {
                    break m == pivot;
                }
            }
        });
        DigitSet {
            level,
            basis,
            digits,
            nonnegative,
            minimal,
        }
    }

    /// Canonical representative of `x` modulo `Z^d A_i`.
    pub fn reduce(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.basis.reduce(x).expect("dimension")
    }
}

pub fn digit_sets(chain: &LatticeChain, depth: usize) -> Vec<DigitSet> {
    (0..depth).map(|i| DigitSet::new(i, chain.transition(i))).collect()
}

/// Element `Σ_{i<K} x_i V_i + t` of the completion along a chain, with `x_i ∈ F_i`
/// and `t ∈ r_K` either known as `w V_K` or unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfiniteElement {
    chain: LatticeChain,
    digits: Vec<Vec<BigInt>>,
    tail: Option<Vec<BigInt>>,
}

fn row_solve(a: &IntMatrix, y: &[BigInt]) -> Result<Vec<BigInt>> {
    solve_linear(&a.transpose(), y)?.ok_or_else(|| Error::Precondition("carry is not in the next lattice".into()))
}

impl ProfiniteElement {
    pub fn chain(&self) -> &LatticeChain {
        &self.chain
    }

    pub fn precision(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[Vec<BigInt>] {
        &self.digits
    }

    /// `w` with tail `w V_K`, when known.
    pub fn tail(&self) -> Option<&[BigInt]> {
        self.tail.as_deref()
    }

    /// Digits with tail `w V_K` (`None` for unknown).
    pub fn from_digits(chain: &LatticeChain, digits: Vec<Vec<BigInt>>, tail: Option<Vec<BigInt>>) -> Result<Self> {
        for (i, x) in digits.iter().enumerate() {
            let f = DigitSet::new(i, chain.transition(i));
            if x.len() != chain.dim() || f.reduce(x) != *x {
                return Err(Error::Precondition(format!("digit {i} is not in the transversal")));
            }
        }
        if tail.as_ref().is_some_and(|w| w.len() != chain.dim()) {
            return Err(Error::Dimension("tail vector has the wrong length".into()));
        }
        Ok(ProfiniteElement {
            chain: chain.clone(),
            digits,
            tail,
        })
    }

    /// The integer vector this element equals.
    pub fn integer_detect(&self) -> Result<Vec<BigInt>> {
        let w = self
            .tail
            .as_ref()
            .ok_or_else(|| Error::Undecidable(format!("tail beyond precision {} is unknown", self.precision())))?;
        let k = self.precision();
        let mut out = self.chain.v(k).vec_mul(w)?;
        for (i, x) in self.digits.iter().enumerate() {
            let xv = self.chain.v(i).vec_mul(x)?;
            for (o, y) in out.iter_mut().zip(xv) {
                *o += y;
            }
        }
        Ok(out)
    }

    /// Level-`m` residue `Σ_{i<m} x_i V_i`, a representative of the class modulo `r_m`.
    pub fn residue(&self, m: usize) -> Result<Vec<BigInt>> {
        let mut out = vec![BigInt::zero(); self.chain.dim()];
        for (i, x) in self.digits.iter().take(m).enumerate() {
            for (o, y) in out.iter_mut().zip(self.chain.v(i).vec_mul(x)?) {
                *o += y;
            }
        }
        Ok(out)
    }
}

/// Greedy digits of `v`: peel off the transversal representative, divide by `A_i`, repeat.
pub fn profinite_reduce(v: &[BigInt], chain: &LatticeChain, depth: usize) -> Result<ProfiniteElement> {
    if v.len() != chain.dim() {
        return Err(Error::Dimension(format!(
            "vector of length {} in dimension {}",
            v.len(),
            chain.dim()
        )));
    }
    let (digits, rest) = digitize(chain, v.to_vec(), 0, depth)?;
    Ok(ProfiniteElement {
        chain: chain.clone(),
        digits,
        tail: Some(rest),
    })
}

fn digitize(
    chain: &LatticeChain,
    mut r: Vec<BigInt>,
    from: usize,
    to: usize,
) -> Result<(Vec<Vec<BigInt>>, Vec<BigInt>)> {
    let mut digits = Vec::with_capacity(to - from);
    for i in from..to {
        let a = chain.transition(i);
        let x = Lattice::row_span(a).reduce(&r)?;
        let diff: Vec<BigInt> = r.iter().zip(&x).map(|(p, q)| p - q).collect();
        r = row_solve(a, &diff)?;
        digits.push(x);
    }
    Ok((digits, r))
}

/// Digit-wise sum with carries.
pub fn profinite_add(x: &ProfiniteElement, y: &ProfiniteElement) -> Result<ProfiniteElement> {
    if x.chain != y.chain {
        return Err(Error::Precondition("elements of different completions".into()));
    }
    if x.precision() != y.precision() {
        return Err(Error::Precision(x.precision(), y.precision()));
    }
    let d = x.chain.dim();
    let mut carry = vec![BigInt::zero(); d];
    let mut digits = Vec::with_capacity(x.precision());
    for (i, (a, b)) in x.digits.iter().zip(&y.digits).enumerate() {
        let s: Vec<BigInt> = (0..d).map(|k| &a[k] + &b[k] + &carry[k]).collect();
        let (mut dg, c) = digitize(&x.chain, s, i, i + 1)?;
        digits.push(dg.pop().expect("one digit"));
        carry = c;
    }
    let tail = match (&x.tail, &y.tail) {
        (Some(a), Some(b)) => Some((0..d).map(|k| &a[k] + &b[k] + &carry[k]).collect()),
        _ => None,
    };
    Ok(ProfiniteElement {
        chain: x.chain.clone(),
        digits,
        tail,
    })
}

/// Translation by `v ∈ Z^d`, the odometer action.
pub fn odometer_step(x: &ProfiniteElement, v: &[BigInt]) -> Result<ProfiniteElement> {
    profinite_add(x, &profinite_reduce(v, &x.chain, x.precision())?)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementRepr {
    digits: Vec<Vec<JsonInt>>,
    tail: ElementTailRepr,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ElementTailRepr {
    Zero,
    Max,
}

impl ProfiniteElement {
    /// Reads `{"digits": [...], "tail": "zero" | "max"}`; `max` is the tail `−(1, ..., 1) V_K`.
    pub fn from_json(chain: &LatticeChain, value: serde_json::Value) -> std::result::Result<Self, serde_json::Error> {
        let r: ElementRepr = serde_json::from_value(value)?;
        let d = chain.dim();
        let tail = match r.tail {
            ElementTailRepr::Zero => vec![BigInt::zero(); d],
            ElementTailRepr::Max => vec![BigInt::from(-1); d],
        };
        let digits = r.digits.into_iter().map(from_json_vec).collect();
        ProfiniteElement::from_digits(chain, digits, Some(tail)).map_err(serde_json::Error::custom)
    }
}

impl Serialize for ProfiniteElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            digits: Vec<Vec<JsonInt>>,
            tail: Option<Vec<JsonInt>>,
        }
        Repr {
            digits: self.digits.iter().map(|x| json_vec(x)).collect(),
            tail: self.tail.as_ref().map(|w| json_vec(w)),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::bigs;

    fn two() -> LatticeChain {
        LatticeChain::from_divisors(&DivisorSequence::powers(2))
    }

    #[test]
    fn digit_set_examples() {
        let f = digit_sets(&two(), 3);
        assert!(f.iter().all(|s| s.digits == vec![bigs(&[0]), bigs(&[1])]));
        let c = LatticeChain::periodic(IntMatrix::diag(&[2, 3])).unwrap();
        let f = &digit_sets(&c, 1)[0];
        assert_eq!(f.digits.len(), 6);
        assert!(f.nonnegative && f.minimal);
        let c = LatticeChain::periodic(IntMatrix::from_i64(&[[1, 1], [0, 2]])).unwrap();
        let f = &digit_sets(&c, 1)[0];
        assert_eq!(f.digits.len(), 2);
        assert!(!f.minimal);
    }

    #[test]
    fn binary_expansion() {
        let x = profinite_reduce(&bigs(&[5]), &two(), 4).unwrap();
        let d: Vec<Vec<BigInt>> = [1, 0, 1, 0].iter().map(|&k| bigs(&[k])).collect();
        assert_eq!(x.digits(), &d[..]);
        assert_eq!(x.integer_detect().unwrap(), bigs(&[5]));
        let zero = profinite_reduce(&bigs(&[0]), &two(), 4).unwrap();
        assert!(zero.digits().iter().all(|v| v[0].is_zero()));
    }

    #[test]
    fn carries() {
        let c = two();
        let s = profinite_add(
            &profinite_reduce(&bigs(&[3]), &c, 5).unwrap(),
            &profinite_reduce(&bigs(&[1]), &c, 5).unwrap(),
        )
        .unwrap();
        assert_eq!(s, profinite_reduce(&bigs(&[4]), &c, 5).unwrap());
        let m = profinite_reduce(&bigs(&[-1]), &c, 4).unwrap();
        assert!(m.digits().iter().all(|v| v == &bigs(&[1])));
        assert_eq!(m.tail().unwrap(), &bigs(&[-1])[..]);
    }

    #[test]
    fn odometer_orbit_covers_residues() {
        let c = two();
        let m = 6;
        let mut x = profinite_reduce(&bigs(&[0]), &c, m).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..(1 << m) {
            seen.insert(x.residue(m).unwrap());
            x = odometer_step(&x, &bigs(&[1])).unwrap();
        }
        assert_eq!(seen.len(), 1 << m);
    }

    #[test]
    fn json_tails() {
        let c = LatticeChain::periodic(IntMatrix::diag(&[2, 3])).unwrap();
        let e =
            ProfiniteElement::from_json(&c, serde_json::json!({"digits": [[1, 2], [1, 2]], "tail": "max"})).unwrap();
        assert_eq!(e.integer_detect().unwrap(), bigs(&[-1, -1]));
        assert!(ProfiniteElement::from_json(&c, serde_json::json!({"digits": [[2, 0]], "tail": "zero"})).is_err());
        let back: LatticeChain = serde_json::from_value(serde_json::to_value(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        assert_eq!(c.trivial_intersection(), Some(true));
    }
}
