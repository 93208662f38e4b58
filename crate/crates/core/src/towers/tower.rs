use crate::error::{Error, Result};
use crate::fgab::{from_json_vec, json_vec, FgGroup, Homomorphism, IntMatrix, JsonInt, Lattice};
use crate::steinitz::DivisorSequence;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// How a tower continues past its explicit prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tail {
    /// Nothing is known beyond the prefix.
    None,
    /// The last group repeats and the connective maps cycle through these endomorphisms.
    Periodic(Vec<IntMatrix>),
    /// The last group repeats with identity maps.
    EventuallyIdentity,
    /// `A_n = (Z/a_n)^copies` with reduction maps, for every `n`.
    CyclicQuotients { sequence: DivisorSequence, copies: usize },
}

/// An inverse sequence `A_0 ← A_1 ← ...` given by a prefix and a tail rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    groups: Vec<FgGroup>,
    maps: Vec<Homomorphism>,
    tail: Tail,
    cycle: Vec<Homomorphism>,
}

impl Tower {
    /// `maps[n]` is `p_{n+1}: A_{n+1} → A_n`.
    pub fn new(groups: Vec<FgGroup>, maps: Vec<IntMatrix>, tail: Tail) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::Precondition("a tower needs at least one group".into()));
        }
        if maps.len() + 1 != groups.len() {
            return Err(Error::Dimension(format!(
                "{} groups need {} maps, got {}",
                groups.len(),
                groups.len() - 1,
                maps.len()
            )));
        }
        let maps = maps
            .into_iter()
            .enumerate()
            .map(|(n, m)| {
                Homomorphism::new(groups[n + 1].clone(), groups[n].clone(), m)
                    .map_err(|e| Error::InvalidHom(format!("map p_{}: {e}", n + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        let last = groups.last().expect("nonempty").clone();
        let cycle = match &tail {
            Tail::Periodic(c) => {
                if c.is_empty() {
                    return Err(Error::Precondition("periodic tail with an empty cycle".into()));
                }
                c.iter()
                    .map(|m| Homomorphism::new(last.clone(), last.clone(), m.clone()))
                    .collect::<Result<Vec<_>>>()?
            }
            _ => Vec::new(),
        };
        let t = Tower {
            groups,
            maps,
            tail,
            cycle,
        };
        if let Tail::CyclicQuotients { .. } = &t.tail {
            for n in 0..t.groups.len() {
                let expect = t.tail_group(n).expect("quotient tail");
                if t.groups[n] != expect {
                    return Err(Error::Precondition(format!(
                        "group {n} is {} but the quotient tail requires {expect}",
                        t.groups[n]
                    )));
                }
            }
        }
        Ok(t)
    }

    /// The constant tower with identity maps.
    pub fn constant(g: FgGroup) -> Self {
        Tower::new(vec![g], vec![], Tail::EventuallyIdentity).expect("constant tower")
    }

    pub fn zero() -> Self {
        Tower::constant(FgGroup::zero())
    }

    /// `(Z, ×k)`.
    pub fn multiplication(k: i64) -> Self {
        Tower::periodic(FgGroup::free(1), vec![IntMatrix::from_i64(&[[k]])]).expect("1x1 map")
    }

    /// `(G, M_0, M_1, ...)` with the cycle repeating.
    pub fn periodic(g: FgGroup, cycle: Vec<IntMatrix>) -> Result<Self> {
        Tower::new(vec![g], vec![], Tail::Periodic(cycle))
    }

    /// `(Z, ×a_{n+1}/a_n)`, whose images in `A_0` are `a_n Z`.
    pub fn from_divisors(a: &DivisorSequence) -> Self {
        let k = a.tail_start();
        let groups = vec![FgGroup::free(1); k + 1];
        let maps = (0..k)
            .map(|i| IntMatrix::new(1, 1, vec![a.ratio(i)]).expect("1x1"))
            .collect();
        let cycle = a
            .cycle()
            .iter()
            .map(|c| IntMatrix::new(1, 1, vec![c.clone()]).expect("1x1"))
            .collect();
        Tower::new(groups, maps, Tail::Periodic(cycle)).expect("divisor tower")
    }

    /// `(Z/a_n)` with reduction maps.
    pub fn cyclic_quotients(a: &DivisorSequence, copies: usize) -> Self {
        let tail = Tail::CyclicQuotients {
            sequence: a.clone(),
            copies,
        };
        let k = a.tail_start();
        let groups: Vec<FgGroup> = (0..=k).map(|n| quotient_group(a, copies, n)).collect();
        let maps = (0..k).map(|n| reduction_matrix(&groups[n + 1], &groups[n])).collect();
        Tower::new(groups, maps, tail).expect("quotient tower")
    }

    /// Length of the explicit prefix.
    pub fn prefix_len(&self) -> usize {
        self.groups.len()
    }

    /// Index where the tail rule takes over.
    pub fn tail_start(&self) -> usize {
        self.groups.len() - 1
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn prefix_groups(&self) -> &[FgGroup] {
        &self.groups
    }

    pub fn prefix_maps(&self) -> &[Homomorphism] {
        &self.maps
    }

    /// Cycle endomorphisms of a periodic tail.
    pub fn cycle(&self) -> &[Homomorphism] {
        &self.cycle
    }

    /// Number of levels with known data, `None` when unbounded.
    pub fn available(&self) -> Option<usize> {
        match self.tail {
            Tail::None => Some(self.groups.len()),
            _ => None,
        }
    }

    fn check_level(&self, n: usize) -> Result<()> {
        match self.available() {
            Some(k) if n >= k => Err(Error::Depth {
                requested: n + 1,
                available: k,
            }),
            _ => Ok(()),
        }
    }

    fn tail_group(&self, n: usize) -> Option<FgGroup> {
        match &self.tail {
            Tail::CyclicQuotients { sequence, copies } => Some(quotient_group(sequence, *copies, n)),
            _ => None,
        }
    }

    pub fn group(&self, n: usize) -> Result<FgGroup> {
        self.check_level(n)?;
        if let Some(g) = self.tail_group(n) {
            return Ok(g);
        }
        Ok(self.groups[n.min(self.tail_start())].clone())
    }

    /// `p_{n+1}: A_{n+1} → A_n`.
    pub fn map(&self, n: usize) -> Result<Homomorphism> {
        self.check_level(n + 1)?;
        if n < self.maps.len() {
            return Ok(self.maps[n].clone());
        }
        let t = self.tail_start();
        match &self.tail {
            Tail::Periodic(_) => Ok(self.cycle[(n - t) % self.cycle.len()].clone()),
            Tail::EventuallyIdentity => Ok(Homomorphism::identity(&self.groups[t])),
            Tail::CyclicQuotients { .. } => {
                let (s, d) = (self.group(n + 1)?, self.group(n)?);
                Homomorphism::new(s.clone(), d.clone(), reduction_matrix(&s, &d))
            }
            Tail::None => unreachable!("checked above"),
        }
    }

    /// `p_{k,n} = p_{k+1} ∘ ... ∘ p_n: A_n → A_k`.
    pub fn composite(&self, k: usize, n: usize) -> Result<Homomorphism> {
        if k > n {
            return Err(Error::Precondition(format!("composite p_{{{k},{n}}} needs k ≤ n")));
        }
        let mut h = Homomorphism::identity(&self.group(n)?);
        for j in (k..n).rev() {
            h = self.map(j)?.compose(&h)?;
        }
        Ok(h)
    }

    /// `ran(p_{k,n})` together with the relations of `A_k`, as a lattice in `Z^{ngens(A_k)}`.
    pub fn range(&self, k: usize, n: usize) -> Result<Lattice> {
        Ok(self.composite(k, n)?.image_lattice())
    }

    pub fn check_element(&self, a: &TowerElement) -> Result<()> {
        for (n, x) in a.prefix.iter().enumerate() {
            self.group(n)?.check(x)?;
        }
        if a.tail == ElementTail::RepeatLast {
            let len = a.prefix.len();
            let constant = matches!(self.tail, Tail::Periodic(_) | Tail::EventuallyIdentity);
            if len == 0 || len < self.prefix_len() || !constant {
                return Err(Error::Precondition(
                    "a repeating element needs a constant tail group and a prefix covering the tower prefix".into(),
                ));
            }
        }
        Ok(())
    }
}

fn quotient_group(a: &DivisorSequence, copies: usize, n: usize) -> FgGroup {
    FgGroup::cyclic(a.term(n)).power(copies)
}

fn reduction_matrix(source: &FgGroup, target: &FgGroup) -> IntMatrix {
    if source.ngens() == target.ngens() {
        IntMatrix::identity(source.ngens())
    } else {
        IntMatrix::zeros(target.ngens(), source.ngens())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementTail {
    /// Coordinates past the prefix are zero.
    Zero,
    /// Coordinates past the prefix repeat the last one.
    #[serde(rename = "repeat")]
    RepeatLast,
}

/// An element of `∏ A_n` given by a prefix and a tail rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerElement {
    pub prefix: Vec<Vec<BigInt>>,
    pub tail: ElementTail,
}

impl TowerElement {
    pub fn zero_tail(prefix: Vec<Vec<BigInt>>) -> Self {
        TowerElement {
            prefix,
            tail: ElementTail::Zero,
        }
    }

    pub fn from_i64<R: AsRef<[i64]>>(prefix: &[R]) -> Self {
        Self::zero_tail(
            prefix
                .iter()
                .map(|r| r.as_ref().iter().map(|&x| x.into()).collect())
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty()
    }

    /// Coordinate `n`, in a group with `ngens` generators.
    pub fn coord(&self, n: usize, ngens: usize) -> Vec<BigInt> {
        match (self.prefix.get(n), self.tail) {
            (Some(x), _) => x.clone(),
            (None, ElementTail::RepeatLast) if !self.prefix.is_empty() => self.prefix[self.prefix.len() - 1].clone(),
            _ => vec![BigInt::zero(); ngens],
        }
    }
}

/// `p(a)_n = a_n − p_{n+1}(a_{n+1})`.
pub fn shift_apply(t: &Tower, a: &TowerElement) -> Result<TowerElement> {
    t.check_element(a)?;
    let len = a.len();
    let mut out = Vec::with_capacity(len);
    for n in 0..len {
        let g = t.group(n)?;
        let next = match (n + 1 < len, a.tail) {
            (true, _) | (false, ElementTail::RepeatLast) => {
                let p = t.map(n)?;
                p.apply(&a.coord(n + 1, p.source().ngens()))?
            }
            (false, ElementTail::Zero) => g.zero_elem(),
        };
        out.push(g.sub(&a.prefix[n], &next));
    }
    let tail = match a.tail {
        ElementTail::Zero => ElementTail::Zero,
        ElementTail::RepeatLast => match t.tail() {
            Tail::EventuallyIdentity => ElementTail::Zero,
            Tail::Periodic(c) if c.len() == 1 => ElementTail::RepeatLast,
            _ => {
                return Err(Error::Precondition(
                    "the shift of a repeating element is only rule-based for cycles of length one".into(),
                ))
            }
        },
    };
    Ok(TowerElement { prefix: out, tail })
}

/// The finitely supported `a` with `p(a) = b`, by back-substitution.
pub fn shift_solve(t: &Tower, b: &TowerElement) -> Result<TowerElement> {
    if b.tail != ElementTail::Zero {
        return Err(Error::Precondition(
            "shift_solve needs an element with zero tail".into(),
        ));
    }
    t.check_element(b)?;
    let len = b.len();
    let mut a: Vec<Vec<BigInt>> = vec![Vec::new(); len];
    for n in (0..len).rev() {
        let g = t.group(n)?;
        a[n] = if n + 1 < len {
            g.add(&b.prefix[n], &t.map(n)?.apply(&a[n + 1])?)
        } else {
            g.reduce(&b.prefix[n])
        };
    }
    Ok(TowerElement::zero_tail(a))
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum TailRepr {
    None,
    Periodic {
        cycle: Vec<IntMatrix>,
    },
    Identity,
    Quotients {
        prefix: Vec<JsonInt>,
        cycle: Vec<JsonInt>,
        #[serde(default = "one")]
        copies: usize,
    },
}

fn one() -> usize {
    1
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TowerRepr {
    groups: Vec<FgGroup>,
    #[serde(default)]
    maps: Vec<IntMatrix>,
    #[serde(default = "no_tail")]
    tail: TailRepr,
}

fn no_tail() -> TailRepr {
    TailRepr::None
}

impl Serialize for Tower {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let tail = match &self.tail {
            Tail::None => TailRepr::None,
            Tail::Periodic(c) => TailRepr::Periodic { cycle: c.clone() },
            Tail::EventuallyIdentity => TailRepr::Identity,
            Tail::CyclicQuotients { sequence, copies } => TailRepr::Quotients {
                prefix: json_vec(sequence.prefix()),
                cycle: json_vec(sequence.cycle()),
                copies: *copies,
            },
        };
        TowerRepr {
            groups: self.groups.clone(),
            maps: self.maps.iter().map(|m| m.matrix().clone()).collect(),
            tail,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tower {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = TowerRepr::deserialize(d)?;
        let tail = match r.tail {
            TailRepr::None => Tail::None,
            TailRepr::Periodic { cycle } => Tail::Periodic(cycle),
            TailRepr::Identity => Tail::EventuallyIdentity,
            TailRepr::Quotients { prefix, cycle, copies } => Tail::CyclicQuotients {
                sequence: DivisorSequence::new(from_json_vec(prefix), from_json_vec(cycle))
                    .map_err(D::Error::custom)?,
                copies,
            },
        };
        Tower::new(r.groups, r.maps, tail).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementRepr {
    prefix: Vec<Vec<JsonInt>>,
    #[serde(default = "zero_tail")]
    tail: ElementTail,
}

fn zero_tail() -> ElementTail {
    ElementTail::Zero
}

impl Serialize for TowerElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRepr {
            prefix: self.prefix.iter().map(|x| json_vec(x)).collect(),
            tail: self.tail,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TowerElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ElementRepr::deserialize(d)?;
        Ok(TowerElement {
            prefix: r.prefix.into_iter().map(from_json_vec).collect(),
            tail: r.tail,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::bigs;

    #[test]
    fn shift_examples() {
        let t = Tower::multiplication(2);
        let a = TowerElement::from_i64(&[[1], [1], [1]]);
        let b = shift_apply(&t, &a).unwrap();
        assert_eq!(b, TowerElement::from_i64(&[[-1], [-1], [1]]));
        assert_eq!(
            shift_apply(&t, &TowerElement::from_i64(&[[0], [0]])).unwrap(),
            TowerElement::from_i64(&[[0], [0]])
        );
        let s = shift_solve(&t, &TowerElement::from_i64(&[[0], [1], [0]])).unwrap();
        assert_eq!(s, TowerElement::from_i64(&[[2], [1], [0]]));
        let s = shift_solve(&t, &TowerElement::from_i64(&[[1], [0], [0]])).unwrap();
        assert_eq!(s, TowerElement::from_i64(&[[1], [0], [0]]));
    }

    #[test]
    fn constant_element_telescopes() {
        let t = Tower::constant(FgGroup::free(1));
        let a = TowerElement {
            prefix: vec![bigs(&[5]); 4],
            tail: ElementTail::RepeatLast,
        };
        let b = shift_apply(&t, &a).unwrap();
        assert!(b.prefix.iter().all(|x| x[0].is_zero()));
        assert_eq!(b.tail, ElementTail::Zero);
    }

    #[test]
    fn composites_and_quotients() {
        let a = DivisorSequence::from_i64(&[1, 3], &[2]).unwrap();
        let t = Tower::from_divisors(&a);
        let p = t.composite(0, 4).unwrap();
        assert_eq!(p.matrix().get(0, 0), &BigInt::from(24));
        let q = Tower::cyclic_quotients(&a, 1);
        assert_eq!(q.group(4).unwrap(), FgGroup::cyclic(24));
        assert_eq!(q.group(0).unwrap(), FgGroup::zero());
        assert!(q.map(3).unwrap().apply(&bigs(&[23])).unwrap() == bigs(&[11]));
        let none = Tower::new(vec![FgGroup::free(1)], vec![], Tail::None).unwrap();
        assert!(matches!(none.group(1), Err(Error::Depth { .. })));
    }

    #[test]
    fn json_round_trip() {
        let src = r#"{"groups":[{"rank":1,"torsion":[]}],"maps":[],"tail":{"type":"periodic","cycle":[{"rows":1,"cols":1,"entries":[[2]]}]}}"#;
        let t: Tower = serde_json::from_str(src).unwrap();
        assert_eq!(t, Tower::multiplication(2));
        let back: Tower = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back, t);
        let e: TowerElement = serde_json::from_str(r#"{"prefix":[[1],[2]],"tail":"zero"}"#).unwrap();
        assert_eq!(e, TowerElement::from_i64(&[[1], [2]]));
        let bad = r#"{"groups":[{"rank":1,"torsion":[]}],"maps":[{"rows":1,"cols":1,"entries":[[2]]}]}"#;
        assert!(serde_json::from_str::<Tower>(bad).is_err());
    }
}
