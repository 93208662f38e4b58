use crate::adic::{cofactors, LatticeChain};
use crate::error::{Error, Result};
use crate::fgab::{IntMatrix, Lattice};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use std::collections::BTreeSet;

/// Rational `d×d` matrix `num / den` in lowest terms with `den > 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multiplier {
    num: IntMatrix,
    den: BigInt,
}

impl Multiplier {
    pub fn new(num: IntMatrix, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Precondition("zero denominator".into()));
        }
        let g = num.entries().iter().fold(den.clone(), |acc, x| acc.gcd(x));
        let g = if den.is_negative() { -g } else { g };
        let num = IntMatrix::new(num.rows(), num.cols(), num.entries().iter().map(|x| x / &g).collect())?;
        Ok(Multiplier { num, den: den / g })
    }

    pub fn integer(m: IntMatrix) -> Self {
        Multiplier::new(m, BigInt::one()).expect("nonzero denominator")
    }

    /// `V^{-1} W`.
    pub fn quotient(v: &IntMatrix, w: &IntMatrix) -> Self {
        let adj = cofactors(v).transpose();
        Multiplier::new(adj.mul(w).expect("square"), v.det().expect("square")).expect("invertible")
    }

    pub fn dim(&self) -> usize {
        self.num.rows()
    }

    pub fn numerator(&self) -> &IntMatrix {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn entry(&self, i: usize, j: usize) -> BigRational {
        BigRational::new(self.num.get(i, j).clone(), self.den.clone())
    }

    pub fn mul(&self, other: &Multiplier) -> Multiplier {
        Multiplier::new(self.num.mul(&other.num).expect("square"), &self.den * &other.den).expect("nonzero")
    }

    pub fn sub(&self, other: &Multiplier) -> Multiplier {
        let a = self.num.scale(&other.den);
        let b = other.num.scale(&self.den);
        Multiplier::new(a.sub(&b).expect("same shape"), &self.den * &other.den).expect("nonzero")
    }

    /// `V · self` when it is an integer matrix.
    pub fn left_integral(&self, v: &IntMatrix) -> Option<IntMatrix> {
        let p = v.mul(&self.num).expect("square");
        p.entries().iter().all(|x| x.is_multiple_of(&self.den)).then(|| {
            IntMatrix::new(p.rows(), p.cols(), p.entries().iter().map(|x| x / &self.den).collect()).expect("shape")
        })
    }

    /// Image `x · self` of a rational row vector.
    pub fn apply(&self, x: &[BigRational]) -> Vec<BigRational> {
        (0..self.dim())
            .map(|j| {
                x.iter()
                    .enumerate()
                    .fold(BigRational::zero(), |s, (i, xi)| s + xi * self.entry(i, j))
            })
            .collect()
    }
}

impl std::fmt::Display for Multiplier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let cell = |x: &BigInt| {
            let r = BigRational::new(x.clone(), self.den.clone());
            r.to_string()
        };
        if self.dim() == 1 {
            return f.write_str(&cell(self.num.get(0, 0)));
        }
        let rows: Vec<String> = (0..self.dim())
            .map(|i| {
                let cells: Vec<String> = self.num.row(i).iter().map(cell).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl Serialize for Multiplier {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A homomorphism defined on `r_{level}` sending the basis rows of `V_{level}` to the
/// rows of `W`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrivialHom {
    pub level: usize,
    #[serde(rename = "W")]
    pub w: IntMatrix,
}

impl TrivialHom {
    pub fn new(level: usize, w: IntMatrix) -> Result<Self> {
        if !w.is_square() {
            return Err(Error::Dimension("W must be square".into()));
        }
        Ok(TrivialHom { level, w })
    }

    pub fn zero(d: usize) -> Self {
        TrivialHom {
            level: 0,
            w: IntMatrix::zeros(d, d),
        }
    }

    pub fn identity(d: usize) -> Self {
        TrivialHom {
            level: 0,
            w: IntMatrix::identity(d),
        }
    }

    /// The rational matrix `S = V_{level}^{-1} W`, so that `σ(v) = v S`.
    pub fn multiplier(&self, source: &LatticeChain) -> Multiplier {
        Multiplier::quotient(&source.v(self.level), &self.w)
    }

    /// Least level `i ≤ max_level` on which `v ↦ v S` is integral.
    pub fn from_multiplier(source: &LatticeChain, s: &Multiplier, max_level: usize) -> Option<Self> {
        (0..=max_level).find_map(|i| s.left_integral(&source.v(i)).map(|w| TrivialHom { level: i, w }))
    }

    /// `σ(r_i)` for `i ≥ level`.
    pub fn image(&self, source: &LatticeChain, i: usize) -> Lattice {
        Lattice::row_span(&self.image_basis(source, i))
    }

    fn image_basis(&self, source: &LatticeChain, i: usize) -> IntMatrix {
        let mut p = self.w.clone();
        for k in self.level..i {
            p = source.transition(k).mul(&p).expect("square");
        }
        p
    }
}

/// Outcome of the continuity search; `levels[j]` is the least `i` with `σ(r_i) ⊆ ℓ_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Continuity {
    Certified { levels: Vec<usize> },
    Blocked { target_level: usize, searched_to: usize },
}

impl Continuity {
    pub fn is_certified(&self) -> bool {
        matches!(self, Continuity::Certified { .. })
    }
}

/// Source levels searched above the domain level for each target level.
pub fn search_horizon(depth: usize) -> usize {
    4 * (depth + 1)
}

/// For each `j ≤ depth`, the least `i ≥ level` with `σ(r_i) ⊆ ℓ_j`.
pub fn continuity_check(h: &TrivialHom, source: &LatticeChain, target: &LatticeChain, depth: usize) -> Continuity {
    let last = h.level + search_horizon(depth);
    let mut levels = Vec::with_capacity(depth + 1);
    let mut i = h.level;
    let mut basis = h.w.clone();
    for j in 0..=depth {
        let lj = target.lattice(j);
        loop {
            if lj.contains_lattice(&Lattice::row_span(&basis)).expect("same dimension") {
                levels.push(i);
                break;
            }
            if i >= last {
                return Continuity::Blocked {
                    target_level: j,
                    searched_to: last,
                };
            }
            basis = source.transition(i).mul(&basis).expect("square");
            i += 1;
        }
    }
    Continuity::Certified { levels }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifiedHom {
    #[serde(flatten)]
    pub hom: TrivialHom,
    pub multiplier: Multiplier,
    #[serde(skip)]
    pub certificate: Vec<usize>,
}

/// Certified trivial homomorphisms found in the box `level ≤ bound`, `|W_{ij}| ≤ bound`,
/// one per homotopy class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub depth: usize,
    pub bound: u64,
    pub candidates: usize,
    pub homs: Vec<CertifiedHom>,
}

impl Enumeration {
    pub fn multipliers(&self) -> BTreeSet<Multiplier> {
        self.homs.iter().map(|h| h.multiplier.clone()).collect()
    }
}

impl Serialize for Enumeration {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Cert<'a> {
            level: usize,
            target_levels: &'a [usize],
        }
        #[derive(Serialize)]
        struct Repr<'a> {
            depth: usize,
            bound: u64,
            candidates: usize,
            complete: &'static str,
            homs: &'a [CertifiedHom],
            certificates: Vec<Cert<'a>>,
        }
        Repr {
            depth: self.depth,
            bound: self.bound,
            candidates: self.candidates,
            complete: "relative to the stated bounds",
            homs: &self.homs,
            certificates: self
                .homs
                .iter()
                .map(|h| Cert {
                    level: h.hom.level,
                    target_levels: &h.certificate,
                })
                .collect(),
        }
        .serialize(s)
    }
}

fn box_matrices(d: usize, bound: i64) -> impl Iterator<Item = IntMatrix> {
    let side = (2 * bound + 1) as u64;
    let count = side.pow((d * d) as u32);
    (0..count).map(move |mut code| {
        let entries = (0..d * d)
            .map(|_| {
                let e = (code % side) as i64 - bound;
                code /= side;
                BigInt::from(e)
            })
            .collect();
        IntMatrix::new(d, d, entries).expect("shape")
    })
}

pub fn enumerate_trivial_homs(
    source: &LatticeChain,
    target: &LatticeChain,
    depth: usize,
    bound: u64,
) -> Result<Enumeration> {
    let d = source.dim();
    if target.dim() != d {
        return Err(Error::Dimension("chains of different dimension".into()));
    }
    let mut seen = BTreeSet::new();
    let mut homs = Vec::new();
    let mut candidates = 0;
    for level in 0..=bound as usize {
        for w in box_matrices(d, bound as i64) {
            candidates += 1;
            let h = TrivialHom { level, w };
            let s = h.multiplier(source);
            if !seen.insert(s.clone()) {
                continue;
            }
            if let Continuity::Certified { levels } = continuity_check(&h, source, target, depth) {
                homs.push(CertifiedHom {
                    hom: h,
                    multiplier: s,
                    certificate: levels,
                });
            }
        }
    }
    Ok(Enumeration {
        depth,
        bound,
        candidates,
        homs,
    })
}

/// Homotopic trivial homomorphisms induce the same map on the quotient; for
/// continuous maps this means their difference vanishes on the common domain.
pub fn homotopic(a: &TrivialHom, b: &TrivialHom, source: &LatticeChain) -> bool {
    a.multiplier(source).sub(&b.multiplier(source)).is_zero()
}

/// `τ ∘ σ` for `σ: r → ℓ` and `τ: ℓ → m`, defined on the first level where `σ` lands in
/// the domain of `τ`.
pub fn compose(
    sigma: &TrivialHom,
    tau: &TrivialHom,
    r: &LatticeChain,
    l: &LatticeChain,
    depth: usize,
) -> Option<TrivialHom> {
    let domain = l.lattice(tau.level);
    let last = sigma.level + search_horizon(depth);
    let i = (sigma.level..=last).find(|&i| domain.contains_lattice(&sigma.image(r, i)).expect("same dimension"))?;
    let s = sigma.multiplier(r).mul(&tau.multiplier(l));
    TrivialHom::from_multiplier(r, &s, i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steinitz::DivisorSequence;

    fn powers(p: u64) -> LatticeChain {
        LatticeChain::from_divisors(&DivisorSequence::powers(p))
    }

    fn one(c: i64) -> IntMatrix {
        IntMatrix::from_i64(&[[c]])
    }

    #[test]
    fn continuity_examples() {
        let two = powers(2);
        let c = continuity_check(&TrivialHom::identity(1), &two, &two, 6);
        assert_eq!(
            c,
            Continuity::Certified {
                levels: (0..=6).collect()
            }
        );
        let three = TrivialHom::new(0, one(3)).unwrap();
        assert!(continuity_check(&three, &two, &two, 8).is_certified());
        let three_adic = powers(3);
        for s in 0..=5 {
            for m in -20..=20i64 {
                if m == 0 {
                    continue;
                }
                let h = TrivialHom::new(s, one(m)).unwrap();
                let blocked = !continuity_check(&h, &two, &three_adic, 8).is_certified();
                let j = (0..=8).find(|&j| m % 3i64.pow(j) != 0).unwrap();
                assert!(blocked && j <= 8);
            }
        }
    }

    #[test]
    fn enumeration_two_to_three() {
        let e = enumerate_trivial_homs(&powers(2), &powers(3), 8, 20).unwrap();
        assert_eq!(e.homs.len(), 1);
        assert!(e.homs[0].multiplier.is_zero());
    }

    #[test]
    fn enumeration_dyadic() {
        let two = powers(2);
        let e = enumerate_trivial_homs(&two, &two, 8, 3).unwrap();
        let mut expected = BTreeSet::new();
        for s in 0..=3u32 {
            for m in -3..=3i64 {
                expected.insert(Multiplier::new(one(m), BigInt::from(2i64.pow(s))).unwrap());
            }
        }
        assert_eq!(e.multipliers(), expected);
        assert_eq!(expected.len(), 19);
        let half = Multiplier::new(one(1), BigInt::from(2)).unwrap();
        let h = e.homs.iter().find(|h| h.multiplier == half).unwrap();
        assert_eq!(h.hom.level, 1);
        assert_eq!(
            enumerate_trivial_homs(&two, &powers(5), 4, 0)
                .unwrap()
                .multipliers()
                .len(),
            1
        );
    }

    #[test]
    fn composition_stays_certified() {
        let two = powers(2);
        let e = enumerate_trivial_homs(&two, &two, 6, 2).unwrap();
        for a in &e.homs {
            for b in &e.homs {
                let c = compose(&a.hom, &b.hom, &two, &two, 6).unwrap();
                assert!(continuity_check(&c, &two, &two, 6).is_certified());
                assert_eq!(c.multiplier(&two), a.multiplier.mul(&b.multiplier));
            }
        }
    }

    #[test]
    fn homotopy_relation() {
        let two = powers(2);
        let a = TrivialHom::new(0, one(1)).unwrap();
        let b = TrivialHom::new(1, one(2)).unwrap();
        let c = TrivialHom::new(1, one(1)).unwrap();
        assert!(homotopic(&a, &b, &two));
        assert!(!homotopic(&a, &c, &two));
        let m = Multiplier::new(IntMatrix::from_i64(&[[2, 0], [0, -4]]), BigInt::from(-6)).unwrap();
        assert_eq!(m.to_string(), "[[-1/3, 0], [0, 2/3]]");
    }
}
