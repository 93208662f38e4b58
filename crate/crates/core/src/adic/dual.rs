use crate::error::{Error, Result};
use crate::fgab::{IntMatrix, Lattice};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize};

/// Full-rank lattice `(1/den) L` in `Q^d` with `L ⊆ Z^d` in Hermite form and
/// `gcd(den, entries of L) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalLattice {
    #[serde(serialize_with = "crate::fgab::ser::int")]
    den: BigInt,
    lattice: Lattice,
}

impl RationalLattice {
    /// Row span of rational generators; must have rank `d`.
    pub fn from_generators(d: usize, gens: &[Vec<BigRational>]) -> Result<Self> {
        if gens.iter().any(|g| g.len() != d) {
            return Err(Error::Dimension(format!("generators must have length {d}")));
        }
        let den = gens.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let rows: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| {
                g.iter()
                    .map(|x| (x * BigRational::from_integer(den.clone())).to_integer())
                    .collect()
            })
            .collect();
        RationalLattice::new(den, Lattice::new(d, rows)?)
    }

    pub fn new(den: BigInt, lattice: Lattice) -> Result<Self> {
        if !lattice.is_full_rank() {
            return Err(Error::RankDeficient);
        }
        if !den.is_positive() {
            return Err(Error::Precondition("denominator must be positive".into()));
        }
        let g = lattice.basis().entries().iter().fold(den.clone(), |acc, x| acc.gcd(x));
        let lattice = if g.is_one() {
            lattice
        } else {
            let rows = lattice
                .basis_rows()
                .into_iter()
                .map(|r| r.into_iter().map(|x| x / &g).collect())
                .collect();
            Lattice::new(lattice.dim(), rows)?
        };
        Ok(RationalLattice { den: den / g, lattice })
    }

    pub fn integral(lattice: Lattice) -> Result<Self> {
        RationalLattice::new(BigInt::one(), lattice)
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn numerator(&self) -> &Lattice {
        &self.lattice
    }

    pub fn basis(&self) -> Vec<Vec<BigRational>> {
        self.lattice
            .basis_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|x| BigRational::new(x, self.den.clone())).collect())
            .collect()
    }

    /// `Z^d ⊆ self`.
    pub fn contains_integers(&self) -> bool {
        self.lattice
            .contains_lattice(&Lattice::scaled(self.dim(), &self.den))
            .expect("same dimension")
    }

    /// `|det|` of a basis as a rational number.
    pub fn covolume(&self) -> BigRational {
        let c = self.lattice.covolume().expect("full rank");
        BigRational::new(c, self.den.pow(self.dim() as u32))
    }

    /// `{g : ⟨x, g⟩ ∈ Z for all x}`.
    pub fn dual(&self) -> RationalLattice {
        let b = self.lattice.basis();
        let det = b.det().expect("square");
        let c = cofactors(b).scale(&self.den);
        let (den, c) = if det.is_negative() {
            (-det, c.scale(&BigInt::from(-1)))
        } else {
            (det, c)
        };
        RationalLattice::new(den, Lattice::row_span(&c)).expect("full rank")
    }
}

fn minor(m: &IntMatrix, skip_r: usize, skip_c: usize) -> IntMatrix {
    let n = m.rows();
    let entries = (0..n)
        .filter(|&i| i != skip_r)
        .flat_map(|i| (0..n).filter(move |&j| j != skip_c).map(move |j| m.get(i, j).clone()))
        .collect();
    IntMatrix::new(n - 1, n - 1, entries).expect("square minor")
}

/// Cofactor matrix, the transpose of the adjugate.
pub(crate) fn cofactors(m: &IntMatrix) -> IntMatrix {
    let n = m.rows();
    if n == 1 {
        return IntMatrix::identity(1);
    }
    let mut c = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let d = minor(m, i, j).det().expect("square");
            c.set(i, j, if (i + j) % 2 == 0 { d } else { -d });
        }
    }
    c
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualLatticeResult {
    /// `A*` as a sublattice of `Z^d`.
    pub lattice: Lattice,
    /// `[Z^d : A*]`.
    #[serde(serialize_with = "crate::fgab::ser::int")]
    pub index: BigInt,
    /// `[A : Z^d]`.
    #[serde(serialize_with = "crate::fgab::ser::int")]
    pub superlattice_index: BigInt,
    /// Every pairing of basis vectors of `A` and `A*` is integral.
    pub pairing_ok: bool,
    /// Dualizing `A*` returns `A`.
    pub involution_ok: bool,
}

/// Dual of a lattice `Z^d ⊆ A ⊆ Q^d` given by rational generators.
pub fn dual_lattice(d: usize, gens: &[Vec<BigRational>]) -> Result<DualLatticeResult> {
    let a = RationalLattice::from_generators(d, gens)?;
    if !a.contains_integers() {
        return Err(Error::Precondition("the lattice does not contain Z^d".into()));
    }
    let star = a.dual();
    debug_assert!(star.den.is_one());
    let pairing_ok = a.basis().iter().all(|x| {
        star.lattice.basis_rows().iter().all(|g| {
            x.iter()
                .zip(g)
                .map(|(p, q)| p * BigRational::from_integer(q.clone()))
                .fold(BigRational::zero(), |s, t| s + t)
                .is_integer()
        })
    });
    let index = star.lattice.covolume().expect("full rank");
    let superlattice_index = a.covolume().recip().to_integer();
    let involution_ok = star.dual() == a;
    Ok(DualLatticeResult {
        lattice: star.lattice,
        index,
        superlattice_index,
        pairing_ok,
        involution_ok,
    })
}

/// A rational matrix entry in JSON: an integer or a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalEntry(pub BigRational);

impl<'de> Deserialize<'de> for RationalEntry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = serde_json::Value::deserialize(d)?;
        let text = match &v {
            serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
            serde_json::Value::String(s) => s.trim().to_string(),
            _ => return Err(D::Error::custom("expected an integer or a \"p/q\" string")),
        };
        let parse = |s: &str| s.trim().parse::<BigInt>().map_err(D::Error::custom);
        let r = match text.split_once('/') {
            Some((p, q)) => {
                let q = parse(q)?;
                if q.is_zero() {
                    return Err(D::Error::custom("zero denominator"));
                }
                BigRational::new(parse(p)?, q)
            }
            None => BigRational::from_integer(parse(&text)?),
        };
        Ok(RationalEntry(r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::bigs;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn self_dual() {
        let r = dual_lattice(2, &[vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]]).unwrap();
        assert_eq!(r.lattice, Lattice::standard(2));
        assert!(r.pairing_ok && r.involution_ok);
    }

    #[test]
    fn half_diagonal() {
        let gens = [vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)], vec![q(1, 2), q(1, 2)]];
        let r = dual_lattice(2, &gens).unwrap();
        for g1 in -4..=4i64 {
            for g2 in -4..=4i64 {
                assert_eq!(r.lattice.contains(&bigs(&[g1, g2])), (g1 + g2) % 2 == 0);
            }
        }
        assert_eq!(r.index, BigInt::from(2));
        assert_eq!(r.superlattice_index, BigInt::from(2));
        assert!(r.pairing_ok && r.involution_ok);
    }

    #[test]
    fn one_dimensional() {
        let r = dual_lattice(1, &[vec![q(1, 6)]]).unwrap();
        assert_eq!(r.lattice, Lattice::from_i64(1, &[[6]]));
        assert_eq!(r.index, BigInt::from(6));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(dual_lattice(2, &[vec![q(1, 1), q(1, 1)]]), Err(Error::RankDeficient));
        assert!(dual_lattice(1, &[vec![q(2, 1)]]).is_err());
    }

    #[test]
    fn entries_parse() {
        let v: Vec<RationalEntry> = serde_json::from_str(r#"[3, "1/2", " -4/6 "]"#).unwrap();
        assert_eq!(v[1].0, q(1, 2));
        assert_eq!(v[2].0, q(-2, 3));
        assert!(serde_json::from_str::<RationalEntry>(r#""1/0""#).is_err());
    }
}
