use super::kernel::Track;
use super::lattice::Lattice;
use super::matrix::{from_json_vec, json_vec, IntMatrix, JsonInt};
use super::smith::{invariant_factors, smith_full, solve_linear};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Finitely generated abelian group `Z^rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_m` with `t_i | t_{i+1}`.
///
/// Elements are coordinate vectors over the canonical generators: free
/// coordinates first, then torsion coordinates reduced modulo `t_i`.
#[derive(Clone, Debug)]
pub struct FgGroup {
    rank: usize,
    torsion: Vec<BigInt>,
    presentation: Option<IntMatrix>,
}

impl PartialEq for FgGroup {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.torsion == other.torsion
    }
}

impl Eq for FgGroup {}

impl std::hash::Hash for FgGroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rank.hash(state);
        self.torsion.hash(state);
    }
}

impl FgGroup {
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        for (i, t) in torsion.iter().enumerate() {
            if *t < BigInt::from(2) {
                return Err(Error::Precondition(format!("torsion coefficient {t} is below 2")));
            }
            if i > 0 && !t.is_multiple_of(&torsion[i - 1]) {
                return Err(Error::Precondition(format!(
                    "torsion {} does not divide {t}",
                    torsion[i - 1]
                )));
            }
        }
        Ok(FgGroup {
            rank,
            torsion,
            presentation: None,
        })
    }

    pub fn from_i64(rank: usize, torsion: &[i64]) -> Result<Self> {
        Self::new(rank, torsion.iter().map(|&t| BigInt::from(t)).collect())
    }

    /// `Z^n / (column span of p)` for an `n × k` matrix `p`.
    pub fn from_presentation(p: &IntMatrix) -> Self {
        let inv = invariant_factors(p);
        let rank = p.rows() - inv.len();
        let torsion = inv.into_iter().filter(|d| !d.is_one()).collect();
        FgGroup {
            rank,
            torsion,
            presentation: Some(p.clone()),
        }
    }

    /// Group with arbitrary cyclic orders; `0` means a copy of `Z`.
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Self {
        Self::from_presentation(&IntMatrix::diag(orders))
    }

    pub fn zero() -> Self {
        FgGroup {
            rank: 0,
            torsion: vec![],
            presentation: None,
        }
    }

    pub fn free(n: usize) -> Self {
        FgGroup {
            rank: n,
            torsion: vec![],
            presentation: None,
        }
    }

    /// `Z/n`; `n = 0` gives `Z` and `n = 1` the trivial group.
    pub fn cyclic(n: impl Into<BigInt>) -> Self {
        Self::from_cyclic_orders(&[n.into()])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn presentation(&self) -> Option<&IntMatrix> {
        self.presentation.as_ref()
    }

    pub fn ngens(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.ngens() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Order of the `i`-th canonical generator; zero for free generators.
    pub fn gen_order(&self, i: usize) -> BigInt {
        if i < self.rank {
            BigInt::zero()
        } else {
            self.torsion[i - self.rank].clone()
        }
    }

    pub fn check(&self, x: &[BigInt]) -> Result<()> {
        if x.len() != self.ngens() {
            return Err(Error::Dimension(format!(
                "element with {} coordinates in a group with {} generators",
                x.len(),
                self.ngens()
            )));
        }
        Ok(())
    }

    /// Canonical coordinates of an element.
    pub fn reduce(&self, x: &[BigInt]) -> Vec<BigInt> {
        x.iter()
            .enumerate()
            .map(|(i, xi)| {
                if i < self.rank {
                    xi.clone()
                } else {
                    xi.mod_floor(&self.torsion[i - self.rank])
                }
            })
            .collect()
    }

    pub fn is_zero_elem(&self, x: &[BigInt]) -> bool {
        self.reduce(x).iter().all(Zero::is_zero)
    }

    pub fn zero_elem(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.ngens()]
    }

    pub fn add(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.reduce(&s)
    }

    pub fn sub(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.reduce(&s)
    }

    /// Relation lattice inside `Z^ngens`.
    pub fn relations(&self) -> Lattice {
        let g = self.ngens();
        let gens = self
            .torsion
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let mut v = vec![BigInt::zero(); g];
                v[self.rank + i] = t.clone();
                v
            })
            .collect();
        Lattice::new(g, gens).expect("relation vectors")
    }

    /// Diagonal relation matrix `ngens × torsion.len()` (columns are relations).
    pub fn relation_columns(&self) -> IntMatrix {
        let g = self.ngens();
        let mut m = IntMatrix::zeros(g, self.torsion.len());
        for (i, t) in self.torsion.iter().enumerate() {
            m.set(self.rank + i, i, t.clone());
        }
        m
    }

    /// All elements of a finite group in canonical coordinates.
    pub fn elements(&self) -> Option<Vec<Vec<BigInt>>> {
        if !self.is_finite() {
            return None;
        }
        let mut out = vec![vec![]];
        for t in &self.torsion {
            let mut next = Vec::new();
            for v in &out {
                let mut k = BigInt::zero();
                while &k < t {
                    let mut w: Vec<BigInt> = v.clone();
                    w.push(k.clone());
                    next.push(w);
                    k += 1;
                }
            }
            out = next;
        }
        Some(out)
    }

    pub fn direct_sum(&self, other: &FgGroup) -> FgGroup {
        let mut orders: Vec<BigInt> = vec![BigInt::zero(); self.rank + other.rank];
        orders.extend(self.torsion.iter().cloned());
        orders.extend(other.torsion.iter().cloned());
        let mut g = Self::from_cyclic_orders(&orders);
        g.presentation = None;
        g
    }

    pub fn power(&self, d: usize) -> FgGroup {
        (0..d).fold(FgGroup::zero(), |acc, _| acc.direct_sum(self))
    }
}

impl fmt::Display for FgGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupRepr {
    rank: usize,
    torsion: Vec<JsonInt>,
}

impl Serialize for FgGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupRepr {
            rank: self.rank,
            torsion: json_vec(&self.torsion),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FgGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GroupRepr::deserialize(d)?;
        FgGroup::new(r.rank, from_json_vec(r.torsion)).map_err(serde::de::Error::custom)
    }
}

/// Homomorphism given by its action on canonical generators: column `j` is the
/// image of generator `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    source: FgGroup,
    target: FgGroup,
    matrix: IntMatrix,
}

impl Homomorphism {
    pub fn new(source: FgGroup, target: FgGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.ngens() || matrix.cols() != source.ngens() {
            return Err(Error::Dimension(format!(
                "{}x{} matrix for a map from {} generators to {}",
                matrix.rows(),
                matrix.cols(),
                source.ngens(),
                target.ngens()
            )));
        }
        let rel = target.relations();
        for j in 0..source.ngens() {
            let col: Vec<BigInt> = matrix.col(j);
            let ord = source.gen_order(j);
            let scaled: Vec<BigInt> = col.iter().map(|x| x * &ord).collect();
            if !rel.contains(&scaled) {
                return Err(Error::InvalidHom(format!(
                    "generator {j} of order {ord} maps to {col:?}, which does not satisfy the relation"
                )));
            }
        }
        let cols = matrix.to_cols().into_iter().map(|c| target.reduce(&c)).collect();
        let matrix = IntMatrix::from_cols(cols, target.ngens())?;
        Ok(Homomorphism { source, target, matrix })
    }

    pub fn identity(g: &FgGroup) -> Self {
        Homomorphism {
            source: g.clone(),
            target: g.clone(),
            matrix: IntMatrix::identity(g.ngens()),
        }
    }

    pub fn zero(source: &FgGroup, target: &FgGroup) -> Self {
        Homomorphism {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.ngens(), source.ngens()),
        }
    }

    /// Multiplication by `k` on `g`.
    pub fn scalar(g: &FgGroup, k: impl Into<BigInt>) -> Self {
        Homomorphism::new(g.clone(), g.clone(), IntMatrix::scalar(g.ngens(), k)).expect("scalar maps respect relations")
    }

    pub fn source(&self) -> &FgGroup {
        &self.source
    }

    pub fn target(&self) -> &FgGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        self.source.check(x)?;
        Ok(self.target.reduce(&self.matrix.mul_vec(x)?))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Homomorphism) -> Result<Homomorphism> {
        if other.target != self.source {
            return Err(Error::Dimension(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.source, self.target, other.source, other.target
            )));
        }
        Homomorphism::new(
            other.source.clone(),
            self.target.clone(),
            self.matrix.mul(&other.matrix)?,
        )
    }

    pub fn add(&self, other: &Homomorphism) -> Result<Homomorphism> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Dimension("adding maps between different groups".into()));
        }
        Homomorphism::new(
            self.source.clone(),
            self.target.clone(),
            self.matrix.add(&other.matrix)?,
        )
    }

    pub fn neg(&self) -> Homomorphism {
        Homomorphism::new(
            self.source.clone(),
            self.target.clone(),
            self.matrix.scale(&BigInt::from(-1)),
        )
        .expect("negation respects relations")
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn direct_sum(&self, other: &Homomorphism) -> Homomorphism {
        let qs = orders_quotient(&[gen_orders(&self.source), gen_orders(&other.source)].concat());
        let qt = orders_quotient(&[gen_orders(&self.target), gen_orders(&other.target)].concat());
        let m = IntMatrix::block_diag(&[&self.matrix, &other.matrix]);
        qs.induced(&qt, &m).expect("block maps respect relations")
    }

    /// Some `x` with `self(x) = y`, if any.
    pub fn preimage(&self, y: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        self.target.check(y)?;
        let sys = self.matrix.hstack(&self.target.relation_columns())?;
        Ok(solve_linear(&sys, y)?.map(|x| self.source.reduce(&x[..self.source.ngens()])))
    }

    /// Generators of the kernel as a sublattice of `Z^{source.ngens}` (contains the relations).
    pub fn kernel_lattice(&self) -> Lattice {
        let n = self.source.ngens();
        let sys = self
            .matrix
            .hstack(&self.target.relation_columns())
            .expect("same row count");
        let k = super::smith::kernel_lattice(&sys);
        let gens = k.basis_rows().into_iter().map(|r| r[..n].to_vec()).collect();
        Lattice::new(n, gens)
            .and_then(|l| l.sum(&self.source.relations()))
            .expect("kernel generators")
    }

    /// Image plus target relations as a sublattice of `Z^{target.ngens}`.
    pub fn image_lattice(&self) -> Lattice {
        Lattice::column_span(&self.matrix)
            .sum(&self.target.relations())
            .expect("same ambient")
    }
}

fn gen_orders(g: &FgGroup) -> Vec<BigInt> {
    (0..g.ngens()).map(|i| g.gen_order(i)).collect()
}

/// `⊕ Z/orders[i]` (order 0 meaning `Z`) as a quotient of `Z^n`, so that
/// concatenated coordinates can be projected to canonical ones.
pub(crate) fn orders_quotient(orders: &[BigInt]) -> Quotient {
    let n = orders.len();
    let rel = orders
        .iter()
        .enumerate()
        .filter(|(_, o)| !o.is_zero())
        .map(|(i, o)| {
            let mut v = vec![BigInt::zero(); n];
            v[i] = o.clone();
            v
        })
        .collect();
    let inner = Lattice::new(n, rel).expect("diagonal relations");
    Quotient::new(&Lattice::standard(n), &inner).expect("relations lie in Z^n")
}

/// The group `outer / inner` for lattices `inner ⊆ outer ⊆ Z^n`, with explicit
/// generator lifts and a projection onto canonical coordinates.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FgGroup,
    outer: Lattice,
    inner: Lattice,
    /// `lifts[i]` is a vector in `outer` mapping to the `i`-th canonical generator.
    lifts: Vec<Vec<BigInt>>,
    /// Column `i` of `v` converts outer-basis coordinates to the i-th smith coordinate.
    v: IntMatrix,
    /// Smith coordinates kept in the group, in canonical order.
    keep: Vec<usize>,
}

impl Quotient {
    pub fn new(outer: &Lattice, inner: &Lattice) -> Result<Self> {
        if outer.dim() != inner.dim() {
            return Err(Error::Dimension("quotient of lattices in different spaces".into()));
        }
        let k = outer.rank();
        let rows = (0..inner.rank())
            .map(|i| {
                outer
                    .coords(inner.basis().row(i))
                    .ok_or_else(|| Error::Precondition("inner lattice is not contained in outer".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let r = IntMatrix::from_rows(rows, k)?;
        let f = smith_full(
            &r,
            Track {
                v: true,
                vinv: true,
                ..Track::NONE
            },
        );
        let diag: Vec<BigInt> = (0..k)
            .map(|i| {
                if i < f.rank {
                    f.s.get(i, i).clone()
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        let mut keep: Vec<usize> = (f.rank..k).collect();
        keep.extend((0..f.rank).filter(|&i| !diag[i].is_one()));
        let torsion: Vec<BigInt> = keep.iter().filter(|&&i| i < f.rank).map(|&i| diag[i].clone()).collect();
        let group = FgGroup::new(keep.len() - torsion.len(), torsion)?;
        let new_basis = f.vinv.mul(outer.basis())?;
        let lifts = keep.iter().map(|&i| new_basis.row(i).to_vec()).collect();
        Ok(Quotient {
            group,
            outer: outer.clone(),
            inner: inner.clone(),
            lifts,
            v: f.v,
            keep,
        })
    }

    pub fn outer(&self) -> &Lattice {
        &self.outer
    }

    pub fn inner(&self) -> &Lattice {
        &self.inner
    }

    pub fn lifts(&self) -> &[Vec<BigInt>] {
        &self.lifts
    }

    /// Canonical coordinates of the class of `x`; errors if `x` is not in `outer`.
    pub fn project(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let c = self
            .outer
            .coords(x)
            .ok_or_else(|| Error::Precondition("vector is not in the outer lattice".into()))?;
        let c = if c.is_empty() { c } else { self.v.vec_mul(&c)? };
        let raw: Vec<BigInt> = self.keep.iter().map(|&i| c[i].clone()).collect();
        Ok(self.group.reduce(&raw))
    }

    /// A vector of `outer` representing the given group element.
    pub fn lift(&self, g: &[BigInt]) -> Result<Vec<BigInt>> {
        self.group.check(g)?;
        let mut out = vec![BigInt::zero(); self.outer.dim()];
        for (gi, l) in g.iter().zip(&self.lifts) {
            if !gi.is_zero() {
                for (o, x) in out.iter_mut().zip(l) {
                    *o += gi * x;
                }
            }
        }
        Ok(out)
    }

    /// Map between quotients induced by a matrix acting on ambient column vectors.
    pub fn induced(&self, to: &Quotient, m: &IntMatrix) -> Result<Homomorphism> {
        let cols = self
            .lifts
            .iter()
            .map(|l| to.project(&m.mul_vec(l)?))
            .collect::<Result<Vec<_>>>()?;
        Homomorphism::new(
            self.group.clone(),
            to.group.clone(),
            IntMatrix::from_cols(cols, to.group.ngens())?,
        )
    }
}

/// Kernel, image and cokernel of a homomorphism with generator witnesses.
#[derive(Clone, Debug)]
pub struct HomDecomposition {
    pub kernel: FgGroup,
    pub image: FgGroup,
    pub cokernel: FgGroup,
    /// Kernel generators in source coordinates.
    pub kernel_gens: Vec<Vec<BigInt>>,
    /// Image generators in target coordinates, with a source preimage for each.
    pub image_gens: Vec<Vec<BigInt>>,
    pub image_preimages: Vec<Vec<BigInt>>,
    /// Target elements mapping to the cokernel generators.
    pub cokernel_gens: Vec<Vec<BigInt>>,
    pub kernel_quotient: Quotient,
    pub image_quotient: Quotient,
    pub cokernel_quotient: Quotient,
}

pub fn hom_decompose(h: &Homomorphism) -> HomDecomposition {
    let src = h.source();
    let tgt = h.target();
    let kq = Quotient::new(&h.kernel_lattice(), &src.relations()).expect("relations in kernel");
    let iq = Quotient::new(&h.image_lattice(), &tgt.relations()).expect("relations in image");
    let cq = Quotient::new(&Lattice::standard(tgt.ngens()), &h.image_lattice()).expect("image in ambient");
    let kernel_gens = kq.lifts().iter().map(|l| src.reduce(l)).collect();
    let image_gens: Vec<Vec<BigInt>> = iq.lifts().iter().map(|l| tgt.reduce(l)).collect();
    let image_preimages = image_gens
        .iter()
        .map(|y| h.preimage(y).ok().flatten().expect("image generator has a preimage"))
        .collect();
    let cokernel_gens = cq.lifts().iter().map(|l| tgt.reduce(l)).collect();
    HomDecomposition {
        kernel: kq.group.clone(),
        image: iq.group.clone(),
        cokernel: cq.group.clone(),
        kernel_gens,
        image_gens,
        image_preimages,
        cokernel_gens,
        kernel_quotient: kq,
        image_quotient: iq,
        cokernel_quotient: cq,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::matrix::bigs;

    #[test]
    fn canonical_groups() {
        let g = FgGroup::from_cyclic_orders(&bigs(&[4, 6, 0]));
        assert_eq!(g, FgGroup::from_i64(1, &[2, 12]).unwrap());
        assert!(FgGroup::from_i64(0, &[4, 6]).is_err());
        assert_eq!(FgGroup::cyclic(1), FgGroup::zero());
        assert_eq!(g.to_string(), "Z ⊕ Z/2 ⊕ Z/12");
    }

    #[test]
    fn decompose_examples() {
        let z = FgGroup::free(1);
        let d = hom_decompose(&Homomorphism::scalar(&z, 2));
        assert_eq!(d.kernel, FgGroup::zero());
        assert_eq!(d.image, z);
        assert_eq!(d.cokernel, FgGroup::cyclic(2));

        let z6 = FgGroup::cyclic(6);
        let d = hom_decompose(&Homomorphism::zero(&z6, &z6));
        assert_eq!(d.kernel, z6);
        assert_eq!(d.cokernel, z6);

        let z2 = FgGroup::free(2);
        let h = Homomorphism::new(z2.clone(), z2, IntMatrix::from_i64(&[[2, 1], [0, 2]])).unwrap();
        assert_eq!(hom_decompose(&h).cokernel, FgGroup::cyclic(4));
    }

    #[test]
    fn relations_checked() {
        let z2 = FgGroup::cyclic(2);
        let z = FgGroup::free(1);
        assert!(Homomorphism::new(z2.clone(), z, IntMatrix::from_i64(&[[1]])).is_err());
        let z4 = FgGroup::cyclic(4);
        assert!(Homomorphism::new(z2, z4, IntMatrix::from_i64(&[[2]])).is_ok());
    }

    #[test]
    fn quotient_projection_roundtrip() {
        let outer = Lattice::from_i64(3, &[[1, 0, 0], [0, 2, 0], [0, 0, 1]]);
        let inner = Lattice::from_i64(3, &[[4, 0, 0], [0, 2, 2]]);
        let q = Quotient::new(&outer, &inner).unwrap();
        assert_eq!(q.group, FgGroup::from_i64(1, &[4]).unwrap());
        for l in q.lifts() {
            assert!(outer.contains(l));
        }
        for (i, l) in q.lifts().iter().enumerate() {
            let mut e = q.group.zero_elem();
            e[i] = BigInt::one();
            assert_eq!(q.project(l).unwrap(), e);
        }
        assert!(q.group.is_zero_elem(&q.project(&bigs(&[4, 2, 2])).unwrap()));
    }

    #[test]
    fn direct_sum_maps() {
        let a = Homomorphism::scalar(&FgGroup::cyclic(4), 3);
        let b = Homomorphism::scalar(&FgGroup::free(1), 2);
        let s = a.direct_sum(&b);
        assert_eq!(s.source(), &FgGroup::from_i64(1, &[4]).unwrap());
        assert_eq!(s.apply(&bigs(&[1, 1])).unwrap(), bigs(&[2, 3]));
    }
}
