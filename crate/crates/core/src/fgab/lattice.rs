use super::kernel;
use super::matrix::IntMatrix;
use super::smith::kernel_lattice;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Sublattice of `Z^d` stored by its row-style Hermite normal form basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: IntMatrix,
    pivots: Vec<usize>,
}

/// Result of `[L1 : L1 ∩ L2]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Index {
    Finite(#[serde(with = "big_str")] BigInt),
    Infinite,
}

mod big_str {
    use num_bigint::BigInt;
    pub fn serialize<S: serde::Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&crate::fgab::JsonInt(x.clone()), s)
    }
}

impl Index {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            Index::Finite(n) => Some(n),
            Index::Infinite => None,
        }
    }
}

impl Lattice {
    /// Lattice generated by the given row vectors.
    pub fn new(dim: usize, generators: Vec<Vec<BigInt>>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.len() != dim) {
            return Err(Error::Dimension(format!("generator of length {} in Z^{dim}", g.len())));
        }
        Ok(Self::from_hnf_rows(dim, kernel::hnf(&generators, dim)))
    }

    fn from_hnf_rows(dim: usize, rows: Vec<Vec<BigInt>>) -> Self {
        let pivots = rows
            .iter()
            .map(|r| r.iter().position(|x| !x.is_zero()).expect("hnf rows are nonzero"))
            .collect();
        Lattice {
            dim,
            basis: IntMatrix::from_rows(rows, dim).expect("hnf rows"),
            pivots,
        }
    }

    /// Lattice generated by the rows of `m`.
    pub fn row_span(m: &IntMatrix) -> Self {
        Self::new(m.cols(), m.to_rows()).expect("rows have matrix width")
    }

    /// Lattice generated by the columns of `m`.
    pub fn column_span(m: &IntMatrix) -> Self {
        Self::new(m.rows(), m.to_cols()).expect("columns have matrix height")
    }

    pub fn from_i64<R: AsRef<[i64]>>(dim: usize, rows: &[R]) -> Self {
        let gens = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::new(dim, gens).expect("generator lengths")
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_hnf_rows(dim, vec![])
    }

    pub fn standard(dim: usize) -> Self {
        Self::scaled(dim, &BigInt::one())
    }

    /// `k·Z^d`.
    pub fn scaled(dim: usize, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(dim);
        }
        Self::from_hnf_rows(dim, IntMatrix::scalar(dim, k.abs()).to_rows())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<Vec<BigInt>> {
        self.basis.to_rows()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    fn check(&self, v: &[BigInt]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::Dimension(format!(
                "vector of length {} in Z^{}",
                v.len(),
                self.dim
            )));
        }
        Ok(())
    }

    fn check_same(&self, other: &Lattice) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Dimension(format!(
                "lattices in Z^{} and Z^{}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    /// Coefficients `c` with `v = c·basis`, if `v` lies in the lattice.
    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if v.len() != self.dim {
            return None;
        }
        let mut x = v.to_vec();
        let mut c = Vec::with_capacity(self.rank());
        for (i, &p) in self.pivots.iter().enumerate() {
            let row = self.basis.row(i);
            if x[..p].iter().any(|e| !e.is_zero()) {
                return None;
            }
            let (q, r) = x[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (xj, bj) in x.iter_mut().zip(row).skip(p) {
                    *xj -= &q * bj;
                }
            }
            c.push(q);
        }
        x.iter().all(Zero::is_zero).then_some(c)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> Result<bool> {
        self.check_same(other)?;
        Ok((0..other.rank()).all(|i| self.contains(other.basis.row(i))))
    }

    /// Canonical coset representative: pivot coordinates reduced into `[0, pivot)`.
    pub fn reduce(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check(v)?;
        let mut x = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            let row = self.basis.row(i);
            let q = x[p].div_floor(&row[p]);
            if !q.is_zero() {
                for (xj, bj) in x.iter_mut().zip(row).skip(p) {
                    *xj -= &q * bj;
                }
            }
        }
        Ok(x)
    }

    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        self.check_same(other)?;
        let mut gens = self.basis_rows();
        gens.extend(other.basis_rows());
        Lattice::new(self.dim, gens)
    }

    /// Intersection via the stacked Hermite form `[[B1, B1], [B2, 0]]`.
    pub fn intersect(&self, other: &Lattice) -> Result<Lattice> {
        self.check_same(other)?;
        let d = self.dim;
        let mut gens = Vec::with_capacity(self.rank() + other.rank());
        for r in self.basis_rows() {
            let mut row = r.clone();
            row.extend(r);
            gens.push(row);
        }
        for r in other.basis_rows() {
            let mut row = r;
            row.extend(std::iter::repeat_n(BigInt::zero(), d));
            gens.push(row);
        }
        let h = kernel::hnf(&gens, 2 * d);
        let rows = h
            .into_iter()
            .filter(|r| r[..d].iter().all(Zero::is_zero))
            .map(|r| r[d..].to_vec())
            .collect();
        Lattice::new(d, rows)
    }

    /// `[self : self ∩ other]`.
    pub fn index(&self, other: &Lattice) -> Result<Index> {
        let meet = self.intersect(other)?;
        if meet.rank() != self.rank() {
            return Ok(Index::Infinite);
        }
        let k = self.rank();
        let rows = (0..k)
            .map(|i| self.coords(meet.basis.row(i)).expect("meet lies in self"))
            .collect();
        let det = IntMatrix::from_rows(rows, k)?.det()?;
        Ok(Index::Finite(det.abs()))
    }

    /// `{M·v : v in self}` for a matrix acting on column vectors.
    pub fn image(&self, m: &IntMatrix) -> Result<Lattice> {
        if m.cols() != self.dim {
            return Err(Error::Dimension(format!(
                "{}x{} matrix applied to Z^{}",
                m.rows(),
                m.cols(),
                self.dim
            )));
        }
        let gens = (0..self.rank())
            .map(|i| m.mul_vec(self.basis.row(i)))
            .collect::<Result<Vec<_>>>()?;
        Lattice::new(m.rows(), gens)
    }

    /// `{x : M·x in self}`.
    pub fn preimage(&self, m: &IntMatrix) -> Result<Lattice> {
        if m.rows() != self.dim {
            return Err(Error::Dimension(format!(
                "{}x{} matrix into Z^{}",
                m.rows(),
                m.cols(),
                self.dim
            )));
        }
        let n = m.cols();
        let neg_bt = self.basis.transpose().scale(&BigInt::from(-1));
        let k = kernel_lattice(&m.hstack(&neg_bt)?);
        let gens = k.basis_rows().into_iter().map(|r| r[..n].to_vec()).collect();
        Lattice::new(n, gens)
    }

    /// Canonical representatives of `Z^d / self` (full-rank lattices only).
    pub fn fundamental_box(&self) -> Option<Vec<Vec<BigInt>>> {
        if !self.is_full_rank() {
            return None;
        }
        let mut out = vec![vec![BigInt::zero(); self.dim]];
        for (i, &p) in self.pivots.iter().enumerate() {
            let m = self.basis.get(i, p).clone();
            let mut next = Vec::new();
            for v in &out {
                let mut k = BigInt::zero();
                while k < m {
                    let mut w = v.clone();
                    w[p] = k.clone();
                    next.push(w);
                    k += 1;
                }
            }
            out = next;
        }
        Some(out)
    }

    /// Product of the pivots, i.e. `[Z^d : self]` for full-rank lattices.
    pub fn covolume(&self) -> Option<BigInt> {
        self.is_full_rank().then(|| {
            self.pivots
                .iter()
                .enumerate()
                .map(|(i, &p)| self.basis.get(i, p).clone())
                .product()
        })
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}> in Z^{}", self.basis, self.dim)
    }
}

impl Serialize for Lattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = IntMatrix::deserialize(d)?;
        Ok(Lattice::row_span(&m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::matrix::bigs;

    #[test]
    fn spec_examples() {
        let two = Lattice::from_i64(1, &[[2]]);
        let three = Lattice::from_i64(1, &[[3]]);
        assert_eq!(two.intersect(&three).unwrap(), Lattice::from_i64(1, &[[6]]));
        let l = Lattice::from_i64(2, &[[2, 0], [0, 3]]);
        assert_eq!(Lattice::standard(2).index(&l).unwrap(), Index::Finite(BigInt::from(6)));
        let two2 = Lattice::scaled(2, &BigInt::from(2));
        let m = Lattice::from_i64(2, &[[2, 0], [1, 1]]);
        assert!(!two2.contains_lattice(&m).unwrap());
    }

    #[test]
    fn hnf_is_canonical() {
        let a = Lattice::from_i64(2, &[[2, 0], [1, 1]]);
        let b = Lattice::from_i64(2, &[[1, 1], [3, 1], [0, 2]]);
        assert_eq!(a, b);
        assert_eq!(a.basis(), &IntMatrix::from_i64(&[[1, 1], [0, 2]]));
    }

    #[test]
    fn reduce_and_box() {
        let l = Lattice::from_i64(2, &[[2, 1], [0, 3]]);
        let bx = l.fundamental_box().unwrap();
        assert_eq!(bx.len(), 6);
        let r = l.reduce(&bigs(&[5, -7])).unwrap();
        assert!(bx.contains(&r));
        let diff: Vec<BigInt> = r.iter().zip(bigs(&[5, -7])).map(|(a, b)| a - b).collect();
        assert!(l.contains(&diff));
    }

    #[test]
    fn index_infinite_and_rank_deficient() {
        let line = Lattice::from_i64(2, &[[1, 0]]);
        assert_eq!(Lattice::standard(2).index(&line).unwrap(), Index::Infinite);
        assert_eq!(
            line.index(&Lattice::from_i64(2, &[[4, 0], [0, 1]])).unwrap(),
            Index::Finite(BigInt::from(4))
        );
    }

    #[test]
    fn preimage_of_lattice() {
        let m = IntMatrix::from_i64(&[[2, 0], [0, 1]]);
        let target = Lattice::from_i64(2, &[[4, 0], [0, 3]]);
        assert_eq!(target.preimage(&m).unwrap(), Lattice::from_i64(2, &[[2, 0], [0, 3]]));
    }
}
