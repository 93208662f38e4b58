use super::kernel::{self, Track};
use super::lattice::Lattice;
use super::matrix::IntMatrix;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

/// `U·A·V = S` with `U`, `V` unimodular and `S` diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    /// Nonzero diagonal entries `d_1 | d_2 | ...`.
    #[serde(serialize_with = "ser_bigs")]
    pub invariants: Vec<BigInt>,
}

fn ser_bigs<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&super::matrix::json_vec(v), s)
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    /// All `min(rows, cols)` diagonal entries, zeros included.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s.get(i, i).clone())
            .collect()
    }
}

pub(crate) struct SmithFull {
    pub u: IntMatrix,
    #[cfg_attr(not(test), allow(dead_code))]
    pub uinv: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub vinv: IntMatrix,
    pub rank: usize,
}

fn mat(rows: Vec<Vec<BigInt>>, cols: usize) -> IntMatrix {
    IntMatrix::from_rows(rows, cols).expect("kernel output is rectangular")
}

pub(crate) fn smith_full(a: &IntMatrix, track: Track) -> SmithFull {
    let (m, n) = (a.rows(), a.cols());
    let out = kernel::snf(&a.to_rows(), m, n, track);
    let opt = |x: Option<Vec<Vec<BigInt>>>, k: usize| x.map(|r| mat(r, k)).unwrap_or_else(|| IntMatrix::zeros(0, 0));
    SmithFull {
        u: opt(out.u, m),
        uinv: opt(out.uinv, m),
        s: mat(out.s, n),
        v: opt(out.v, n),
        vinv: opt(out.vinv, n),
        rank: out.rank,
    }
}

/// Smith normal form with transformation matrices. Deterministic for fixed input.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let f = smith_full(
        a,
        Track {
            u: true,
            v: true,
            ..Track::NONE
        },
    );
    let invariants = (0..f.rank).map(|i| f.s.get(i, i).clone()).collect();
    SmithForm {
        u: f.u,
        s: f.s,
        v: f.v,
        invariants,
    }
}

/// Nonzero invariant factors only, without computing transforms.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    let f = smith_full(a, Track::NONE);
    (0..f.rank).map(|i| f.s.get(i, i).clone()).collect()
}

/// Integer solution of `A·x = b`, if one exists.
pub fn solve_linear(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.rows() {
        return Err(Error::Dimension(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    if b.iter().all(Zero::is_zero) {
        return Ok(Some(vec![BigInt::zero(); a.cols()]));
    }
    LinearSystem::new(a).solve(b)
}

/// A matrix factored once for repeated integer solves.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    u: IntMatrix,
    v: IntMatrix,
    diag: Vec<BigInt>,
    rows: usize,
    cols: usize,
}

impl LinearSystem {
    pub fn new(a: &IntMatrix) -> Self {
        let f = smith_full(
            a,
            Track {
                u: true,
                v: true,
                ..Track::NONE
            },
        );
        LinearSystem {
            diag: (0..f.rank).map(|i| f.s.get(i, i).clone()).collect(),
            u: f.u,
            v: f.v,
            rows: a.rows(),
            cols: a.cols(),
        }
    }

    pub fn solve(&self, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side has length {}, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        if self.rows == 0 || self.cols == 0 {
            let ok = b.iter().all(Zero::is_zero);
            return Ok(ok.then(|| vec![BigInt::zero(); self.cols]));
        }
        let c = self.u.mul_vec(b)?;
        let mut y = vec![BigInt::zero(); self.cols];
        for (i, ci) in c.iter().enumerate() {
            if let Some(d) = self.diag.get(i) {
                let (q, r) = ci.div_rem(d);
                if !r.is_zero() {
                    return Ok(None);
                }
                y[i] = q;
            } else if !ci.is_zero() {
                return Ok(None);
            }
        }
        Ok(Some(self.v.mul_vec(&y)?))
    }
}

/// The lattice `{x in Z^n : A·x = 0}`.
pub fn kernel_lattice(a: &IntMatrix) -> Lattice {
    let n = a.cols();
    if a.rows() == 0 {
        return Lattice::standard(n);
    }
    let f = smith_full(a, Track { v: true, ..Track::NONE });
    let gens = (f.rank..n).map(|j| f.v.col(j)).collect();
    Lattice::new(n, gens).expect("kernel vectors have the ambient length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::matrix::bigs;

    #[test]
    fn spec_examples() {
        assert!(smith_normal_form(&IntMatrix::from_i64(&[[0]])).invariants.is_empty());
        assert_eq!(smith_normal_form(&IntMatrix::identity(3)).invariants, bigs(&[1, 1, 1]));
        let f = smith_normal_form(&IntMatrix::from_i64(&[[2, 0], [0, 3]]));
        assert_eq!(f.invariants, bigs(&[1, 6]));
    }

    #[test]
    fn solve_examples() {
        let two = IntMatrix::from_i64(&[[2]]);
        assert_eq!(solve_linear(&two, &bigs(&[4])).unwrap(), Some(bigs(&[2])));
        assert_eq!(solve_linear(&two, &bigs(&[3])).unwrap(), None);
        let a = IntMatrix::from_i64(&[[1, 2], [3, 4]]);
        let x = solve_linear(&a, &bigs(&[1, 1])).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), bigs(&[1, 1]));
        assert!(solve_linear(&a, &bigs(&[1])).is_err());
    }

    #[test]
    fn inverses_are_tracked() {
        let a = IntMatrix::from_i64(&[[4, 6, 2], [2, 8, 10], [6, 0, 12], [1, 1, 1]]);
        let f = smith_full(&a, Track::ALL);
        assert_eq!(f.u.mul(&a).unwrap().mul(&f.v).unwrap(), f.s);
        assert_eq!(f.u.mul(&f.uinv).unwrap(), IntMatrix::identity(4));
        assert_eq!(f.v.mul(&f.vinv).unwrap(), IntMatrix::identity(3));
    }

    #[test]
    fn kernel_of_boundary() {
        let d = IntMatrix::from_i64(&[[-1, 0, -1], [1, -1, 0], [0, 1, 1]]);
        let k = kernel_lattice(&d);
        assert_eq!(k.rank(), 1);
        assert!(k.contains(&bigs(&[1, 1, -1])));
    }
}
