use super::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::fgab::{kernel_lattice, FgGroup, IntMatrix, Lattice, Quotient};
use num_bigint::BigInt;

/// Matrix of `d_n`: rows index `(n−1)`-simplices, columns index `n`-simplices,
/// omitting the `i`-th vertex contributes `(−1)^i`.
pub fn boundary_matrix(k: &SimplicialComplex, n: usize) -> IntMatrix {
    let cols = k.faces(n);
    if n == 0 {
        return IntMatrix::zeros(0, cols.len());
    }
    let rows = k.num_faces(n - 1);
    let mut m = IntMatrix::zeros(rows, cols.len());
    for (j, s) in cols.iter().enumerate() {
        for i in 0..s.len() {
            let mut f = s.clone();
            f.remove(i);
            let r = k.face_index(&f).expect("faces of faces are faces");
            m.set(r, j, if i % 2 == 0 { 1 } else { -1 });
        }
    }
    m
}

/// Integral chain complex `C_top → … → C_0` with `boundaries[n] = d_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplexZ {
    ranks: Vec<usize>,
    boundaries: Vec<IntMatrix>,
}

impl ChainComplexZ {
    pub fn new(boundaries: Vec<IntMatrix>) -> Result<Self> {
        let ranks: Vec<usize> = boundaries.iter().map(|d| d.cols()).collect();
        for n in 1..boundaries.len() {
            if boundaries[n].rows() != ranks[n - 1] {
                return Err(Error::Dimension(format!(
                    "d_{n} has {} rows but C_{} has rank {}",
                    boundaries[n].rows(),
                    n - 1,
                    ranks[n - 1]
                )));
            }
        }
        if boundaries.first().is_some_and(|d| d.rows() != 0) {
            return Err(Error::Dimension("d_0 must map to the zero module".into()));
        }
        Ok(ChainComplexZ { ranks, boundaries })
    }

    pub fn of_complex(k: &SimplicialComplex) -> Self {
        let top = k.dim().map_or(0, |d| d + 1);
        let boundaries = (0..top).map(|n| boundary_matrix(k, n)).collect();
        ChainComplexZ::new(boundaries).expect("simplicial boundaries chain")
    }

    /// Number of degrees with nonzero chain groups.
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn rank(&self, n: usize) -> usize {
        self.ranks.get(n).copied().unwrap_or(0)
    }

    /// `d_n`, with the zero map outside the stored range.
    pub fn boundary(&self, n: usize) -> IntMatrix {
        match self.boundaries.get(n) {
            Some(d) => d.clone(),
            None => IntMatrix::zeros(self.rank(n.wrapping_sub(1)), self.rank(n)),
        }
    }

    /// `d_n ∘ d_{n+1} = 0` in every degree.
    pub fn is_complex(&self) -> bool {
        (1..self.len()).all(|n| {
            self.boundary(n)
                .mul(&self.boundary(n + 1))
                .map(|m| m.is_zero())
                .unwrap_or(false)
        })
    }

    fn augmentation(&self) -> IntMatrix {
        IntMatrix::from_rows(vec![vec![BigInt::from(1); self.rank(0)]], self.rank(0)).expect("one row")
    }

    pub fn cycles(&self, n: usize, reduced: bool) -> Lattice {
        if n == 0 {
            if reduced {
                return kernel_lattice(&self.augmentation());
            }
            return Lattice::standard(self.rank(0));
        }
        kernel_lattice(&self.boundary(n))
    }

    pub fn boundaries(&self, n: usize) -> Lattice {
        Lattice::column_span(&self.boundary(n + 1))
    }

    /// `H_n` as a quotient of the `n`-cycles.
    pub fn homology(&self, n: usize, reduced: bool) -> Quotient {
        Quotient::new(&self.cycles(n, reduced), &self.boundaries(n)).expect("boundaries are cycles")
    }

    pub fn cocycles(&self, n: usize) -> Lattice {
        kernel_lattice(&self.boundary(n + 1).transpose())
    }

    pub fn coboundaries(&self, n: usize, reduced: bool) -> Lattice {
        if n == 0 {
            if reduced {
                return Lattice::column_span(&self.augmentation().transpose());
            }
            return Lattice::zero(self.rank(0));
        }
        Lattice::column_span(&self.boundary(n).transpose())
    }

    /// `H^n` as a quotient of the `n`-cocycles.
    pub fn cohomology(&self, n: usize, reduced: bool) -> Quotient {
        Quotient::new(&self.cocycles(n), &self.coboundaries(n, reduced)).expect("coboundaries are cocycles")
    }
}

pub fn homology(k: &SimplicialComplex, n: usize, reduced: bool) -> FgGroup {
    ChainComplexZ::of_complex(k).homology(n, reduced).group
}

pub fn cohomology(k: &SimplicialComplex, n: usize, reduced: bool) -> FgGroup {
    ChainComplexZ::of_complex(k).cohomology(n, reduced).group
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::bigs;

    #[test]
    fn edge_boundary() {
        let k = SimplicialComplex::simplex(1);
        assert_eq!(boundary_matrix(&k, 1).col(0), bigs(&[-1, 1]));
    }

    #[test]
    fn triangle_boundary_squares_to_zero() {
        let k = SimplicialComplex::simplex(2);
        let d1 = boundary_matrix(&k, 1);
        let d2 = boundary_matrix(&k, 2);
        assert!(d1.mul(&d2).unwrap().is_zero());
        assert!(ChainComplexZ::of_complex(&k).is_complex());
    }

    #[test]
    fn homology_examples() {
        let pt = SimplicialComplex::simplex(0);
        assert!(homology(&pt, 0, true).is_trivial());
        let s2 = SimplicialComplex::sphere(2);
        assert_eq!(homology(&s2, 0, false), FgGroup::free(1));
        assert!(homology(&s2, 1, false).is_trivial());
        assert_eq!(homology(&s2, 2, false), FgGroup::free(1));
        let rp2 = SimplicialComplex::projective_plane();
        assert_eq!(homology(&rp2, 1, false), FgGroup::cyclic(2));
        assert!(homology(&rp2, 2, false).is_trivial());
        let t = SimplicialComplex::torus();
        assert_eq!(homology(&t, 1, false), FgGroup::free(2));
    }

    #[test]
    fn cohomology_examples() {
        let c = SimplicialComplex::polygon(3);
        assert_eq!(cohomology(&c, 0, false), FgGroup::free(1));
        assert_eq!(cohomology(&c, 1, false), FgGroup::free(1));
        let two = SimplicialComplex::from_indices(4, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(cohomology(&two, 0, false), FgGroup::free(2));
        assert_eq!(cohomology(&two, 0, true), FgGroup::free(1));
        let rp2 = SimplicialComplex::projective_plane();
        assert_eq!(cohomology(&rp2, 2, false), FgGroup::cyclic(2));
        assert!(cohomology(&rp2, 1, false).is_trivial());
    }
}
