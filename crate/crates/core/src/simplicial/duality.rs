//! Level-wise comparison of the cohomology of complements with the homology of
//! neighbourhoods inside subdivisions of a triangulated sphere.

use super::chain::{cohomology, homology};
use super::complex::SimplicialComplex;
use super::subdivision::{iterated_subdivision, neighborhood_pair_idx};
use crate::error::{Error, Result};
use crate::fgab::FgGroup;
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeComparison {
    pub k: usize,
    /// Reduced `H^k` of the complement `T`.
    pub complement_cohomology: FgGroup,
    /// Reduced `H_{n−k}` of the neighbourhood `L`.
    pub neighborhood_homology: FgGroup,
    /// Reduced `H_{n−k}` of `X` itself.
    pub subcomplex_homology: FgGroup,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityLevel {
    pub depth: usize,
    pub vertices: usize,
    pub degrees: Vec<DegreeComparison>,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    /// `n` such that the ambient complex is an `(n+1)`-sphere.
    pub n: usize,
    pub levels: Vec<DualityLevel>,
    /// First depth at which every degree agrees.
    pub agreed_at: Option<usize>,
}

/// For each subdivision depth up to `max_depth`, compares `H̃^k(T)`,
/// `H̃_{n−k}(L)` and `H̃_{n−k}(X)` for `k = 0..=n`, where `X` is a subcomplex
/// of the sphere `sphere`, `L` the closed neighbourhood of the vertices of the
/// subdivided `X`, and `T` the simplices missing them.
pub fn duality_check(sphere: &SimplicialComplex, x: &SimplicialComplex, max_depth: usize) -> Result<DualityReport> {
    let dim = sphere
        .dim()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::Precondition("ambient complex must have dimension at least 1".into()))?;
    let n = dim - 1;
    let x_faces = sphere.embed(x)?;
    let in_x = |carrier: &[usize]| x_faces.iter().any(|f| carrier.iter().all(|v| f.contains(v)));
    let x_hom: Vec<FgGroup> = (0..=n).map(|j| homology(x, j, true)).collect();
    let mut levels = Vec::new();
    let mut agreed_at = None;
    for depth in 0..=max_depth {
        let sd = iterated_subdivision(sphere, depth);
        let xm: BTreeSet<usize> = (0..sd.complex.num_vertices())
            .filter(|&v| in_x(&sd.carriers[v]))
            .collect();
        let pair = neighborhood_pair_idx(&sd.complex, &xm)?;
        let degrees: Vec<DegreeComparison> = (0..=n)
            .map(|k| {
                let c = cohomology(&pair.t, k, true);
                let h = homology(&pair.l, n - k, true);
                let xs = x_hom[n - k].clone();
                DegreeComparison {
                    k,
                    agree: c == xs && h == xs,
                    complement_cohomology: c,
                    neighborhood_homology: h,
                    subcomplex_homology: xs,
                }
            })
            .collect();
        let agree = degrees.iter().all(|d| d.agree);
        levels.push(DualityLevel {
            depth,
            vertices: sd.complex.num_vertices(),
            degrees,
            agree,
        });
        if agree {
            agreed_at = Some(depth);
            break;
        }
    }
    Ok(DualityReport { n, levels, agreed_at })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::Label;

    #[test]
    fn octahedron_equator() {
        let k = SimplicialComplex::octahedron();
        let eq = SimplicialComplex::new(
            ["+x", "+y", "-x", "-y"].iter().map(|&s| Label::from(s)).collect(),
            vec![
                vec!["+x".into(), "+y".into()],
                vec!["+y".into(), "-x".into()],
                vec!["-x".into(), "-y".into()],
                vec!["-y".into(), "+x".into()],
            ],
        )
        .unwrap();
        let r = duality_check(&k, &eq, 2).unwrap();
        assert_eq!(r.agreed_at, Some(1));
        assert_eq!(r.levels[0].degrees[0].complement_cohomology, FgGroup::free(1));
    }

    #[test]
    fn two_points_on_tetrahedron() {
        let k = SimplicialComplex::sphere(2);
        let x = SimplicialComplex::from_indices(2, vec![vec![0], vec![1]]);
        let r = duality_check(&k, &x, 2).unwrap();
        assert_eq!(r.agreed_at, Some(2));
        assert_eq!(r.levels[2].degrees[1].complement_cohomology, FgGroup::free(1));
    }
}
