use super::chain::ChainComplexZ;
use super::complex::{Label, SimplicialComplex};
use crate::error::{Error, Result};
use crate::fgab::{Homomorphism, IntMatrix};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Homology,
    Cohomology,
}

/// Vertex map between complexes sending faces to faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    source: SimplicialComplex,
    target: SimplicialComplex,
    vertex_map: Vec<usize>,
}

impl SimplicialMap {
    /// `vertex_map[v]` is the target index of source vertex `v`.
    pub fn new(source: SimplicialComplex, target: SimplicialComplex, vertex_map: Vec<usize>) -> Result<Self> {
        if vertex_map.len() != source.num_vertices() {
            return Err(Error::Dimension(format!(
                "vertex map has {} entries for {} vertices",
                vertex_map.len(),
                source.num_vertices()
            )));
        }
        if let Some(&v) = vertex_map.iter().find(|&&v| v >= target.num_vertices()) {
            return Err(Error::Dimension(format!("target vertex index {v} out of range")));
        }
        for f in source.facets() {
            let img: Vec<usize> = f.iter().map(|&v| vertex_map[v]).collect();
            if !target.contains_face(&img) {
                return Err(Error::InvalidSimplicialMap {
                    face: source.face_labels(f),
                });
            }
        }
        Ok(SimplicialMap {
            source,
            target,
            vertex_map,
        })
    }

    pub fn from_labels(
        source: SimplicialComplex,
        target: SimplicialComplex,
        map: &BTreeMap<Label, Label>,
    ) -> Result<Self> {
        let vm = source
            .vertices()
            .iter()
            .map(|v| {
                let img = map
                    .get(v)
                    .ok_or_else(|| Error::Precondition(format!("vertex {v} has no image")))?;
                target
                    .vertex_index(img)
                    .ok_or_else(|| Error::NotSubset(format!("image {img} is not a target vertex")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, vm)
    }

    pub fn identity(k: &SimplicialComplex) -> Self {
        SimplicialMap {
            source: k.clone(),
            target: k.clone(),
            vertex_map: (0..k.num_vertices()).collect(),
        }
    }

    pub fn source(&self) -> &SimplicialComplex {
        &self.source
    }

    pub fn target(&self) -> &SimplicialComplex {
        &self.target
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SimplicialMap) -> Result<SimplicialMap> {
        if other.target != self.source {
            return Err(Error::Dimension("maps do not compose".into()));
        }
        let vm = other.vertex_map.iter().map(|&v| self.vertex_map[v]).collect();
        SimplicialMap::new(other.source.clone(), self.target.clone(), vm)
    }

    /// Chain map in degree `n`; degenerate images are zero, orientation from the sort sign.
    pub fn chain_map(&self, n: usize) -> IntMatrix {
        let src = self.source.faces(n);
        let mut m = IntMatrix::zeros(self.target.num_faces(n), src.len());
        for (j, s) in src.iter().enumerate() {
            let img: Vec<usize> = s.iter().map(|&v| self.vertex_map[v]).collect();
            if let Some((sorted, sign)) = sort_with_sign(img) {
                let i = self.target.face_index(&sorted).expect("image is a face");
                m.set(i, j, sign);
            }
        }
        m
    }
}

/// Sorts a vertex tuple, returning the permutation sign; `None` when a vertex repeats.
pub(crate) fn sort_with_sign(mut v: Vec<usize>) -> Option<(Vec<usize>, i64)> {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// `H_n(f)` or `H^n(f)` on the canonical generators of the (co)homology groups.
pub fn induced_map(f: &SimplicialMap, n: usize, variance: Variance) -> Result<Homomorphism> {
    induced_map_with(f, n, variance, false)
}

/// As [`induced_map`], optionally on reduced (co)homology.
pub fn induced_map_with(f: &SimplicialMap, n: usize, variance: Variance, reduced: bool) -> Result<Homomorphism> {
    let cs = ChainComplexZ::of_complex(&f.source);
    let ct = ChainComplexZ::of_complex(&f.target);
    let c = f.chain_map(n);
    match variance {
        Variance::Homology => cs.homology(n, reduced).induced(&ct.homology(n, reduced), &c),
        Variance::Cohomology => ct
            .cohomology(n, reduced)
            .induced(&cs.cohomology(n, reduced), &c.transpose()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::FgGroup;

    fn fold(m: usize) -> SimplicialMap {
        let big = SimplicialComplex::polygon(2 * m);
        let small = SimplicialComplex::polygon(m);
        SimplicialMap::new(big, small, (0..2 * m).map(|k| k % m).collect()).unwrap()
    }

    #[test]
    fn identity_induces_identity() {
        let k = SimplicialComplex::torus();
        let h = induced_map(&SimplicialMap::identity(&k), 1, Variance::Homology).unwrap();
        assert_eq!(h, Homomorphism::identity(&FgGroup::free(2)));
    }

    #[test]
    fn polygon_double_cover_is_times_two() {
        for m in [4, 8] {
            let h = induced_map(&fold(m), 1, Variance::Homology).unwrap();
            assert_eq!(h.matrix().get(0, 0).magnitude(), &2u32.into());
            let c = induced_map(&fold(m), 1, Variance::Cohomology).unwrap();
            assert_eq!(c.matrix().get(0, 0).magnitude(), &2u32.into());
        }
    }

    #[test]
    fn constant_map_is_zero_on_h1() {
        let k = SimplicialComplex::polygon(5);
        let pt = SimplicialComplex::simplex(0);
        let f = SimplicialMap::new(k, pt, vec![0; 5]).unwrap();
        assert!(induced_map(&f, 1, Variance::Homology).unwrap().is_zero());
    }

    #[test]
    fn invalid_map_names_a_face() {
        let k = SimplicialComplex::simplex(2);
        let c = SimplicialComplex::polygon(3);
        match SimplicialMap::new(k, c, vec![0, 1, 2]) {
            Err(Error::InvalidSimplicialMap { face }) => assert_eq!(face, vec!["0", "1", "2"]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn functoriality() {
        let f = fold(8);
        let g = fold(4);
        let gf = g.compose(&f).unwrap();
        let lhs = induced_map(&gf, 1, Variance::Homology).unwrap();
        let rhs = induced_map(&g, 1, Variance::Homology)
            .unwrap()
            .compose(&induced_map(&f, 1, Variance::Homology).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }
}
