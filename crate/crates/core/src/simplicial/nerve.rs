use super::complex::{Label, SimplicialComplex};
use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};

/// Nerve of a finite cover: vertices are member indices, faces are index sets
/// whose members share a point.
pub fn nerve<T: Ord + Clone>(cover: &[Vec<T>]) -> Result<SimplicialComplex> {
    if let Some(i) = cover.iter().position(|u| u.is_empty()) {
        return Err(Error::EmptyCoverMember(i));
    }
    let mut carriers: BTreeMap<&T, BTreeSet<usize>> = BTreeMap::new();
    for (i, u) in cover.iter().enumerate() {
        for x in u {
            carriers.entry(x).or_default().insert(i);
        }
    }
    let facets = carriers.into_values().map(|s| s.into_iter().collect()).collect();
    Ok(SimplicialComplex::from_parts(
        (0..cover.len()).map(Label::from).collect(),
        facets,
    ))
}

/// Cover of the vertex set of `k` by closed vertex stars, expressed as sets of facet indices.
pub fn star_cover(k: &SimplicialComplex) -> Vec<Vec<usize>> {
    (0..k.num_vertices())
        .map(|v| {
            k.facets()
                .iter()
                .enumerate()
                .filter(|(_, f)| f.contains(&v))
                .map(|(i, _)| i)
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::FgGroup;
    use crate::simplicial::homology;

    #[test]
    fn hollow_triangle() {
        let n = nerve(&[vec![1, 2], vec![2, 3], vec![1, 3]]).unwrap();
        assert_eq!(homology(&n, 1, false), FgGroup::free(1));
        assert_eq!(n.dim(), Some(1));
    }

    #[test]
    fn solid_triangle() {
        let n = nerve(&[vec![1, 2, 0], vec![2, 3, 0], vec![1, 3, 0]]).unwrap();
        assert_eq!(n.dim(), Some(2));
        assert!(homology(&n, 1, false).is_trivial());
    }

    #[test]
    fn disjoint_and_empty() {
        let n = nerve(&[vec!['a'], vec!['b'], vec!['c']]).unwrap();
        assert_eq!(n.dim(), Some(0));
        assert_eq!(n.num_vertices(), 3);
        assert_eq!(nerve::<u8>(&[vec![1], vec![]]), Err(Error::EmptyCoverMember(1)));
    }

    #[test]
    fn star_nerve_has_homology_of_complex() {
        for k in [
            SimplicialComplex::polygon(5),
            SimplicialComplex::sphere(2),
            SimplicialComplex::torus(),
        ] {
            let n = nerve(&star_cover(&k)).unwrap();
            for d in 0..3 {
                assert_eq!(homology(&n, d, false), homology(&k, d, false));
            }
        }
    }
}
