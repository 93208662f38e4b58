use super::complex::{Label, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};

/// A subdivided complex with, for each new vertex, the face of the original
/// complex whose interior contains it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subdivision {
    pub complex: SimplicialComplex,
    pub carriers: Vec<Simplex>,
}

fn permutations(v: &[usize]) -> Vec<Vec<usize>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// First barycentric subdivision: vertices are the faces of `k`, facets are
/// maximal flags of faces.
pub fn barycentric_subdivision(k: &SimplicialComplex) -> Subdivision {
    let top = k.dim().map_or(0, |d| d + 1);
    let mut carriers: Vec<Simplex> = Vec::new();
    let mut index: HashMap<Simplex, usize> = HashMap::new();
    for n in 0..top {
        for f in k.faces(n) {
            index.insert(f.clone(), carriers.len());
            carriers.push(f.clone());
        }
    }
    let labels = carriers
        .iter()
        .map(|f| {
            let names: Vec<&str> = f.iter().map(|&v| k.vertices()[v].0.as_str()).collect();
            Label(if names.len() == 1 {
                names[0].to_string()
            } else {
                format!("({})", names.join(" "))
            })
        })
        .collect();
    let mut facets = Vec::new();
    for f in k.facets() {
        for p in permutations(f) {
            let flag = (1..=p.len())
                .map(|l| {
                    let mut s = p[..l].to_vec();
                    s.sort_unstable();
                    index[&s]
                })
                .collect();
            facets.push(flag);
        }
    }
    Subdivision {
        complex: SimplicialComplex::from_parts(labels, facets),
        carriers,
    }
}

/// `m`-fold subdivision with carriers taken in the original complex.
pub fn iterated_subdivision(k: &SimplicialComplex, m: usize) -> Subdivision {
    let mut cur = Subdivision {
        complex: k.clone(),
        carriers: (0..k.num_vertices()).map(|v| vec![v]).collect(),
    };
    for _ in 0..m {
        let next = barycentric_subdivision(&cur.complex);
        let carriers = next
            .carriers
            .iter()
            .map(|face| {
                let s: BTreeSet<usize> = face.iter().flat_map(|&u| cur.carriers[u].iter().copied()).collect();
                s.into_iter().collect()
            })
            .collect();
        cur = Subdivision {
            complex: next.complex,
            carriers,
        };
    }
    cur
}

/// Closed neighbourhood `L` and complement `T` of a vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NeighborhoodPair {
    /// All faces of simplices meeting `X`.
    pub l: SimplicialComplex,
    /// All simplices disjoint from `X`.
    pub t: SimplicialComplex,
}

pub fn neighborhood_pair(k: &SimplicialComplex, x: &[Label]) -> Result<NeighborhoodPair> {
    let idx = x
        .iter()
        .map(|l| {
            k.vertex_index(l)
                .ok_or_else(|| Error::NotSubset(format!("vertex {l} is not in the complex")))
        })
        .collect::<Result<BTreeSet<usize>>>()?;
    neighborhood_pair_idx(k, &idx)
}

pub(crate) fn neighborhood_pair_idx(k: &SimplicialComplex, x: &BTreeSet<usize>) -> Result<NeighborhoodPair> {
    if x.is_empty() {
        return Err(Error::Precondition("the vertex set must be nonempty".into()));
    }
    let meets: Vec<Simplex> = k
        .facets()
        .iter()
        .filter(|f| f.iter().any(|v| x.contains(v)))
        .cloned()
        .collect();
    let away: Vec<Simplex> = k
        .facets()
        .iter()
        .map(|f| f.iter().copied().filter(|v| !x.contains(v)).collect::<Simplex>())
        .filter(|f| !f.is_empty())
        .collect();
    Ok(NeighborhoodPair {
        l: k.generated(&meets),
        t: k.generated(&away),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::FgGroup;
    use crate::simplicial::homology;

    #[test]
    fn edge_and_triangle_counts() {
        let e = barycentric_subdivision(&SimplicialComplex::simplex(1));
        assert_eq!(e.complex.num_vertices(), 3);
        assert_eq!(e.complex.num_faces(1), 2);
        let t = barycentric_subdivision(&SimplicialComplex::simplex(2));
        assert_eq!(t.complex.num_faces(2), 6);
        assert_eq!(t.carriers.len(), 7);
    }

    #[test]
    fn subdivision_preserves_homology() {
        let k = SimplicialComplex::sphere(2);
        for m in 1..=2 {
            let s = iterated_subdivision(&k, m);
            for d in 0..3 {
                assert_eq!(homology(&s.complex, d, false), homology(&k, d, false));
            }
        }
    }

    #[test]
    fn antipodal_vertices_separate_after_two_rounds() {
        let k = SimplicialComplex::sphere(2);
        let x = [Label::from("0"), Label::from("1")];
        let one = barycentric_subdivision(&k).complex;
        let p1 = neighborhood_pair(&one, &x).unwrap();
        assert!(homology(&p1.l, 0, true).is_trivial());
        let two = iterated_subdivision(&k, 2).complex;
        let p2 = neighborhood_pair(&two, &x).unwrap();
        assert_eq!(homology(&p2.l, 0, true), FgGroup::free(1));
    }

    #[test]
    fn all_vertices_and_octahedron_equator() {
        let k = SimplicialComplex::octahedron();
        let all: Vec<Label> = k.vertices().to_vec();
        let p = neighborhood_pair(&k, &all).unwrap();
        assert_eq!(p.l, k);
        assert_eq!(p.t.num_vertices(), 0);
        let sd = barycentric_subdivision(&k).complex;
        let eq: Vec<Label> = ["+x", "-x", "+y", "-y"].iter().map(|&s| Label::from(s)).collect();
        let p = neighborhood_pair(&sd, &eq).unwrap();
        assert_eq!(homology(&p.l, 1, false), FgGroup::free(1));
        assert!(neighborhood_pair(&k, &[Label::from("w")]).is_err());
    }
}
