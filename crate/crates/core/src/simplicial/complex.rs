use crate::error::{Error, Result};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

/// A vertex label; integers in JSON are accepted and written back as integers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub String);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label(s.to_string())
    }
}

impl From<usize> for Label {
    fn from(i: usize) -> Self {
        Label(i.to_string())
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.parse::<i64>() {
            Ok(n) if n.to_string() == self.0 => s.serialize_i64(n),
            _ => s.serialize_str(&self.0),
        }
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Label;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a vertex label (string or integer)")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Label, E> {
                Ok(Label(v.to_string()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Label, E> {
                Ok(Label(v.to_string()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Label, E> {
                Ok(Label(v.to_string()))
            }
        }
        d.deserialize_any(V)
    }
}

/// A simplex as a sorted list of vertex indices.
pub type Simplex = Vec<usize>;

#[derive(Debug, Default)]
struct FaceTable {
    faces: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

/// Finite simplicial complex given by its maximal faces.
#[derive(Debug)]
pub struct SimplicialComplex {
    vertices: Vec<Label>,
    facets: Vec<Simplex>,
    table: OnceLock<FaceTable>,
}

impl Clone for SimplicialComplex {
    fn clone(&self) -> Self {
        SimplicialComplex {
            vertices: self.vertices.clone(),
            facets: self.facets.clone(),
            table: OnceLock::new(),
        }
    }
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.facets == other.facets
    }
}

impl Eq for SimplicialComplex {}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

fn maximal(mut sets: Vec<Simplex>) -> Vec<Simplex> {
    for s in sets.iter_mut() {
        s.sort_unstable();
        s.dedup();
    }
    sets.retain(|s| !s.is_empty());
    sets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    sets.dedup();
    let mut out: Vec<Simplex> = Vec::new();
    for s in sets {
        if !out.iter().any(|f| is_subset(&s, f)) {
            out.push(s);
        }
    }
    out.sort();
    out
}

impl SimplicialComplex {
    /// Builds a complex from labelled facets; non-maximal and duplicate facets are dropped.
    pub fn new(vertices: Vec<Label>, facets: Vec<Vec<Label>>) -> Result<Self> {
        let pos: HashMap<&Label, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
        if pos.len() != vertices.len() {
            return Err(Error::Precondition("duplicate vertex labels".into()));
        }
        let idx = facets
            .iter()
            .map(|f| {
                f.iter()
                    .map(|v| {
                        pos.get(v)
                            .copied()
                            .ok_or_else(|| Error::NotSubset(format!("facet vertex {v} is not in the vertex list")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_parts(vertices, idx))
    }

    pub(crate) fn from_parts(vertices: Vec<Label>, facets: Vec<Simplex>) -> Self {
        let mut facets = facets;
        let n = vertices.len();
        let mut covered = vec![false; n];
        for f in &facets {
            for &v in f {
                covered[v] = true;
            }
        }
        facets.extend((0..n).filter(|&v| !covered[v]).map(|v| vec![v]));
        SimplicialComplex {
            vertices,
            facets: maximal(facets),
            table: OnceLock::new(),
        }
    }

    /// Complex on vertices `0..n` labelled by their index.
    pub fn from_indices(n: usize, facets: Vec<Vec<usize>>) -> Self {
        Self::from_parts((0..n).map(Label::from).collect(), facets)
    }

    pub fn empty() -> Self {
        Self::from_parts(vec![], vec![])
    }

    /// The full simplex on `n + 1` vertices.
    pub fn simplex(n: usize) -> Self {
        Self::from_indices(n + 1, vec![(0..=n).collect()])
    }

    /// Boundary of the `(d+1)`-simplex, a triangulated `d`-sphere.
    pub fn sphere(d: usize) -> Self {
        let n = d + 2;
        let facets = (0..n).map(|skip| (0..n).filter(|&v| v != skip).collect()).collect();
        Self::from_indices(n, facets)
    }

    /// Cycle with `n ≥ 3` vertices `0..n`.
    pub fn polygon(n: usize) -> Self {
        assert!(n >= 3, "a polygon needs at least three vertices");
        Self::from_indices(n, (0..n).map(|k| vec![k, (k + 1) % n]).collect())
    }

    /// Six-vertex projective plane.
    pub fn projective_plane() -> Self {
        let f: [[usize; 3]; 10] = [
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 5, 1],
            [1, 2, 4],
            [2, 3, 5],
            [3, 4, 1],
            [4, 5, 2],
            [5, 1, 3],
        ];
        Self::from_indices(6, f.iter().map(|t| t.to_vec()).collect())
    }

    /// Octahedron boundary on `+x, -x, +y, -y, +z, -z` (indices 0..6).
    pub fn octahedron() -> Self {
        let labels = ["+x", "-x", "+y", "-y", "+z", "-z"];
        let mut facets = Vec::new();
        for x in [0, 1] {
            for y in [2, 3] {
                for z in [4, 5] {
                    facets.push(vec![x, y, z]);
                }
            }
        }
        Self::from_parts(labels.iter().map(|&s| Label::from(s)).collect(), facets)
    }

    /// Seven-vertex torus.
    pub fn torus() -> Self {
        let mut facets = Vec::new();
        for i in 0..7 {
            facets.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
            facets.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
        }
        Self::from_indices(7, facets)
    }

    pub fn vertices(&self) -> &[Label] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn vertex_index(&self, l: &Label) -> Option<usize> {
        self.vertices.iter().position(|v| v == l)
    }

    /// Dimension, or `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.facets.iter().map(|f| f.len() - 1).max()
    }

    fn table(&self) -> &FaceTable {
        self.table.get_or_init(|| {
            let top = self.dim().map_or(0, |d| d + 1);
            let mut sets: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new(); top];
            for f in &self.facets {
                let k = f.len();
                for mask in 1u64..(1u64 << k) {
                    let s: Simplex = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                    sets[s.len() - 1].insert(s);
                }
            }
            let faces: Vec<Vec<Simplex>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
            let index = faces
                .iter()
                .map(|fs| fs.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
                .collect();
            FaceTable { faces, index }
        })
    }

    /// All `n`-simplices in lexicographic order.
    pub fn faces(&self, n: usize) -> &[Simplex] {
        self.table().faces.get(n).map_or(&[], |v| v.as_slice())
    }

    pub fn num_faces(&self, n: usize) -> usize {
        self.faces(n).len()
    }

    pub fn face_index(&self, s: &[usize]) -> Option<usize> {
        if s.is_empty() {
            return None;
        }
        self.table().index.get(s.len() - 1)?.get(s).copied()
    }

    pub fn contains_face(&self, s: &[usize]) -> bool {
        let mut t = s.to_vec();
        t.sort_unstable();
        t.dedup();
        t.is_empty() || self.facets.iter().any(|f| is_subset(&t, f))
    }

    pub fn face_labels(&self, s: &[usize]) -> Vec<String> {
        s.iter().map(|&v| self.vertices[v].0.clone()).collect()
    }

    /// Euler characteristic.
    pub fn euler_characteristic(&self) -> i64 {
        let top = self.dim().map_or(0, |d| d + 1);
        (0..top)
            .map(|n| {
                let c = self.num_faces(n) as i64;
                if n % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .sum()
    }

    /// Subcomplex generated by the given simplices (vertex indices of `self`),
    /// keeping only vertices that occur.
    pub fn generated(&self, simplices: &[Simplex]) -> SimplicialComplex {
        let used: BTreeSet<usize> = simplices.iter().flatten().copied().collect();
        let renum: HashMap<usize, usize> = used.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let labels = used.iter().map(|&v| self.vertices[v].clone()).collect();
        let facets = simplices.iter().map(|s| s.iter().map(|v| renum[v]).collect()).collect();
        SimplicialComplex::from_parts(labels, facets)
    }

    /// Whether every facet of `sub` (matched by label) is a face of `self`.
    pub fn is_subcomplex(&self, sub: &SimplicialComplex) -> bool {
        sub.facets.iter().all(|f| {
            let mapped: Option<Vec<usize>> = f.iter().map(|&v| self.vertex_index(&sub.vertices[v])).collect();
            mapped.is_some_and(|m| self.contains_face(&m))
        })
    }

    /// Faces of `sub` translated to vertex indices of `self`.
    pub fn embed(&self, sub: &SimplicialComplex) -> Result<Vec<Simplex>> {
        sub.facets
            .iter()
            .map(|f| {
                let mut m = f
                    .iter()
                    .map(|&v| {
                        self.vertex_index(&sub.vertices[v]).ok_or_else(|| {
                            Error::NotSubset(format!("vertex {} is not in the complex", sub.vertices[v]))
                        })
                    })
                    .collect::<Result<Vec<usize>>>()?;
                m.sort_unstable();
                if !self.contains_face(&m) {
                    return Err(Error::NotSubset(format!(
                        "{:?} is not a face of the complex",
                        sub.face_labels(f)
                    )));
                }
                Ok(m)
            })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexRepr {
    vertices: Vec<Label>,
    facets: Vec<Vec<Label>>,
}

impl Serialize for SimplicialComplex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexRepr {
            vertices: self.vertices.clone(),
            facets: self
                .facets
                .iter()
                .map(|f| f.iter().map(|&v| self.vertices[v].clone()).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimplicialComplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ComplexRepr::deserialize(d)?;
        SimplicialComplex::new(r.vertices, r.facets).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faces_of_triangle() {
        let k = SimplicialComplex::simplex(2);
        assert_eq!(k.num_faces(0), 3);
        assert_eq!(k.num_faces(1), 3);
        assert_eq!(k.num_faces(2), 1);
        assert_eq!(k.euler_characteristic(), 1);
    }

    #[test]
    fn facets_are_maximal() {
        let k = SimplicialComplex::from_indices(3, vec![vec![0, 1], vec![1, 0], vec![0], vec![0, 1, 2]]);
        assert_eq!(k.facets(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn standard_complexes() {
        assert_eq!(SimplicialComplex::sphere(2).euler_characteristic(), 2);
        assert_eq!(SimplicialComplex::projective_plane().euler_characteristic(), 1);
        assert_eq!(SimplicialComplex::torus().euler_characteristic(), 0);
        assert_eq!(SimplicialComplex::octahedron().euler_characteristic(), 2);
    }

    #[test]
    fn json_roundtrip() {
        let k: SimplicialComplex = serde_json::from_str(r#"{"vertices":[0,1,"c"],"facets":[[0,1],[1,"c"]]}"#).unwrap();
        assert_eq!(k.num_faces(1), 2);
        let s = serde_json::to_string(&k).unwrap();
        assert_eq!(s, r#"{"vertices":[0,1,"c"],"facets":[[0,1],[1,"c"]]}"#);
        assert!(serde_json::from_str::<SimplicialComplex>(r#"{"vertices":[0],"facets":[[0,1]]}"#).is_err());
    }
}
