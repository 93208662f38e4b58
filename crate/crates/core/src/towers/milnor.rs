use super::limits::{lim1_of_with, lim_of_with, Certificate, Lim1Descriptor, LimDescriptor, LimitOptions};
use super::tower::{Tail, Tower};
use crate::error::{Error, Result};
use crate::fgab::{FgGroup, Homomorphism, IntMatrix, LinearSystem};
use crate::simplicial::{induced_map_with, ChainComplexZ, Label, SimplicialComplex, SimplicialMap, Variance};
use crate::steinitz::H0Structure;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexTail {
    None,
    /// Beyond the given levels the last connective map repeats up to isomorphism.
    RepeatLast,
}

/// Chain complexes `C^0 ← C^1 ← ...` with connective chain maps.
#[derive(Clone, Debug)]
pub struct ComplexTower {
    levels: Vec<ChainComplexZ>,
    /// `maps[k][n]: C^{k+1}_n → C^k_n`.
    maps: Vec<Vec<IntMatrix>>,
    tail: ComplexTail,
}

fn top_degree(c: &ChainComplexZ) -> usize {
    c.len()
}

impl ComplexTower {
    pub fn new(levels: Vec<ChainComplexZ>, maps: Vec<Vec<IntMatrix>>, tail: ComplexTail) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Precondition("a complex tower needs a level".into()));
        }
        if maps.len() + 1 != levels.len() {
            return Err(Error::Dimension(format!(
                "{} levels need {} connective maps, got {}",
                levels.len(),
                levels.len() - 1,
                maps.len()
            )));
        }
        for (k, m) in maps.iter().enumerate() {
            let (lo, hi) = (&levels[k], &levels[k + 1]);
            let top = top_degree(lo).max(top_degree(hi));
            for n in 0..top {
                let pi = m
                    .get(n)
                    .cloned()
                    .unwrap_or_else(|| IntMatrix::zeros(lo.rank(n), hi.rank(n)));
                if pi.rows() != lo.rank(n) || pi.cols() != hi.rank(n) {
                    return Err(Error::Dimension(format!(
                        "connective map {k} has the wrong shape in degree {n}"
                    )));
                }
                if n > 0 {
                    let below = m
                        .get(n - 1)
                        .cloned()
                        .unwrap_or_else(|| IntMatrix::zeros(lo.rank(n - 1), hi.rank(n - 1)));
                    if lo.boundary(n).mul(&pi)? != below.mul(&hi.boundary(n))? {
                        return Err(Error::Diagram {
                            position: format!("level {k}, degree {n}"),
                            detail: "connective map does not commute with the boundary".into(),
                        });
                    }
                }
            }
        }
        Ok(ComplexTower { levels, maps, tail })
    }

    /// `maps[k]: X_{k+1} → X_k`.
    pub fn from_simplicial(maps: &[SimplicialMap], tail: ComplexTail) -> Result<Self> {
        let Some(first) = maps.first() else {
            return Err(Error::Precondition("at least one simplicial map is needed".into()));
        };
        let mut levels = vec![ChainComplexZ::of_complex(first.target())];
        let mut chain_maps = Vec::with_capacity(maps.len());
        for (k, f) in maps.iter().enumerate() {
            if k > 0 && maps[k - 1].source() != f.target() {
                return Err(Error::Dimension(format!("map {k} does not land in level {k}")));
            }
            levels.push(ChainComplexZ::of_complex(f.source()));
            let top = f
                .source()
                .dim()
                .map_or(0, |d| d + 1)
                .max(f.target().dim().map_or(0, |d| d + 1));
            chain_maps.push((0..top).map(|n| f.chain_map(n)).collect());
        }
        ComplexTower::new(levels, chain_maps, tail)
    }

    /// A single complex with identity maps.
    pub fn constant(k: &SimplicialComplex) -> Self {
        ComplexTower::from_simplicial(&[SimplicialMap::identity(k)], ComplexTail::RepeatLast).expect("identity map")
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, k: usize) -> &ChainComplexZ {
        &self.levels[k]
    }

    pub fn tail(&self) -> ComplexTail {
        self.tail
    }

    /// `π_{k+1}: C^{k+1}_n → C^k_n`.
    pub fn map(&self, k: usize, n: usize) -> IntMatrix {
        self.maps[k]
            .get(n)
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(self.levels[k].rank(n), self.levels[k + 1].rank(n)))
    }

    /// `π_{k,m} = π_{k+1} ∘ ... ∘ π_m` in degree `n`.
    pub fn composite(&self, k: usize, m: usize, n: usize) -> Result<IntMatrix> {
        let mut out = IntMatrix::identity(self.levels[m].rank(n));
        for j in (k..m).rev() {
            out = self.map(j, n).mul(&out)?;
        }
        Ok(out)
    }

    /// The tower `H_n(C^k)` with induced maps.
    pub fn homology_tower(&self, n: usize, reduced: bool) -> Result<Tower> {
        let hs: Vec<_> = self.levels.iter().map(|c| c.homology(n, reduced)).collect();
        let induced = (0..self.maps.len())
            .map(|k| hs[k + 1].induced(&hs[k], &self.map(k, n)))
            .collect::<Result<Vec<Homomorphism>>>()?;
        let groups: Vec<FgGroup> = hs.iter().map(|q| q.group.clone()).collect();
        let last = groups.len() - 1;
        if self.tail == ComplexTail::RepeatLast && last > 0 && groups[last] == groups[last - 1] {
            let maps = induced[..last - 1].iter().map(|h| h.matrix().clone()).collect();
            return Tower::new(
                groups[..last].to_vec(),
                maps,
                Tail::Periodic(vec![induced[last - 1].matrix().clone()]),
            );
        }
        let maps = induced.iter().map(|h| h.matrix().clone()).collect();
        Tower::new(groups, maps, Tail::None)
    }
}

/// `2^m`-gons for `m = 2, 3, ...` with `v ↦ v mod 2^m`.
pub fn polygon_tower(depth: usize) -> Result<ComplexTower> {
    if depth < 2 {
        return Err(Error::Precondition(
            "the polygon tower needs at least two levels".into(),
        ));
    }
    let maps: Vec<SimplicialMap> = (0..depth - 1)
        .map(|k| {
            let m = 1usize << (k + 2);
            SimplicialMap::new(
                SimplicialComplex::polygon(2 * m),
                SimplicialComplex::polygon(m),
                (0..2 * m).map(|v| v % m).collect(),
            )
        })
        .collect::<Result<_>>()?;
    ComplexTower::from_simplicial(&maps, ComplexTail::RepeatLast)
}

/// Weak part `lim` and asymptotic part `lim¹` of a Milnor sequence
/// `0 → lim¹ → H → lim → 0`; the middle group is their (non-canonically split) extension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MilnorDescriptor {
    pub degree: usize,
    pub weak: LimDescriptor,
    pub asymptotic: Lim1Descriptor,
    /// For reduced degree zero with a rank one asymptotic part.
    pub h0: Option<H0Structure>,
}

impl MilnorDescriptor {
    fn new(degree: usize, weak: LimDescriptor, asymptotic: Lim1Descriptor, with_h0: bool) -> Self {
        let h0 = match &asymptotic {
            Lim1Descriptor::ProChain(p) if with_h0 && p.rank == 1 => Some(H0Structure::of(&p.supernatural)),
            _ => None,
        };
        MilnorDescriptor {
            degree,
            weak,
            asymptotic,
            h0,
        }
    }
}

/// `H_n^w = lim H_n(C^k)` and `H_n^∞ = lim¹ H_{n+1}(C^k)`.
pub fn milnor_homology(ct: &ComplexTower, n: usize, reduced: bool, opts: &LimitOptions) -> Result<MilnorDescriptor> {
    let weak = lim_of_with(&ct.homology_tower(n, reduced)?, opts)?;
    let asymptotic = lim1_of_with(&ct.homology_tower(n + 1, reduced)?, opts)?;
    Ok(MilnorDescriptor::new(n, weak, asymptotic, n == 0 && reduced))
}

/// `H^n_w = lim H^n(X_m)` and `H^n_∞ = lim¹ H^{n−1}(X_m)` from the two towers directly.
pub fn milnor_from_towers(
    n: usize,
    hn: &Tower,
    hn_minus: Option<&Tower>,
    opts: &LimitOptions,
) -> Result<MilnorDescriptor> {
    let weak = lim_of_with(hn, opts)?;
    let asymptotic = match hn_minus {
        Some(t) => lim1_of_with(t, opts)?,
        None => Lim1Descriptor::Zero {
            certificate: Certificate::EventuallySurjective,
        },
    };
    Ok(MilnorDescriptor::new(n, weak, asymptotic, false))
}

fn inclusion(small: &SimplicialComplex, big: &SimplicialComplex) -> Result<SimplicialMap> {
    let map: BTreeMap<Label, Label> = small.vertices().iter().map(|v| (v.clone(), v.clone())).collect();
    SimplicialMap::from_labels(small.clone(), big.clone(), &map)
}

fn cohomology_tower(nested: &[SimplicialComplex], incl: &[SimplicialMap], n: usize) -> Result<Tower> {
    let groups: Vec<FgGroup> = nested
        .iter()
        .map(|k| ChainComplexZ::of_complex(k).cohomology(n, false).group)
        .collect();
    let maps = incl
        .iter()
        .map(|f| Ok(induced_map_with(f, n, Variance::Cohomology, false)?.matrix().clone()))
        .collect::<Result<Vec<_>>>()?;
    Tower::new(groups, maps, Tail::EventuallyIdentity)
}

/// Restriction towers of an exhaustion `X_0 ⊆ X_1 ⊆ ...`, the last complex repeating.
pub fn milnor_cohomology(nested: &[SimplicialComplex], n: usize, opts: &LimitOptions) -> Result<MilnorDescriptor> {
    if nested.is_empty() {
        return Err(Error::Precondition("the exhaustion needs at least one complex".into()));
    }
    let mut incl = Vec::with_capacity(nested.len() - 1);
    for (k, w) in nested.windows(2).enumerate() {
        if !w[1].is_subcomplex(&w[0]) {
            return Err(Error::NotSubset(format!(
                "complex {k} is not a subcomplex of complex {}",
                k + 1
            )));
        }
        incl.push(inclusion(&w[0], &w[1])?);
    }
    let hn = cohomology_tower(nested, &incl, n)?;
    let lower = if n == 0 {
        None
    } else {
        Some(cohomology_tower(nested, &incl, n - 1)?)
    };
    milnor_from_towers(n, &hn, lower.as_ref(), opts)
}

/// One sample of the round trip `b ↦ f(b) ↦ g(f(b))` through the Milnor maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundTripSample {
    pub index: usize,
    /// `g(f(b)) − b = d e` with `e` compatible, checked at every level.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundTripReport {
    pub degree: usize,
    pub depth: usize,
    pub samples: Vec<RoundTripSample>,
}

impl RoundTripReport {
    pub fn all_certified(&self) -> bool {
        self.samples.iter().all(|s| s.certified)
    }
}

struct RoundTrip<'a> {
    ct: &'a ComplexTower,
    n: usize,
    d: Vec<LinearSystem>,
    pi: Vec<LinearSystem>,
}

impl<'a> RoundTrip<'a> {
    fn new(ct: &'a ComplexTower, n: usize) -> Self {
        let d = ct
            .levels
            .iter()
            .map(|c| LinearSystem::new(&c.boundary(n + 1)))
            .collect();
        let pi = (0..ct.maps.len())
            .map(|k| LinearSystem::new(&ct.map(k, n + 1)))
            .collect();
        RoundTrip { ct, n, d, pi }
    }

    fn boundary(&self, k: usize, c: &[BigInt]) -> Result<Vec<BigInt>> {
        self.ct.levels[k].boundary(self.n + 1).mul_vec(c)
    }

    /// Differences `a^k = c^k − π(c^{k+1})` of chosen bounding chains: a sequence of `(n+1)`-cycles.
    fn forward(&self, b: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
        let c = b
            .iter()
            .enumerate()
            .map(|(k, bk)| {
                self.d[k]
                    .solve(bk)?
                    .ok_or_else(|| Error::Precondition(format!("level {k} of the weak cycle is not a boundary")))
            })
            .collect::<Result<Vec<_>>>()?;
        (0..c.len() - 1)
            .map(|k| {
                let down = self.ct.map(k, self.n + 1).mul_vec(&c[k + 1])?;
                Ok(c[k].iter().zip(&down).map(|(x, y)| x - y).collect())
            })
            .collect()
    }

    /// `c'^0 = 0`, `π(c'^{k+1}) = c'^k − a^k`, then `b'^k = d c'^k`.
    fn backward(&self, a: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
        let mut c = vec![vec![BigInt::zero(); self.ct.levels[0].rank(self.n + 1)]];
        for (k, ak) in a.iter().enumerate() {
            let rhs: Vec<BigInt> = c[k].iter().zip(ak).map(|(x, y)| x - y).collect();
            let next = self.pi[k].solve(&rhs)?.ok_or_else(|| {
                Error::Precondition(format!("connective map {k} is not onto in degree {}", self.n + 1))
            })?;
            c.push(next);
        }
        c.iter().enumerate().map(|(k, ck)| self.boundary(k, ck)).collect()
    }

    fn certify(&self, diff: &[Vec<BigInt>]) -> Result<bool> {
        let top = diff.len() - 1;
        let Some(e) = self.d[top].solve(&diff[top])? else {
            return Ok(false);
        };
        for (k, dk) in diff.iter().enumerate() {
            let ek = self.ct.composite(k, top, self.n + 1)?.mul_vec(&e)?;
            if &self.boundary(k, &ek)? != dk {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Random compatible sequences of `n`-boundaries, pushed through `f` and `g`;
/// each difference `g(f(b)) − b` must be the boundary of a compatible chain.
pub fn milnor_roundtrip(ct: &ComplexTower, n: usize, samples: usize, seed: u64) -> Result<RoundTripReport> {
    let depth = ct.depth();
    if depth < 2 {
        return Err(Error::Precondition("the round trip needs two levels".into()));
    }
    let rt = RoundTrip::new(ct, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top_rank = ct.levels[depth - 1].rank(n + 1);
    let mut out = Vec::with_capacity(samples);
    for index in 0..samples {
        let top: Vec<BigInt> = (0..top_rank).map(|_| BigInt::from(rng.gen_range(-5i64..=5))).collect();
        let b = (0..depth)
            .map(|k| rt.boundary(k, &ct.composite(k, depth - 1, n + 1)?.mul_vec(&top)?))
            .collect::<Result<Vec<_>>>()?;
        let a = rt.forward(&b)?;
        let b2 = rt.backward(&a)?;
        let diff: Vec<Vec<BigInt>> = b2
            .iter()
            .zip(&b)
            .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect())
            .collect();
        out.push(RoundTripSample {
            index,
            certified: rt.certify(&diff)?,
        });
    }
    Ok(RoundTripReport {
        degree: n,
        depth,
        samples: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polygon_solenoid() {
        let ct = polygon_tower(8).unwrap();
        let opts = LimitOptions::default();
        let h1 = milnor_homology(&ct, 1, true, &opts).unwrap();
        assert_eq!(h1.weak.group(), Some(FgGroup::zero()));
        let h0 = milnor_homology(&ct, 0, true, &opts).unwrap();
        assert_eq!(h0.weak.group(), Some(FgGroup::zero()));
        assert_eq!(h0.asymptotic.supernatural().unwrap().to_string(), "2^inf");
        let s = h0.h0.unwrap();
        assert_eq!(s.infinite_primes.iter().copied().collect::<Vec<_>>(), vec![2]);
        assert!(s.structure_string().starts_with("Q^(2^ℵ0) ⊕ ⊕_{p∈Fin} Z(p^∞)"));
    }

    #[test]
    fn constant_tower_is_plain_homology() {
        let k = SimplicialComplex::torus();
        let ct = ComplexTower::constant(&k);
        let opts = LimitOptions::default();
        for n in 0..3 {
            let m = milnor_homology(&ct, n, false, &opts).unwrap();
            assert_eq!(m.weak.group(), Some(crate::simplicial::homology(&k, n, false)));
            assert!(m.asymptotic.is_zero());
        }
    }

    #[test]
    fn round_trip() {
        let ct = polygon_tower(5).unwrap();
        let r = milnor_roundtrip(&ct, 0, 10, 4).unwrap();
        assert!(r.all_certified());
    }

    #[test]
    fn nested_cohomology() {
        let x0 = SimplicialComplex::polygon(4);
        let x1 = SimplicialComplex::from_indices(5, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0], vec![0, 4]]);
        let m = milnor_cohomology(&[x0.clone(), x1.clone()], 1, &LimitOptions::default()).unwrap();
        assert_eq!(m.weak.group(), Some(FgGroup::free(1)));
        assert!(m.asymptotic.is_zero());
        assert!(milnor_cohomology(&[x1, x0], 1, &LimitOptions::default()).is_err());
    }

    #[test]
    fn solenoid_complement_tower() {
        let t = Tower::multiplication(3);
        let m = milnor_from_towers(2, &Tower::zero(), Some(&t), &LimitOptions::default()).unwrap();
        assert_eq!(m.asymptotic.supernatural().unwrap().to_string(), "3^inf");
    }
}
