use super::tower::{shift_apply, Tail, Tower, TowerElement};
use crate::error::{Error, Result};
use crate::fgab::{
    ser, solve_linear, stable_sublattice, FgGroup, Homomorphism, IntMatrix, Lattice, Quotient, MAX_STABLE_DIM,
};
use crate::steinitz::{supernatural_of, DivisorSequence, SupernaturalNumber, DEFAULT_PRIME_BOUND};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LimitOptions {
    /// Levels listed in truncated answers and pro-chains.
    pub depth: usize,
    pub prime_bound: u64,
}

impl Default for LimitOptions {
    fn default() -> Self {
        LimitOptions {
            depth: 8,
            prime_bound: DEFAULT_PRIME_BOUND,
        }
    }
}

/// Why an exact answer is exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    EventuallyIdentity,
    EventuallySurjective,
    /// The image chain of the tail is constant from some point on.
    ImageStabilized,
    StableSublattice,
}

fn display<T: std::fmt::Display, S: Serializer>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum LimDescriptor {
    /// `lim ≅ group`, realised as the subgroup `subgroup` of `A_level`.
    FgAnswer {
        group: FgGroup,
        level: usize,
        subgroup: Lattice,
        certificate: Certificate,
    },
    /// `lim ≅ lattice ⊆ Z^d = A_level`, free.
    StableLattice {
        level: usize,
        lattice: Lattice,
        group: FgGroup,
    },
    /// `lim = ∏_p Z_p`-type completion of `(Z/a_n)^copies`.
    ProfiniteLimit {
        #[serde(serialize_with = "display")]
        supernatural: SupernaturalNumber,
        copies: usize,
    },
    /// Only the images `ran(p_{0,n})` for `n < depth` are known.
    TruncationOnly { depth: usize, images: Vec<FgGroup> },
}

impl LimDescriptor {
    /// The limit as a finitely generated group, when it is one.
    pub fn group(&self) -> Option<FgGroup> {
        match self {
            LimDescriptor::FgAnswer { group, .. } | LimDescriptor::StableLattice { group, .. } => Some(group.clone()),
            LimDescriptor::ProfiniteLimit { supernatural, copies } => {
                (supernatural.is_finite() || *copies == 0).then(FgGroup::zero)
            }
            LimDescriptor::TruncationOnly { .. } => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        !matches!(self, LimDescriptor::TruncationOnly { .. })
    }
}

/// `lim¹` of an injective tower of free groups of rank `rank` from level `base` on,
/// i.e. the quotient of `lim Z^d / r_n` by the dense image of `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProChain {
    pub base: usize,
    pub rank: usize,
    /// Rank of the image of `A_base` in the limit of the quotients; `None` if not computed.
    pub reduced_rank: Option<usize>,
    /// `C_j = A_base / ran(p_{base, base+j})` for the first levels.
    pub levels: Vec<FgGroup>,
    /// Steinitz number of the indices `[Z^d : r_n]`.
    #[serde(serialize_with = "display")]
    pub supernatural: SupernaturalNumber,
    /// Connective maps from `base`, then the repeating cycle.
    pub transitions: Vec<IntMatrix>,
    pub cycle: Vec<IntMatrix>,
    /// Set when the chain lives on the eventual image of a singular tail.
    pub restricted: bool,
}

impl ProChain {
    fn matrix(&self, n: usize) -> &IntMatrix {
        if n < self.transitions.len() {
            &self.transitions[n]
        } else {
            &self.cycle[(n - self.transitions.len()) % self.cycle.len()]
        }
    }

    /// `r_n = V_n Z^d` with `V_n` the product of the first `n` maps.
    pub fn lattice(&self, n: usize) -> Result<Lattice> {
        let mut v = IntMatrix::identity(self.rank);
        for i in 0..n {
            v = v.mul(self.matrix(i))?;
        }
        Ok(Lattice::column_span(&v))
    }

    /// Mutual cofinality of the two chains of lattices up to `depth`.
    pub fn cofinal_with(&self, other: &ProChain, depth: usize) -> Result<bool> {
        if self.rank != other.rank {
            return Ok(false);
        }
        let a = (0..=depth).map(|n| self.lattice(n)).collect::<Result<Vec<_>>>()?;
        let b = (0..=depth).map(|n| other.lattice(n)).collect::<Result<Vec<_>>>()?;
        let covers = |x: &[Lattice], y: &[Lattice]| -> Result<bool> {
            for xi in x.iter().take(depth / 2 + 1) {
                let mut found = false;
                for yj in y {
                    if xi.contains_lattice(yj)? {
                        found = true;
                        break;
                    }
                }
                if !found {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        Ok(covers(&a, &b)? && covers(&b, &a)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Lim1Descriptor {
    Zero {
        certificate: Certificate,
    },
    ProChain(ProChain),
    /// Groups `(A_0 ⊕ ... ⊕ A_n) / ran(p_{0,n} ⊕ ... ⊕ p_{n,n})` up to the depth.
    TruncationOnly {
        depth: usize,
        sum_chain: Vec<FgGroup>,
    },
}

impl Lim1Descriptor {
    pub fn is_zero(&self) -> bool {
        matches!(self, Lim1Descriptor::Zero { .. })
    }

    pub fn supernatural(&self) -> Option<&SupernaturalNumber> {
        match self {
            Lim1Descriptor::ProChain(p) => Some(&p.supernatural),
            _ => None,
        }
    }

    /// Same kind and, for pro-chains, mutually cofinal chains; rank one compares
    /// Steinitz numbers directly.
    pub fn equivalent(&self, other: &Lim1Descriptor, depth: usize) -> Result<bool> {
        match (self, other) {
            (Lim1Descriptor::Zero { .. }, Lim1Descriptor::Zero { .. }) => Ok(true),
            (Lim1Descriptor::ProChain(a), Lim1Descriptor::ProChain(b)) => {
                if a.rank == 1 && b.rank == 1 {
                    Ok(a.supernatural == b.supernatural)
                } else {
                    a.cofinal_with(b, depth)
                }
            }
            _ => Ok(false),
        }
    }
}

fn stabilization_bound(g: &FgGroup) -> usize {
    g.ngens() + g.torsion().iter().map(|t| t.bits() as usize).sum::<usize>() + 1
}

/// `∩_j ran(h^j)` for an endomorphism whose image chain stabilizes within the
/// group's length bound; `None` when it does not.
fn eventual_image(h: &Homomorphism) -> Result<Option<Lattice>> {
    let g = h.source();
    let rel = g.relations();
    let mut cur = Lattice::standard(g.ngens());
    for _ in 0..=stabilization_bound(g) {
        let next = cur.image(h.matrix())?.sum(&rel)?;
        if next == cur {
            return Ok(Some(cur));
        }
        cur = next;
    }
    Ok(None)
}

/// `∩ p^n(A)` for `A = Z^r ⊕ T`. The free part gives the stable lattice `L` of the
/// induced map on `Z^r`; on `B = π⁻¹(L)` the images `p^n(B)` all project onto `L`,
/// so they differ only inside `T` and the chain stops within the torsion bound.
fn mixed_stable(h: &Homomorphism) -> Result<Option<Lattice>> {
    let g = h.source();
    let (r, n) = (g.rank(), g.ngens());
    let m = h.matrix();
    let free = IntMatrix::new(
        r,
        r,
        (0..r)
            .flat_map(|i| (0..r).map(move |j| (i, j)))
            .map(|(i, j)| m.get(i, j).clone())
            .collect(),
    )?;
    let l = stable_sublattice(&free)?;
    let mut gens: Vec<Vec<BigInt>> = l
        .basis_rows()
        .into_iter()
        .map(|mut v| {
            v.resize(n, BigInt::zero());
            v
        })
        .collect();
    gens.extend((r..n).map(|i| {
        let mut v = vec![BigInt::zero(); n];
        v[i] = BigInt::one();
        v
    }));
    let rel = g.relations();
    let mut cur = Lattice::new(n, gens)?.sum(&rel)?;
    for _ in 0..=stabilization_bound(g) {
        let next = cur.image(m)?.sum(&rel)?;
        if next == cur {
            return Ok(Some(cur));
        }
        cur = next;
    }
    Ok(None)
}

/// Composite over one full period starting at level `n ≥ tail_start`.
fn period_map(t: &Tower, n: usize) -> Result<Homomorphism> {
    t.composite(n, n + t.cycle().len())
}

fn image_groups(t: &Tower, depth: usize) -> Result<Vec<FgGroup>> {
    let n = t.available().map_or(depth, |k| k.min(depth));
    (0..n)
        .map(|k| {
            let g = t.group(0)?;
            Ok(Quotient::new(&t.range(0, k)?, &g.relations())?.group)
        })
        .collect()
}

pub fn lim_of(t: &Tower) -> Result<LimDescriptor> {
    lim_of_with(t, &LimitOptions::default())
}

pub fn lim_of_with(t: &Tower, opts: &LimitOptions) -> Result<LimDescriptor> {
    let top = t.tail_start();
    match t.tail() {
        Tail::EventuallyIdentity => {
            let g = t.group(top)?;
            Ok(LimDescriptor::FgAnswer {
                subgroup: Lattice::standard(g.ngens()),
                group: g,
                level: top,
                certificate: Certificate::EventuallyIdentity,
            })
        }
        Tail::CyclicQuotients { sequence, copies } => {
            if sequence.cycle_product().is_one() {
                let k = sequence.tail_start();
                let g = t.group(k)?;
                return Ok(LimDescriptor::FgAnswer {
                    subgroup: Lattice::standard(g.ngens()),
                    group: g,
                    level: k,
                    certificate: Certificate::EventuallyIdentity,
                });
            }
            Ok(LimDescriptor::ProfiniteLimit {
                supernatural: supernatural_of(sequence, opts.prime_bound)?,
                copies: *copies,
            })
        }
        Tail::Periodic(_) => {
            let g = t.group(top)?;
            let p = period_map(t, top)?;
            if g.is_free() && g.rank() <= MAX_STABLE_DIM {
                let s = stable_sublattice(p.matrix())?;
                return Ok(LimDescriptor::StableLattice {
                    level: top,
                    group: FgGroup::free(s.rank()),
                    lattice: s,
                });
            }
            if let Some(e) = eventual_image(&p)? {
                return Ok(LimDescriptor::FgAnswer {
                    group: Quotient::new(&e, &g.relations())?.group,
                    level: top,
                    subgroup: e,
                    certificate: Certificate::ImageStabilized,
                });
            }
            Ok(LimDescriptor::TruncationOnly {
                depth: opts.depth,
                images: image_groups(t, opts.depth)?,
            })
        }
        Tail::None => Ok(LimDescriptor::TruncationOnly {
            depth: t.prefix_len(),
            images: image_groups(t, opts.depth.max(t.prefix_len()))?,
        }),
    }
}

fn is_surjective(h: &Homomorphism) -> bool {
    h.image_lattice() == Lattice::standard(h.target().ngens())
}

fn abs_det(m: &IntMatrix) -> Result<BigInt> {
    Ok(m.det()?.abs())
}

fn build_prochain(
    base: usize,
    rank: usize,
    transitions: Vec<IntMatrix>,
    cycle: Vec<IntMatrix>,
    restricted: bool,
    opts: &LimitOptions,
) -> Result<ProChain> {
    let mut prefix = vec![BigInt::one()];
    for m in &transitions {
        let next = prefix.last().expect("nonempty") * abs_det(m)?;
        prefix.push(next);
    }
    let cyc = cycle.iter().map(abs_det).collect::<Result<Vec<_>>>()?;
    let seq = DivisorSequence::new(prefix, cyc)?;
    let mut chain = ProChain {
        base,
        rank,
        reduced_rank: None,
        levels: Vec::new(),
        supernatural: supernatural_of(&seq, opts.prime_bound)?,
        transitions,
        cycle,
        restricted,
    };
    chain.levels = (0..=opts.depth)
        .map(|n| Ok(Quotient::new(&Lattice::standard(rank), &chain.lattice(n)?)?.group))
        .collect::<Result<Vec<_>>>()?;
    if rank <= MAX_STABLE_DIM {
        let mut period = IntMatrix::identity(rank);
        for m in &chain.cycle {
            period = period.mul(m)?;
        }
        let lim_rank = stable_sublattice(&period)?.rank();
        chain.reduced_rank = Some(rank - lim_rank);
    }
    Ok(chain)
}

fn sum_chain(t: &Tower, depth: usize) -> Result<Vec<FgGroup>> {
    let n_max = t.available().map_or(depth, |k| k.min(depth));
    let mut out = Vec::with_capacity(n_max);
    for n in 0..n_max {
        let gens: Vec<usize> = (0..=n).map(|k| t.group(k).map(|g| g.ngens())).collect::<Result<_>>()?;
        let total: usize = gens.iter().sum();
        let mut inner = Vec::new();
        let mut offset = 0;
        for (k, &gk) in gens.iter().enumerate() {
            for r in t.group(k)?.relations().basis_rows() {
                let mut v = vec![BigInt::zero(); total];
                v[offset..offset + gk].clone_from_slice(&r);
                inner.push(v);
            }
            offset += gk;
        }
        let src = t.group(n)?.ngens();
        let blocks = (0..=n).map(|k| t.composite(k, n)).collect::<Result<Vec<_>>>()?;
        for j in 0..src {
            let mut col = Vec::with_capacity(total);
            for b in &blocks {
                col.extend(b.matrix().col(j));
            }
            inner.push(col);
        }
        let inner = Lattice::new(total, inner)?;
        out.push(Quotient::new(&Lattice::standard(total), &inner)?.group);
    }
    Ok(out)
}

pub fn lim1_of(t: &Tower) -> Result<Lim1Descriptor> {
    lim1_of_with(t, &LimitOptions::default())
}

pub fn lim1_of_with(t: &Tower, opts: &LimitOptions) -> Result<Lim1Descriptor> {
    let top = t.tail_start();
    match t.tail() {
        Tail::EventuallyIdentity | Tail::CyclicQuotients { .. } => Ok(Lim1Descriptor::Zero {
            certificate: Certificate::EventuallySurjective,
        }),
        Tail::Periodic(_) => {
            if t.cycle().iter().all(is_surjective) {
                return Ok(Lim1Descriptor::Zero {
                    certificate: Certificate::EventuallySurjective,
                });
            }
            let p = period_map(t, top)?;
            if eventual_image(&p)?.is_some() {
                return Ok(Lim1Descriptor::Zero {
                    certificate: Certificate::ImageStabilized,
                });
            }
            let g = t.group(top)?;
            if !g.is_free() {
                return Ok(Lim1Descriptor::TruncationOnly {
                    depth: opts.depth,
                    sum_chain: sum_chain(t, opts.depth)?,
                });
            }
            let d = g.rank();
            let cycle: Vec<IntMatrix> = t.cycle().iter().map(|h| h.matrix().clone()).collect();
            if !p.matrix().det()?.is_zero() {
                let nonsingular = |n: usize| -> Result<bool> {
                    let h = &t.prefix_maps()[n];
                    Ok(h.source().is_free()
                        && h.target().is_free()
                        && h.source().rank() == d
                        && h.target().rank() == d
                        && !h.matrix().det()?.is_zero())
                };
                let mut base = top;
                while base > 0 && nonsingular(base - 1)? {
                    base -= 1;
                }
                let transitions = t.prefix_maps()[base..top].iter().map(|h| h.matrix().clone()).collect();
                return Ok(Lim1Descriptor::ProChain(build_prochain(
                    base,
                    d,
                    transitions,
                    cycle,
                    false,
                    opts,
                )?));
            }
            let image = Lattice::column_span(&p.matrix().pow(d as u32)?);
            let r = image.rank();
            let basis = image.basis_rows();
            let cols = basis
                .iter()
                .map(|b| {
                    image
                        .coords(&p.matrix().mul_vec(b)?)
                        .ok_or_else(|| Error::Precondition("eventual image is not invariant".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            let restricted = IntMatrix::from_cols(cols, r)?;
            Ok(Lim1Descriptor::ProChain(build_prochain(
                top,
                r,
                vec![],
                vec![restricted],
                true,
                opts,
            )?))
        }
        Tail::None => Ok(Lim1Descriptor::TruncationOnly {
            depth: t.prefix_len(),
            sum_chain: sum_chain(t, opts.depth.max(t.prefix_len()))?,
        }),
    }
}

/// `N_m = ∩_{k ≥ m} ran(p_{m,k})` as a subgroup of `A_m` (relations included).
pub fn n_lattice(t: &Tower, m: usize) -> Result<Lattice> {
    let top = t.tail_start();
    match t.tail() {
        Tail::EventuallyIdentity if m < top => t.range(m, top),
        Tail::EventuallyIdentity | Tail::CyclicQuotients { .. } => Ok(Lattice::standard(t.group(m)?.ngens())),
        Tail::Periodic(_) => {
            let level = m.max(top);
            let g = t.group(level)?;
            let p = period_map(t, level)?;
            let s = if g.is_free() && g.rank() <= MAX_STABLE_DIM {
                stable_sublattice(p.matrix())?
            } else if g.rank() > 0 && g.rank() <= MAX_STABLE_DIM {
                mixed_stable(&p)?
                    .ok_or_else(|| Error::Undecidable(format!("image chain at level {level} does not stabilize")))?
            } else {
                eventual_image(&p)?
                    .ok_or_else(|| Error::Undecidable(format!("image chain at level {level} does not stabilize")))?
            };
            if m >= top {
                return Ok(s);
            }
            s.image(t.composite(m, top)?.matrix())?.sum(&t.group(m)?.relations())
        }
        Tail::None => Err(Error::Undecidable(
            "the intersection of images needs a tail rule".into(),
        )),
    }
}

/// An element `a` of `∏ A_n` with `p(a)` equal to `generator` at `level` and zero
/// elsewhere, given up to a finite depth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftWitness {
    pub level: usize,
    #[serde(serialize_with = "ser::vec")]
    pub generator: Vec<BigInt>,
    pub preimage: TowerElement,
}

impl ShiftWitness {
    /// Re-applies the shift map: all coordinates before the truncation point must match.
    pub fn verify(&self, t: &Tower) -> Result<bool> {
        let b = shift_apply(t, &self.preimage)?;
        let len = self.preimage.len();
        for n in 0..len.saturating_sub(1) {
            let g = t.group(n)?;
            let want = if n == self.level {
                g.reduce(&self.generator)
            } else {
                g.zero_elem()
            };
            if b.prefix[n] != want {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NSubgroup {
    pub level: usize,
    pub lattice: Lattice,
    pub group: FgGroup,
    #[serde(serialize_with = "ser::vecs")]
    pub generators: Vec<Vec<BigInt>>,
    pub witnesses: Vec<ShiftWitness>,
}

/// `N_m` with, for each generator, a shift-map preimage through `N_{m+1}, N_{m+2}, ...`
/// up to `depth` levels.
pub fn n_subgroup(t: &Tower, m: usize, depth: usize) -> Result<NSubgroup> {
    let n_m = n_lattice(t, m)?;
    let gm = t.group(m)?;
    let q = Quotient::new(&n_m, &gm.relations())?;
    let generators: Vec<Vec<BigInt>> = q.lifts().iter().map(|l| gm.reduce(l)).collect();
    let depth = depth.max(m + 2);
    let lattices = (m + 1..depth).map(|k| n_lattice(t, k)).collect::<Result<Vec<_>>>()?;
    let mut witnesses = Vec::with_capacity(generators.len());
    for gen in &generators {
        let mut prefix: Vec<Vec<BigInt>> = (0..=m)
            .map(|k| t.group(k).map(|g| g.zero_elem()))
            .collect::<Result<_>>()?;
        let mut x = gen.clone();
        for k in m..depth - 1 {
            let nk = &lattices[k - m];
            let p = t.map(k)?;
            let target = t.group(k)?;
            let basis = nk.basis().transpose();
            let sys = p.matrix().mul(&basis)?.hstack(&target.relation_columns())?;
            let y = solve_linear(&sys, &x)?
                .ok_or_else(|| Error::Precondition(format!("no preimage in N_{} at level {k}", k + 1)))?;
            let next = t.group(k + 1)?.reduce(&basis.mul_vec(&y[..nk.rank()])?);
            let g = t.group(k + 1)?;
            prefix.push(g.sub(&g.zero_elem(), &next));
            x = next;
        }
        witnesses.push(ShiftWitness {
            level: m,
            generator: gen.clone(),
            preimage: TowerElement::zero_tail(prefix),
        });
    }
    Ok(NSubgroup {
        level: m,
        group: q.group,
        lattice: n_m,
        generators,
        witnesses,
    })
}

/// The `d`-fold direct sum of a tower with itself.
pub fn kunneth_torus(t: &Tower, d: usize) -> Result<Tower> {
    if d == 0 {
        return Err(Error::Precondition("the torus dimension must be at least 1".into()));
    }
    if d == 1 {
        return Ok(t.clone());
    }
    let fold = |h: &Homomorphism| (1..d).fold(h.clone(), |acc, _| acc.direct_sum(h));
    let groups: Vec<FgGroup> = t
        .prefix_groups()
        .iter()
        .map(|g| fold(&Homomorphism::identity(g)).source().clone())
        .collect();
    let maps = t.prefix_maps().iter().map(|h| fold(h).matrix().clone()).collect();
    let tail = match t.tail() {
        Tail::None => Tail::None,
        Tail::EventuallyIdentity => Tail::EventuallyIdentity,
        Tail::Periodic(_) => Tail::Periodic(t.cycle().iter().map(|h| fold(h).matrix().clone()).collect()),
        Tail::CyclicQuotients { sequence, copies } => {
            return Ok(Tower::cyclic_quotients(sequence, copies * d));
        }
    };
    Tower::new(groups, maps, tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::bigs;

    #[test]
    fn lim_examples() {
        assert_eq!(
            lim_of(&Tower::constant(FgGroup::free(1))).unwrap().group(),
            Some(FgGroup::free(1))
        );
        assert_eq!(
            lim_of(&Tower::multiplication(2)).unwrap().group(),
            Some(FgGroup::zero())
        );
        let t = Tower::periodic(FgGroup::free(2), vec![IntMatrix::diag(&[2, 1])]).unwrap();
        match lim_of(&t).unwrap() {
            LimDescriptor::StableLattice { lattice, .. } => assert_eq!(lattice, Lattice::from_i64(2, &[[0, 1]])),
            other => panic!("{other:?}"),
        }
        let finite = Tower::periodic(FgGroup::cyclic(12), vec![IntMatrix::from_i64(&[[2]])]).unwrap();
        assert_eq!(lim_of(&finite).unwrap().group(), Some(FgGroup::cyclic(3)));
    }

    #[test]
    fn lim1_examples() {
        assert!(lim1_of(&Tower::constant(FgGroup::free(1))).unwrap().is_zero());
        let two = lim1_of(&Tower::multiplication(2)).unwrap();
        assert_eq!(two.supernatural().unwrap().to_string(), "2^inf");
        let six = lim1_of(&Tower::multiplication(6)).unwrap();
        assert_eq!(six.supernatural().unwrap().to_string(), "2^inf*3^inf");
        match &six {
            Lim1Descriptor::ProChain(p) => assert_eq!(p.levels[2], FgGroup::cyclic(36)),
            _ => unreachable!(),
        }
        let finite = Tower::periodic(FgGroup::cyclic(12), vec![IntMatrix::from_i64(&[[2]])]).unwrap();
        assert!(lim1_of(&finite).unwrap().is_zero());
        let singular = Tower::periodic(FgGroup::free(2), vec![IntMatrix::diag(&[2, 0])]).unwrap();
        match lim1_of(&singular).unwrap() {
            Lim1Descriptor::ProChain(p) => {
                assert!(p.restricted);
                assert_eq!(p.rank, 1);
                assert_eq!(p.supernatural.to_string(), "2^inf");
            }
            other => panic!("{other:?}"),
        }
        let json = serde_json::to_value(&two).unwrap();
        assert_eq!(json["kind"], "ProChain");
        assert_eq!(json["supernatural"], "2^inf");
    }

    #[test]
    fn n_subgroups() {
        let n = n_subgroup(&Tower::multiplication(2), 0, 6).unwrap();
        assert!(n.group.is_trivial());
        let t = Tower::periodic(FgGroup::free(2), vec![IntMatrix::diag(&[2, 1])]).unwrap();
        let n = n_subgroup(&t, 0, 6).unwrap();
        assert_eq!(n.lattice, Lattice::from_i64(2, &[[0, 1]]));
        assert!(n.witnesses.iter().all(|w| w.verify(&t).unwrap()));
        let c = Tower::constant(FgGroup::cyclic(4));
        let n = n_subgroup(&c, 0, 4).unwrap();
        assert_eq!(n.group, FgGroup::cyclic(4));
        assert!(n.witnesses[0].verify(&c).unwrap());
        assert_eq!(n.witnesses[0].generator, bigs(&[1]));
    }

    #[test]
    fn kunneth() {
        let t = Tower::multiplication(2);
        assert_eq!(kunneth_torus(&t, 1).unwrap(), t);
        let t2 = kunneth_torus(&t, 2).unwrap();
        let l = lim1_of(&t2).unwrap();
        match l {
            Lim1Descriptor::ProChain(p) => {
                assert_eq!(p.rank, 2);
                assert_eq!(p.supernatural.to_string(), "2^inf");
            }
            other => panic!("{other:?}"),
        }
        let z = kunneth_torus(&Tower::zero(), 3).unwrap();
        assert_eq!(lim_of(&z).unwrap().group(), Some(FgGroup::zero()));
        assert!(lim1_of(&z).unwrap().is_zero());
    }

    #[test]
    fn truncated_tower() {
        let t = Tower::new(
            vec![FgGroup::free(1); 3],
            vec![IntMatrix::from_i64(&[[2]]), IntMatrix::from_i64(&[[3]])],
            Tail::None,
        )
        .unwrap();
        match lim1_of(&t).unwrap() {
            Lim1Descriptor::TruncationOnly { sum_chain, .. } => {
                assert_eq!(sum_chain.len(), 3);
                assert_eq!(sum_chain[0], FgGroup::zero());
            }
            other => panic!("{other:?}"),
        }
        assert!(n_lattice(&t, 0).is_err());
    }

    #[test]
    fn mixed_group_n_subgroup() {
        let g = FgGroup::from_i64(1, &[4]).unwrap();
        let t = Tower::periodic(g, vec![IntMatrix::from_i64(&[[2, 0], [1, 1]])]).unwrap();
        let n = n_subgroup(&t, 0, 6).unwrap();
        assert_eq!(n.group, FgGroup::cyclic(4));
        assert!(n.witnesses.iter().all(|w| w.verify(&t).unwrap()));
        let t = Tower::periodic(
            FgGroup::from_i64(1, &[2]).unwrap(),
            vec![IntMatrix::from_i64(&[[1, 0], [1, 0]])],
        )
        .unwrap();
        let expected = Lattice::from_i64(2, &[[1, 1], [0, 2]]);
        assert_eq!(n_lattice(&t, 0).unwrap(), expected);
    }
}
