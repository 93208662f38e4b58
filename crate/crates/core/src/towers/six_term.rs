use super::limits::{lim1_of_with, lim_of_with, Lim1Descriptor, LimDescriptor, LimitOptions};
use super::tower::{shift_apply, Tower, TowerElement};
use crate::error::{Error, Result};
use crate::fgab::{FgGroup, Homomorphism, IntMatrix};
use crate::steinitz::DivisorSequence;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// `0 → A → B → C → 0` given by level maps `f_n: A_n → B_n`, `g_n: B_n → C_n`
/// for `n < depth`.
#[derive(Clone, Debug)]
pub struct TowerSequence {
    pub a: Tower,
    pub b: Tower,
    pub c: Tower,
    pub f: Vec<IntMatrix>,
    pub g: Vec<IntMatrix>,
}

impl TowerSequence {
    pub fn depth(&self) -> usize {
        self.f.len().min(self.g.len())
    }

    fn f_hom(&self, n: usize) -> Result<Homomorphism> {
        Homomorphism::new(self.a.group(n)?, self.b.group(n)?, self.f[n].clone())
    }

    fn g_hom(&self, n: usize) -> Result<Homomorphism> {
        Homomorphism::new(self.b.group(n)?, self.c.group(n)?, self.g[n].clone())
    }

    /// Level-wise exactness and commutativity with the connective maps.
    pub fn verify(&self) -> Result<()> {
        let depth = self.depth();
        for n in 0..depth {
            let inexact = |detail: &str| Error::LevelInexact {
                level: n,
                detail: detail.to_string(),
            };
            let f = self.f_hom(n).map_err(|e| inexact(&e.to_string()))?;
            let g = self.g_hom(n).map_err(|e| inexact(&e.to_string()))?;
            if f.kernel_lattice() != f.source().relations() {
                return Err(inexact("f is not injective"));
            }
            if g.image_lattice() != crate::fgab::Lattice::standard(g.target().ngens()) {
                return Err(inexact("g is not surjective"));
            }
            if g.kernel_lattice() != f.image_lattice() {
                return Err(inexact("ker g differs from im f"));
            }
            if n + 1 < depth {
                let f1 = self.f_hom(n + 1)?;
                let g1 = self.g_hom(n + 1)?;
                let left = self.b.map(n)?.compose(&f1)?;
                let right = f.compose(&self.a.map(n)?)?;
                if !left.add(&right.neg())?.is_zero() {
                    return Err(inexact("f does not commute with the connective maps"));
                }
                let left = self.c.map(n)?.compose(&g1)?;
                let right = g.compose(&self.b.map(n)?)?;
                if !left.add(&right.neg())?.is_zero() {
                    return Err(inexact("g does not commute with the connective maps"));
                }
            }
        }
        Ok(())
    }
}

/// `0 → (Z, ×a_{n+1}/a_n) → (Z, id) → (Z/a_n) → 0` with `f_n = ×a_n` and `g_n` reduction.
pub fn canonical_sequence(seq: &DivisorSequence, depth: usize) -> TowerSequence {
    let c = Tower::cyclic_quotients(seq, 1);
    let f = (0..depth)
        .map(|n| IntMatrix::new(1, 1, vec![seq.term(n)]).expect("1x1"))
        .collect();
    let g = (0..depth)
        .map(|n| {
            let k = c.group(n).expect("unbounded tower").ngens();
            let mut m = IntMatrix::zeros(k, 1);
            if k == 1 {
                m.set(0, 0, 1);
            }
            m
        })
        .collect();
    TowerSequence {
        a: Tower::from_divisors(seq),
        b: Tower::constant(FgGroup::free(1)),
        c,
        f,
        g,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceCheck {
    pub name: String,
    /// `None` when a neighbour is not certified.
    pub passed: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleCheck {
    pub index: usize,
    /// `f(∂c) = p(b̃)` on the lifted element.
    pub boundary_maps_to_shift: bool,
    /// For `c = g(b)` with `b` compatible: an explicit preimage of `∂c` under the shift map.
    pub boundary_in_shift_image: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SixTermReport {
    pub depth: usize,
    pub lim: [LimDescriptor; 3],
    pub lim1: [Lim1Descriptor; 3],
    pub checks: Vec<SequenceCheck>,
    pub samples: Vec<SampleCheck>,
}

impl SixTermReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed != Some(false))
            && self
                .samples
                .iter()
                .all(|s| s.boundary_maps_to_shift && s.boundary_in_shift_image)
    }
}

fn lim_rank(d: &LimDescriptor) -> Option<usize> {
    d.group().map(|g| g.rank())
}

fn descriptor_checks(lim: &[LimDescriptor; 3], lim1: &[Lim1Descriptor; 3]) -> Vec<SequenceCheck> {
    let mut out = Vec::new();
    let injective = match (lim_rank(&lim[0]), lim_rank(&lim[1])) {
        (Some(a), Some(b)) => Some(a <= b),
        _ => None,
    };
    out.push(SequenceCheck {
        name: "lim A -> lim B injective".into(),
        passed: injective,
    });
    let certified = |d: &Lim1Descriptor| !matches!(d, Lim1Descriptor::TruncationOnly { .. });
    let surjective = (certified(&lim1[1]) && certified(&lim1[2])).then(|| !lim1[1].is_zero() || lim1[2].is_zero());
    out.push(SequenceCheck {
        name: "lim1 B -> lim1 C surjective".into(),
        passed: surjective,
    });
    let connecting = match (&lim[1], &lim[2], &lim1[0], &lim1[1]) {
        (b, LimDescriptor::ProfiniteLimit { supernatural, copies }, a1, b1) if b.group().is_some() && b1.is_zero() => {
            match a1 {
                Lim1Descriptor::ProChain(p) => Some(&p.supernatural == supernatural && p.rank == *copies),
                Lim1Descriptor::Zero { .. } => Some(supernatural.is_finite()),
                Lim1Descriptor::TruncationOnly { .. } => None,
            }
        }
        _ => None,
    };
    out.push(SequenceCheck {
        name: "lim C -> lim1 A onto cokernel".into(),
        passed: connecting,
    });
    out
}

fn random_elem(g: &FgGroup, rng: &mut ChaCha8Rng) -> Vec<BigInt> {
    let v: Vec<BigInt> = (0..g.ngens())
        .map(|_| BigInt::from(rng.gen_range(-20i64..=20)))
        .collect();
    g.reduce(&v)
}

/// Compatible `(b_n)` of length `depth`, projected down from a random top element.
fn compatible(t: &Tower, depth: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<BigInt>>> {
    let top = random_elem(&t.group(depth - 1)?, rng);
    (0..depth).map(|n| t.composite(n, depth - 1)?.apply(&top)).collect()
}

fn sample(seq: &TowerSequence, index: usize, rng: &mut ChaCha8Rng) -> Result<SampleCheck> {
    let depth = seq.depth();
    let b = compatible(&seq.b, depth, rng)?;
    let c: Vec<Vec<BigInt>> = (0..depth).map(|n| seq.g_hom(n)?.apply(&b[n])).collect::<Result<_>>()?;
    let lift: Vec<Vec<BigInt>> = (0..depth)
        .map(|n| {
            seq.g_hom(n)?.preimage(&c[n])?.ok_or_else(|| Error::LevelInexact {
                level: n,
                detail: "g is not surjective".into(),
            })
        })
        .collect::<Result<_>>()?;
    let lifted = TowerElement::zero_tail(lift.clone());
    let db = shift_apply(&seq.b, &lifted)?;
    let mut boundary = Vec::with_capacity(depth);
    for n in 0..depth {
        let pre = seq.f_hom(n)?.preimage(&db.prefix[n])?;
        boundary.push(pre);
    }
    let exact_part = boundary[..depth - 1].iter().all(Option::is_some);
    let boundary: Vec<Vec<BigInt>> = boundary
        .into_iter()
        .enumerate()
        .map(|(n, x)| x.unwrap_or_else(|| seq.a.group(n).map(|g| g.zero_elem()).unwrap_or_default()))
        .collect();
    let mut maps_to_shift = exact_part;
    for n in 0..depth - 1 {
        let fb = seq.f_hom(n)?.apply(&boundary[n])?;
        maps_to_shift &= fb == db.prefix[n];
    }
    let certificate: Vec<Vec<BigInt>> = (0..depth)
        .map(|n| {
            let bn = seq.b.group(n)?;
            let diff = bn.sub(&lift[n], &b[n]);
            seq.f_hom(n)?.preimage(&diff)?.ok_or_else(|| Error::LevelInexact {
                level: n,
                detail: "ker g differs from im f".into(),
            })
        })
        .collect::<Result<_>>()?;
    let shifted = shift_apply(&seq.a, &TowerElement::zero_tail(certificate))?;
    let mut in_image = true;
    for n in 0..depth - 1 {
        in_image &= shifted.prefix[n] == boundary[n];
    }
    Ok(SampleCheck {
        index,
        boundary_maps_to_shift: maps_to_shift,
        boundary_in_shift_image: in_image,
    })
}

/// Descriptors of the six limit groups, descriptor-level exactness and
/// sample checks of the connecting map at truncation depth.
pub fn six_term(seq: &TowerSequence, samples: usize, seed: u64, opts: &LimitOptions) -> Result<SixTermReport> {
    let depth = seq.depth();
    if depth < 2 {
        return Err(Error::Precondition("a tower sequence needs at least two levels".into()));
    }
    seq.verify()?;
    let lim = [
        lim_of_with(&seq.a, opts)?,
        lim_of_with(&seq.b, opts)?,
        lim_of_with(&seq.c, opts)?,
    ];
    let lim1 = [
        lim1_of_with(&seq.a, opts)?,
        lim1_of_with(&seq.b, opts)?,
        lim1_of_with(&seq.c, opts)?,
    ];
    let checks = descriptor_checks(&lim, &lim1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..samples)
        .map(|i| sample(seq, i, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(SixTermReport {
        depth,
        lim,
        lim1,
        checks,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::FgGroup;

    #[test]
    fn canonical_two_powers() {
        let seq = DivisorSequence::powers(2);
        let r = six_term(&canonical_sequence(&seq, 6), 20, 1, &LimitOptions::default()).unwrap();
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.lim[0].group(), Some(FgGroup::zero()));
        assert_eq!(r.lim[1].group(), Some(FgGroup::free(1)));
        assert!(matches!(r.lim[2], LimDescriptor::ProfiniteLimit { .. }));
        assert_eq!(r.lim1[0].supernatural().unwrap().to_string(), "2^inf");
        assert!(r.lim1[1].is_zero() && r.lim1[2].is_zero());
        assert!(r.checks.iter().all(|c| c.passed == Some(true)));
    }

    #[test]
    fn constant_sequence() {
        let z = FgGroup::free(1);
        let seq = TowerSequence {
            a: Tower::constant(z.clone()),
            b: Tower::constant(z.power(2)),
            c: Tower::constant(z),
            f: vec![IntMatrix::from_i64(&[[1], [0]]); 4],
            g: vec![IntMatrix::from_i64(&[[0, 1]]); 4],
        };
        let r = six_term(&seq, 10, 3, &LimitOptions::default()).unwrap();
        assert!(r.all_pass());
        assert!(r.lim1.iter().all(Lim1Descriptor::is_zero));
    }

    #[test]
    fn inexact_level_reported() {
        let z = FgGroup::free(1);
        let seq = TowerSequence {
            a: Tower::constant(z.clone()),
            b: Tower::constant(z.clone()),
            c: Tower::constant(z),
            f: vec![IntMatrix::from_i64(&[[1]]); 3],
            g: vec![IntMatrix::from_i64(&[[1]]); 3],
        };
        match six_term(&seq, 1, 0, &LimitOptions::default()) {
            Err(Error::LevelInexact { level: 0, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn split_extension() {
        let a = Tower::multiplication(2);
        let c = Tower::multiplication(3);
        let b = Tower::periodic(FgGroup::free(2), vec![IntMatrix::from_i64(&[[2, 1], [0, 3]])]).unwrap();
        let seq = TowerSequence {
            a,
            b,
            c,
            f: vec![IntMatrix::from_i64(&[[1], [0]]); 6],
            g: vec![IntMatrix::from_i64(&[[0, 1]]); 6],
        };
        let r = six_term(&seq, 20, 7, &LimitOptions::default()).unwrap();
        assert!(r.all_pass(), "{:?}", r.checks);
    }
}
