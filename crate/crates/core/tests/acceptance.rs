//! The thirteen acceptance criteria, one line of output each.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use num_bigint::BigInt;
use num_rational::BigRational;
use prolim::adic::{AdicInteger, LatticeChain};
use prolim::cli::props::{self, IntersectionCase, SuiteParams};
use prolim::fgab::{stable_sublattice, FgGroup, IntMatrix};
use prolim::rigidity::{chains_conjugate, enumerate_trivial_homs, Verdict};
use prolim::simplicial::{duality_check, homology, Label, SimplicialComplex};
use prolim::steinitz::{classify_pair, family_same_steenrod, DivisorSequence, DEFAULT_PRIME_BOUND};
use prolim::towers::{milnor_homology, milnor_roundtrip, polygon_tower, Lim1Descriptor, LimitOptions, Tower};
use rand::Rng;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

struct Line {
    number: usize,
    passed: bool,
}

fn criterion(number: usize, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Line {
    let start = Instant::now();
    let mut r = f();
    let took = start.elapsed();
    if let (Ok(_), Some(limit)) = (&r, limit) {
        if took > limit {
            r = Err(format!("took {took:.2?}, limit {limit:?}"));
        }
    }
    let (status, detail) = match &r {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("criterion {number:>2} {status} [{name}] {detail} ({took:.2?})");
    Line {
        number,
        passed: r.is_ok(),
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn seq(prefix: &[i64], cycle: &[i64]) -> DivisorSequence {
    DivisorSequence::from_i64(prefix, cycle).unwrap()
}

fn corpus_sequences() -> Vec<DivisorSequence> {
    vec![
        DivisorSequence::powers(2),
        DivisorSequence::powers(3),
        DivisorSequence::powers(4),
        DivisorSequence::powers(6),
        seq(&[1, 3], &[2]),
        seq(&[1, 9], &[2]),
        seq(&[1], &[2, 3]),
        seq(&[1, 5, 10], &[5, 7]),
    ]
}

fn snf() -> Outcome {
    let r = props::run_suite("snf", 1000, 1, SuiteParams::default()).unwrap();
    match r.failure {
        None => Ok("1000 matrices, zero failures".into()),
        Some(f) => Err(format!("trial {}: {}", f.trial, f.message)),
    }
}

fn homology_corpus() -> Outcome {
    for n in 0..=4 {
        let k = SimplicialComplex::sphere(n);
        for j in 0..=n + 1 {
            let h = homology(&k, j, n == 0);
            let want = if j == n || (j == 0 && n > 0) {
                FgGroup::free(1)
            } else {
                FgGroup::zero()
            };
            check(h == want, || format!("sphere {n}: H_{j} = {h:?}"))?;
        }
    }
    let rp2 = SimplicialComplex::projective_plane();
    check(homology(&rp2, 1, false) == FgGroup::cyclic(2), || {
        "RP2: H_1 is not Z/2".into()
    })?;
    check(homology(&rp2, 2, false) == FgGroup::zero(), || {
        "RP2: H_2 is not 0".into()
    })?;
    Ok("spheres of dimension ≤ 4 and the projective plane".into())
}

fn solenoid_milnor() -> Outcome {
    let ct = polygon_tower(8).map_err(|e| e.to_string())?;
    let opts = LimitOptions::default();
    let h1 = milnor_homology(&ct, 1, true, &opts).map_err(|e| e.to_string())?;
    check(h1.weak.group() == Some(FgGroup::zero()), || {
        format!("lim H_1 = {:?}", h1.weak)
    })?;
    let h0 = milnor_homology(&ct, 0, true, &opts).map_err(|e| e.to_string())?;
    let s = match &h0.asymptotic {
        Lim1Descriptor::ProChain(p) => p.supernatural.to_string(),
        other => return Err(format!("asymptotic part {other:?}")),
    };
    check(s == "2^inf", || format!("supernatural {s}"))?;
    let st = h0.h0.ok_or("no H0 structure")?;
    let text = st.structure_string();
    check(text.starts_with("Q^(2^ℵ0) ⊕ ⊕_{p∈Fin} Z(p^∞)"), || {
        text.clone()
    })?;
    check(st.infinite_primes == BTreeSet::from([2]), || {
        format!("{:?}", st.infinite_primes)
    })?;
    Ok(format!("lim¹ {s}; {text}"))
}

fn round_trip() -> Outcome {
    let ct = polygon_tower(6).map_err(|e| e.to_string())?;
    let r = milnor_roundtrip(&ct, 0, 100, 4).map_err(|e| e.to_string())?;
    let ok = r.samples.iter().filter(|s| s.certified).count();
    check(r.samples.len() == 100 && r.all_certified(), || {
        format!("{ok}/{} certified", r.samples.len())
    })?;
    Ok("100/100 certified".into())
}

fn e0_identity() -> Outcome {
    for (i, t) in props::e0_towers().iter().enumerate() {
        let g = t.group(0).unwrap().ngens();
        for trial in 0..100 {
            let a = props::random_zero_tail(&mut props::trial_rng(500 + i as u64, trial), g);
            props::check_e0(t, &a, 10).map_err(|m| format!("family {i}, trial {trial}: {m}"))?;
        }
    }
    Ok("3 families × 100 elements, all t < 10".into())
}

/// `v ∈ φ(M^n Z^d)` for every `n ≤ depth`, each by an explicit integer preimage.
fn preimage_certificate(c: &IntersectionCase, v: &[BigInt], depth: u32) -> bool {
    (0..=depth).all(|n| {
        let a = c.phi.mul(&c.m.pow(n).unwrap()).unwrap();
        prolim::fgab::solve_linear(&a, v)
            .unwrap()
            .is_some_and(|x| a.mul_vec(&x).unwrap() == v)
    })
}

fn intersection() -> Outcome {
    let mut mismatches = Vec::new();
    for trial in 0..200 {
        let mut rng = props::trial_rng(6, trial);
        let (d, e) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let c = IntersectionCase {
            m: props::random_matrix(&mut rng, d, d, 3),
            phi: props::random_matrix(&mut rng, e, d, 2),
        };
        if let Err(m) = props::check_intersection(&c) {
            mismatches.push((trial, c, m));
        }
    }
    if mismatches.is_empty() {
        return Ok("200/200 instances agree".into());
    }
    let (trial, c, msg) = &mismatches[0];
    Err(format!(
        "{}/200 instances disagree; first at trial {trial}: {msg}; M = {:?}, φ = {:?}",
        mismatches.len(),
        c.m.to_i64_rows(),
        c.phi.to_i64_rows()
    ))
}

/// The smallest counterexample to the identity, `M = diag(2, 3)` and `φ(x, y) = x + y`:
/// the left side is 0, every `φ(M^n Z^2)` is all of `Z`.
fn intersection_counterexample() -> bool {
    let c = IntersectionCase {
        m: IntMatrix::diag(&[2, 3]),
        phi: IntMatrix::from_i64(&[[1, 1]]),
    };
    let l = stable_sublattice(&c.m).unwrap();
    let one = vec![BigInt::from(1)];
    l.rank() == 0 && preimage_certificate(&c, &one, 20) && props::check_intersection(&c).is_err()
}

fn corpus_towers() -> Vec<Tower> {
    let free = |d| FgGroup::free(d);
    let mut out = vec![
        Tower::multiplication(2),
        Tower::multiplication(6),
        Tower::periodic(free(2), vec![IntMatrix::diag(&[2, 3])]).unwrap(),
        Tower::periodic(free(2), vec![IntMatrix::diag(&[2, 1])]).unwrap(),
        Tower::periodic(free(2), vec![IntMatrix::from_i64(&[[1, 1], [1, 2]])]).unwrap(),
        Tower::periodic(free(2), vec![IntMatrix::from_i64(&[[2, 1], [0, 3]])]).unwrap(),
        Tower::periodic(free(1), vec![IntMatrix::from_i64(&[[2]]), IntMatrix::from_i64(&[[3]])]).unwrap(),
        Tower::periodic(
            FgGroup::from_i64(1, &[4]).unwrap(),
            vec![IntMatrix::from_i64(&[[2, 0], [0, 1]])],
        )
        .unwrap(),
    ];
    out.extend(corpus_sequences().iter().map(|a| Tower::cyclic_quotients(a, 1)));
    out
}

fn n_subgroups() -> Outcome {
    let mut generators = 0;
    for (i, t) in corpus_towers().iter().enumerate() {
        for m in 0..3 {
            let n = prolim::towers::n_subgroup(t, m, 8).map_err(|e| format!("tower {i}, level {m}: {e}"))?;
            for w in &n.witnesses {
                check(w.verify(t).unwrap(), || format!("tower {i}, level {m}: witness fails"))?;
            }
            check(n.witnesses.len() == n.generators.len(), || "missing witness".into())?;
            generators += n.generators.len();
        }
    }
    Ok(format!("{generators} generators, each with a verified shift preimage"))
}

fn classification() -> Outcome {
    let b = DEFAULT_PRIME_BOUND;
    let c = classify_pair(&DivisorSequence::powers(2), &DivisorSequence::powers(3), b).unwrap();
    check(!c.homeomorphic && !c.steenrod_isomorphic, || "2^∞ vs 3^∞".into())?;
    let c = classify_pair(&seq(&[1, 3], &[2]), &seq(&[1, 9], &[2]), b).unwrap();
    check(c.steenrod_isomorphic && !c.homeomorphic, || "3·2^∞ vs 9·2^∞".into())?;
    let c = classify_pair(&DivisorSequence::powers(2), &DivisorSequence::powers(4), b).unwrap();
    check(c.homeomorphic, || "2-powers vs 4-powers".into())?;
    let fam = family_same_steenrod(5, 2).unwrap();
    let mut pairs = 0;
    for i in 0..fam.len() {
        for j in i + 1..fam.len() {
            let c = classify_pair(&fam[i], &fam[j], b).unwrap();
            check(c.steenrod_isomorphic && !c.homeomorphic, || {
                format!("family pair ({i}, {j})")
            })?;
            pairs += 1;
        }
    }
    check(pairs == 10, || format!("{pairs} family pairs"))?;
    Ok("three pairs and 10 family checks".into())
}

fn divisibility() -> Outcome {
    let k = 12;
    for (bi, base) in corpus_sequences().iter().enumerate() {
        for trial in 0..100 {
            let mut rng = props::trial_rng(900 + bi as u64, trial);
            let x = match trial % 3 {
                0 => AdicInteger::from_int(base, rng.gen_range(-100_000i64..=100_000), k),
                1 => loop {
                    let q = BigRational::new(rng.gen_range(-60..=60).into(), rng.gen_range(1..=40).into());
                    if let Ok(x) = AdicInteger::from_rational(base, &q, k) {
                        break x;
                    }
                },
                _ => {
                    let m = base.term(k);
                    let r = BigInt::from(rng.gen::<u64>()) % &m;
                    AdicInteger::from_residue(base, &r, k)
                }
            };
            let q = props::SMALL_PRIMES[rng.gen_range(0..props::SMALL_PRIMES.len())];
            props::check_divisibility(&x, q).map_err(|m| format!("base {bi}, trial {trial}, q = {q}: {m}"))?;
        }
    }
    Ok(format!("{} bases × 100 pairs", corpus_sequences().len()))
}

fn dual_lattices() -> Outcome {
    for trial in 0..20 {
        let gens = props::random_superlattice(&mut props::trial_rng(10, trial));
        props::check_dual(&gens).map_err(|m| format!("lattice {trial}: {m}"))?;
    }
    Ok("20 superlattices".into())
}

fn duality() -> Outcome {
    let oct = SimplicialComplex::octahedron();
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
    let r = duality_check(&oct, &eq, 2).map_err(|e| e.to_string())?;
    let d0 = &r.levels[0].degrees[0];
    check(d0.complement_cohomology == FgGroup::free(1), || {
        format!("H^0(T) = {:?}", d0.complement_cohomology)
    })?;
    check(d0.subcomplex_homology == FgGroup::free(1), || "H_1(X) is not Z".into())?;
    check(r.agreed_at.is_some(), || "octahedron levels never agree".into())?;
    let x = SimplicialComplex::from_indices(2, vec![vec![0], vec![1]]);
    let r = duality_check(&SimplicialComplex::sphere(2), &x, 2).map_err(|e| e.to_string())?;
    let at = r.agreed_at.ok_or("two points: no agreement within 2 subdivisions")?;
    let d1 = &r.levels[at].degrees[1];
    check(d1.complement_cohomology == FgGroup::free(1), || {
        format!("H^1(T) = {:?}", d1.complement_cohomology)
    })?;
    check(d1.subcomplex_homology == FgGroup::free(1), || "H_0(X) is not Z".into())?;
    Ok(format!("equator agrees; two vertices agree after {at} subdivisions"))
}

fn chain(p: u64) -> LatticeChain {
    LatticeChain::from_divisors(&DivisorSequence::powers(p))
}

fn rigidity() -> Outcome {
    let e = enumerate_trivial_homs(&chain(2), &chain(3), 8, 20).map_err(|e| e.to_string())?;
    let ms = e.multipliers();
    check(ms.len() == 1 && ms.iter().all(|m| m.is_zero()), || {
        format!("2 → 3 gives {} classes", ms.len())
    })?;
    let e = enumerate_trivial_homs(&chain(2), &chain(2), 8, 3).map_err(|e| e.to_string())?;
    let got: BTreeSet<BigRational> = e.multipliers().iter().map(|m| m.entry(0, 0)).collect();
    let want: BTreeSet<BigRational> = (0..=3u32)
        .flat_map(|l| (-3..=3i64).map(move |w| BigRational::new(w.into(), BigInt::from(2).pow(l))))
        .collect();
    check(got == want, || {
        format!("2 → 2: {} multipliers, brute force {}", got.len(), want.len())
    })?;
    let pairs = [
        (DivisorSequence::powers(2), DivisorSequence::powers(4)),
        (DivisorSequence::powers(2), DivisorSequence::powers(3)),
        (DivisorSequence::powers(2), DivisorSequence::powers(6)),
        (DivisorSequence::powers(6), seq(&[1], &[2, 3])),
        (seq(&[1, 3], &[2]), seq(&[1, 9], &[2])),
        (seq(&[1, 3], &[2]), seq(&[1, 6], &[2])),
        (DivisorSequence::powers(3), DivisorSequence::powers(9)),
        (DivisorSequence::powers(5), seq(&[1, 5, 25], &[5])),
        (seq(&[1], &[2, 3]), seq(&[1], &[3, 2])),
        (DivisorSequence::powers(10), DivisorSequence::powers(5)),
    ];
    for (i, (a, b)) in pairs.iter().enumerate() {
        let homeo = classify_pair(a, b, DEFAULT_PRIME_BOUND).unwrap().homeomorphic;
        let r = chains_conjugate(
            &LatticeChain::from_divisors(a),
            &LatticeChain::from_divisors(b),
            8,
            1,
            DEFAULT_PRIME_BOUND,
        )
        .unwrap();
        let agrees = match r.verdict {
            Verdict::Conjugate => homeo,
            Verdict::NotConjugateAtDepth { .. } => !homeo,
            Verdict::Undecided { .. } => false,
        };
        check(agrees, || {
            format!("pair {i}: {:?} vs homeomorphic = {homeo}", r.verdict)
        })?;
    }
    Ok(format!(
        "{{0}}; {} multipliers in Z[1/2]; 10 verdicts agree",
        want.len()
    ))
}

fn six_term() -> Outcome {
    let p = SuiteParams::default();
    for (i, a) in corpus_sequences().iter().enumerate() {
        props::check_six_term(a, p, 13 + i as u64).map_err(|m| format!("sequence {i}: {m}"))?;
    }
    Ok(format!("{} divisor sequences", corpus_sequences().len()))
}

#[test]
fn acceptance() {
    let s = |secs| Some(Duration::from_secs(secs));
    let lines = [
        criterion(1, "SNF axioms", s(30), snf),
        criterion(2, "homology corpus", s(5), homology_corpus),
        criterion(3, "solenoid Milnor", None, solenoid_milnor),
        criterion(4, "Milnor round trip", None, round_trip),
        criterion(5, "E0 reduction", None, e0_identity),
        criterion(6, "intersection identity", None, intersection),
        criterion(7, "N inside p(A)", None, n_subgroups),
        criterion(8, "classification", None, classification),
        criterion(9, "divisible witness", None, divisibility),
        criterion(10, "dual lattices", None, dual_lattices),
        criterion(11, "duality harness", s(60), duality),
        criterion(12, "rigidity", None, rigidity),
        criterion(13, "six-term sequence", None, six_term),
    ];
    let failed: Vec<usize> = lines.iter().filter(|l| !l.passed).map(|l| l.number).collect();
    println!("{}/13 criteria pass", 13 - failed.len());
    // Criterion 6 asserts an identity that is false for general chains; its failure is
    // expected and must come with a checked counterexample.
    assert!(
        intersection_counterexample(),
        "the known counterexample no longer disagrees"
    );
    assert_eq!(failed, vec![6], "unexpected criterion status");
}
