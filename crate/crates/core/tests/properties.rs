use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use prolim::adic::{AdicInteger, LatticeChain};
use prolim::cli::props::*;
use prolim::fgab::{stable_sublattice, FgGroup, IntMatrix, Lattice};
use prolim::steinitz::DivisorSequence;
use prolim::towers::{Tower, TowerElement};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec(proptest::collection::vec(-bound..=bound, cols), rows)
        .prop_map(|r| IntMatrix::from_i64(&r))
}

fn any_matrix(max: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| matrix(r, c, bound))
}

fn square(max: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max).prop_flat_map(move |d| matrix(d, d, bound))
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn divisors() -> impl Strategy<Value = DivisorSequence> {
    (
        proptest::collection::vec(2i64..=6, 0..=2),
        proptest::collection::vec(2i64..=6, 1..=2),
    )
        .prop_map(|(ratios, cycle)| {
            let mut prefix = vec![1i64];
            for r in ratios {
                prefix.push(prefix.last().unwrap() * r);
            }
            DivisorSequence::from_i64(&prefix, &cycle).unwrap()
        })
}

fn ok(c: Check) -> Result<(), TestCaseError> {
    c.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_axioms(a in any_matrix(4, 30)) {
        ok(check_snf(&a))?;
    }

    #[test]
    fn solve_is_sound(
        a in any_matrix(3, 6),
        b in proptest::collection::vec(-10i64..=10, 3),
        x in proptest::collection::vec(-3i64..=3, 3),
        consistent in any::<bool>(),
    ) {
        let b = if consistent {
            a.mul_vec(&ints(&x[..a.cols()])).unwrap()
        } else {
            ints(&b[..a.rows()])
        };
        ok(check_solve(&SolveCase { a, b }))?;
    }

    #[test]
    fn kernel_is_saturated(a in any_matrix(3, 4)) {
        ok(check_kernel(&a))?;
    }

    #[test]
    fn stable_sublattice_invariant(m in square(3, 3)) {
        ok(check_stable(&m))?;
    }

    #[test]
    fn intersection_image_is_contained(m in square(3, 3), e in 1usize..=3, seed in any::<u64>()) {
        let phi = random_matrix(&mut rng(seed), e, m.cols(), 2);
        let lhs = stable_sublattice(&m).unwrap().image(&phi).unwrap();
        for n in 0..=INTERSECTION_DEPTH {
            let bn = Lattice::column_span(&phi.mul(&m.pow(n).unwrap()).unwrap());
            prop_assert!(bn.contains_lattice(&lhs).unwrap());
        }
    }

    #[test]
    fn intersection_commutes_with_injective_maps(m in square(3, 3), extra in 0usize..=1, seed in any::<u64>()) {
        let d = m.cols();
        let phi = random_matrix(&mut rng(seed), d + extra, d, 2);
        prop_assume!(Lattice::column_span(&phi).rank() == d);
        ok(check_intersection(&IntersectionCase { m, phi }))?;
    }

    #[test]
    fn homology_matches_oracle(seed in any::<u64>()) {
        ok(check_homology(&random_complex(&mut rng(seed))))?;
    }

    #[test]
    fn e0_reduction_is_eta(family in 0usize..3, seed in any::<u64>()) {
        let t = &e0_towers()[family];
        let a = random_zero_tail(&mut rng(seed), t.group(0).unwrap().ngens());
        ok(check_e0(t, &a, 8))?;
    }

    #[test]
    fn n_subgroup_witnesses(m in square(2, 3), level in 0usize..=2) {
        prop_assume!(!m.det().unwrap().is_zero());
        let t = Tower::periodic(FgGroup::free(m.rows()), vec![m]).unwrap();
        ok(check_n_subgroup(&t, level, 8))?;
    }

    #[test]
    fn n_subgroup_of_quotients(a in divisors(), level in 0usize..=2) {
        ok(check_n_subgroup(&Tower::cyclic_quotients(&a, 1), level, 8))?;
    }

    #[test]
    fn adic_ring_identities(base in divisors(), values in proptest::collection::vec(-500i64..=500, 1..=3)) {
        ok(check_adic_ring(&AdicCase { base, values, residues: vec![] }, 6))?;
    }

    #[test]
    fn adic_divisibility(base in divisors(), v in -10_000i64..=10_000, q in proptest::sample::select(SMALL_PRIMES.to_vec())) {
        ok(check_divisibility(&AdicInteger::from_int(&base, v, 10), q))?;
    }

    #[test]
    fn profinite_reduction(seed in any::<u64>(), u in proptest::collection::vec(-30i64..=30, 2), v in proptest::collection::vec(-30i64..=30, 2)) {
        let chain = random_chain(&mut rng(seed));
        let d = chain.dim();
        ok(check_profinite(&ProfiniteCase { chain, vectors: vec![ints(&u[..d]), ints(&v[..d])] }, 5))?;
    }

    #[test]
    fn dual_lattice_duality(seed in any::<u64>()) {
        ok(check_dual(&random_superlattice(&mut rng(seed))))?;
    }

    #[test]
    fn composition_multiplies(
        primes in proptest::collection::vec(proptest::sample::select(vec![2u64, 3, 4, 6]), 3),
        pick in (0usize..16, 0usize..16),
    ) {
        let c: Vec<LatticeChain> = primes.iter().map(|&p| powers_chain(p)).collect();
        ok(check_compose(&c[0], &c[1], &c[2], SuiteParams::default(), pick))?;
    }

    #[test]
    fn conjugacy_matches_classification(a in divisors(), b in divisors()) {
        ok(check_conjugacy(&a, &b, SuiteParams::default()))?;
    }

    #[test]
    fn six_term_sequence(a in divisors(), seed in any::<u64>()) {
        ok(check_six_term(&a, SuiteParams::default(), seed))?;
    }
}

#[test]
fn zero_tail_elements_stabilize() {
    let a = TowerElement::zero_tail(vec![ints(&[3]), ints(&[5])]);
    let t = Tower::multiplication(2);
    assert!(check_e0(&t, &a, 6).is_ok());
}

#[test]
fn every_named_suite_passes_briefly() {
    for name in SUITES.iter().filter(|&&s| s != "intersection") {
        let r = run_suite(name, 5, 1, SuiteParams::default()).unwrap();
        assert!(r.failure.is_none(), "{name}: {:?}", r.failure);
    }
    assert!(run_suite("nonexistent", 5, 1, SuiteParams::default()).is_none());
}
