//! Randomized invariant suites. Every trial draws from its own ChaCha stream, so a
//! failure is reproduced by `(seed, trial)` alone.

use crate::adic::{
    dual_lattice, odometer_step, profinite_add, profinite_reduce, solve_divisibility, AdicInteger, LatticeChain,
};
use crate::fgab::{kernel_lattice, smith_normal_form, solve_linear, stable_sublattice, FgGroup, IntMatrix, Lattice};
use crate::oracles;
use crate::rigidity::{chains_conjugate, compose, continuity_check, enumerate_trivial_homs, TrivialHom, Verdict};
use crate::simplicial::{homology, SimplicialComplex};
use crate::steinitz::{classify_pair, supernatural_of, DivisorSequence};
use crate::towers::{
    canonical_sequence, e0_reduce, eta, milnor_roundtrip, n_subgroup, polygon_tower, shift_apply, six_term,
    LimitOptions, Tower, TowerElement,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};

pub type Check = std::result::Result<(), String>;

/// Numeric knobs shared by the suites.
#[derive(Clone, Copy, Debug)]
pub struct SuiteParams {
    pub depth: usize,
    pub precision: usize,
    pub bound: u64,
    pub prime_bound: u64,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            depth: 8,
            precision: 12,
            bound: 3,
            prime_bound: crate::steinitz::DEFAULT_PRIME_BOUND,
        }
    }
}

pub const SUITES: &[&str] = &[
    "adic-divisibility",
    "adic-ring",
    "conjugacy",
    "dual-lattice",
    "e0-identity",
    "homology",
    "intersection",
    "kernel",
    "milnor-roundtrip",
    "n-subgroup",
    "profinite",
    "rigidity-compose",
    "six-term",
    "snf",
    "solve",
    "stable-sublattice",
];

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub message: String,
    pub witness: Value,
    /// Shrinking steps applied to the first failing case.
    pub shrink_steps: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

trait Suite {
    type Case: Serialize + Clone;
    fn generate(&self, rng: &mut ChaCha8Rng) -> Self::Case;
    fn check(&self, case: &Self::Case) -> Check;
    fn shrink(&self, _case: &Self::Case) -> Vec<Self::Case> {
        Vec::new()
    }
}

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn guarded(f: impl FnOnce() -> Check + std::panic::UnwindSafe) -> Check {
    catch_unwind(f).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    })
}

const MAX_SHRINK: usize = 500;

fn run<S: Suite>(name: &str, suite: &S, trials: usize, seed: u64) -> SuiteReport {
    let check = |c: &S::Case| guarded(AssertUnwindSafe(|| suite.check(c)));
    for trial in 0..trials {
        let case = suite.generate(&mut trial_rng(seed, trial));
        if let Err(first) = check(&case) {
            let (mut cur, mut message, mut steps) = (case, first, 0);
            'outer: while steps < MAX_SHRINK {
                for c in suite.shrink(&cur) {
                    if let Err(m) = check(&c) {
                        cur = c;
                        message = m;
                        steps += 1;
                        continue 'outer;
                    }
                }
                break;
            }
            return SuiteReport {
                suite: name.into(),
                seed,
                trials,
                passed: trial,
                status: "fail",
                failure: Some(Failure {
                    trial,
                    message,
                    witness: serde_json::to_value(&cur).expect("serializable witness"),
                    shrink_steps: steps,
                }),
            };
        }
    }
    SuiteReport {
        suite: name.into(),
        seed,
        trials,
        passed: trials,
        status: "pass",
        failure: None,
    }
}

/// Runs a registered suite; `None` for an unknown name.
pub fn run_suite(name: &str, trials: usize, seed: u64, p: SuiteParams) -> Option<SuiteReport> {
    let r = match name {
        "snf" => run(name, &Snf, trials, seed),
        "solve" => run(name, &Solve, trials, seed),
        "kernel" => run(name, &Kernel, trials, seed),
        "stable-sublattice" => run(name, &Stable, trials, seed),
        "intersection" => run(name, &Intersection, trials, seed),
        "homology" => run(name, &Homology, trials, seed),
        "e0-identity" => run(name, &E0Identity(p), trials, seed),
        "milnor-roundtrip" => run(name, &RoundTrip, trials, seed),
        "n-subgroup" => run(name, &NSub(p), trials, seed),
        "adic-ring" => run(name, &AdicRing(p), trials, seed),
        "adic-divisibility" => run(name, &AdicDivisibility(p), trials, seed),
        "profinite" => run(name, &Profinite(p), trials, seed),
        "dual-lattice" => run(name, &DualSuite, trials, seed),
        "rigidity-compose" => run(name, &Compose(p), trials, seed),
        "conjugacy" => run(name, &Conjugacy(p), trials, seed),
        "six-term" => run(name, &SixTerm(p), trials, seed),
        _ => return None,
    };
    Some(r)
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let entries = (0..rows * cols).map(|_| big(rng.gen_range(-bound..=bound))).collect();
    IntMatrix::new(rows, cols, entries).expect("shape")
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<BigInt> {
    (0..n).map(|_| big(rng.gen_range(-bound..=bound))).collect()
}

fn nonsingular(rng: &mut ChaCha8Rng, d: usize, bound: i64) -> IntMatrix {
    loop {
        let m = random_matrix(rng, d, d, bound);
        if m.det().expect("square").abs() > BigInt::one() {
            return m;
        }
    }
}

/// Candidate smaller matrices: one row or column removed, or one entry moved toward zero.
pub fn shrink_matrix(a: &IntMatrix) -> Vec<IntMatrix> {
    let rows = a.to_rows();
    let mut out = Vec::new();
    if a.rows() > 1 {
        for i in 0..a.rows() {
            let mut r = rows.clone();
            r.remove(i);
            out.push(IntMatrix::from_rows(r, a.cols()).expect("rows"));
        }
    }
    if a.cols() > 1 {
        for j in 0..a.cols() {
            let r: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|row| {
                    let mut row = row.clone();
                    row.remove(j);
                    row
                })
                .collect();
            out.push(IntMatrix::from_rows(r, a.cols() - 1).expect("rows"));
        }
    }
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let x = a.get(i, j);
            if !x.is_zero() {
                for y in [BigInt::zero(), x / 2] {
                    if &y != x {
                        let mut b = a.clone();
                        b.set(i, j, y);
                        out.push(b);
                    }
                }
            }
        }
    }
    out
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: crate::Error) -> String {
    e.to_string()
}

/// `U·A·V = S`, unimodular `U` and `V`, the divisibility chain, and agreement with
/// determinantal divisors when both dimensions are at most 4.
pub fn check_snf(a: &IntMatrix) -> Check {
    let f = smith_normal_form(a);
    let uav = f.u.mul(a).and_then(|x| x.mul(&f.v)).map_err(err)?;
    ensure(uav == f.s, || "U·A·V differs from S".into())?;
    for (name, m) in [("U", &f.u), ("V", &f.v)] {
        ensure(m.det().map_err(err)?.abs().is_one(), || {
            format!("{name} is not unimodular")
        })?;
    }
    for i in 0..f.s.rows() {
        for j in 0..f.s.cols() {
            ensure(i == j || f.s.get(i, j).is_zero(), || {
                format!("S has an off-diagonal entry at ({i}, {j})")
            })?;
        }
    }
    let diag = f.diagonal();
    let nonzero: Vec<BigInt> = diag.iter().take_while(|x| !x.is_zero()).cloned().collect();
    ensure(diag[nonzero.len()..].iter().all(Zero::is_zero), || {
        "zero before a nonzero entry".into()
    })?;
    ensure(nonzero.iter().all(Signed::is_positive), || "negative invariant".into())?;
    ensure(nonzero.windows(2).all(|w| w[1].is_multiple_of(&w[0])), || {
        format!("chain broken: {nonzero:?}")
    })?;
    ensure(f.invariants == nonzero, || "invariants differ from the diagonal".into())?;
    if a.rows() <= 4 && a.cols() <= 4 {
        let oracle = oracles::determinantal_invariants(a);
        ensure(oracle == nonzero, || {
            format!("determinantal divisors give {oracle:?}, SNF gives {nonzero:?}")
        })?;
    }
    Ok(())
}

struct Snf;

impl Suite for Snf {
    type Case = IntMatrix;
    fn generate(&self, rng: &mut ChaCha8Rng) -> IntMatrix {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        random_matrix(rng, r, c, 50)
    }
    fn check(&self, a: &IntMatrix) -> Check {
        check_snf(a)
    }
    fn shrink(&self, a: &IntMatrix) -> Vec<IntMatrix> {
        shrink_matrix(a)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveCase {
    pub a: IntMatrix,
    #[serde(serialize_with = "crate::fgab::ser::vec")]
    pub b: Vec<BigInt>,
}

/// A returned solution solves the system; a reported absence is confirmed by box search.
pub fn check_solve(c: &SolveCase) -> Check {
    match solve_linear(&c.a, &c.b).map_err(err)? {
        Some(x) => ensure(c.a.mul_vec(&x).map_err(err)? == c.b, || {
            "returned vector does not solve".into()
        }),
        None => ensure(oracles::solve_in_box(&c.a, &c.b, 8).is_none(), || {
            "box search found a solution".into()
        }),
    }
}

struct Solve;

impl Suite for Solve {
    type Case = SolveCase;
    fn generate(&self, rng: &mut ChaCha8Rng) -> SolveCase {
        let (r, c) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let a = random_matrix(rng, r, c, 6);
        let b = if rng.gen_bool(0.5) {
            let x = random_vec(rng, c, 5);
            a.mul_vec(&x).expect("shape")
        } else {
            random_vec(rng, r, 10)
        };
        SolveCase { a, b }
    }
    fn check(&self, c: &SolveCase) -> Check {
        check_solve(c)
    }
}

/// The kernel basis is annihilated and has rank `cols − rank_Q(A)`.
pub fn check_kernel(a: &IntMatrix) -> Check {
    let k = kernel_lattice(a);
    for v in k.basis_rows() {
        ensure(a.mul_vec(&v).map_err(err)?.iter().all(Zero::is_zero), || {
            "kernel vector not annihilated".into()
        })?;
    }
    let want = a.cols() - oracles::rank_q(a);
    ensure(k.rank() == want, || {
        format!("kernel rank {} but nullity {want}", k.rank())
    })
}

struct Kernel;

impl Suite for Kernel {
    type Case = IntMatrix;
    fn generate(&self, rng: &mut ChaCha8Rng) -> IntMatrix {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        random_matrix(rng, r, c, 4)
    }
    fn check(&self, a: &IntMatrix) -> Check {
        check_kernel(a)
    }
    fn shrink(&self, a: &IntMatrix) -> Vec<IntMatrix> {
        shrink_matrix(a)
    }
}

fn box_vectors(d: usize, radius: i64) -> Vec<Vec<BigInt>> {
    let side = (2 * radius + 1) as u64;
    (0..side.pow(d as u32))
        .map(|mut code| {
            (0..d)
                .map(|_| {
                    let e = (code % side) as i64 - radius;
                    code /= side;
                    big(e)
                })
                .collect()
        })
        .collect()
}

fn image_lattice(m: &IntMatrix, l: &Lattice) -> crate::Result<Lattice> {
    let rows = l
        .basis_rows()
        .iter()
        .map(|b| m.mul_vec(b))
        .collect::<crate::Result<Vec<_>>>()?;
    Lattice::new(m.rows(), rows)
}

/// `L = ∩ M^n Z^d` is `M`-invariant, `M` maps it onto itself, and for `d ≤ 2` it agrees
/// with box membership in `M^12 Z^d`.
pub fn check_stable(m: &IntMatrix) -> Check {
    let l = stable_sublattice(m).map_err(err)?;
    let ml = image_lattice(m, &l).map_err(err)?;
    ensure(ml == l, || "M·L differs from L".into())?;
    if m.rows() <= 2 {
        let oracle: BTreeSet<Vec<i64>> = oracles::stable_box(m, 12, 2).into_iter().collect();
        let mine: BTreeSet<Vec<i64>> = box_vectors(m.rows(), 2)
            .into_iter()
            .filter(|v| l.contains(v))
            .map(|v| v.iter().map(|x| i64::try_from(x).expect("small")).collect())
            .collect();
        ensure(oracle == mine, || format!("box oracle {oracle:?} vs lattice {mine:?}"))?;
    }
    Ok(())
}

struct Stable;

impl Suite for Stable {
    type Case = IntMatrix;
    fn generate(&self, rng: &mut ChaCha8Rng) -> IntMatrix {
        let d = rng.gen_range(1..=3);
        random_matrix(rng, d, d, 3)
    }
    fn check(&self, m: &IntMatrix) -> Check {
        check_stable(m)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersectionCase {
    /// Tail matrix: `B_n = M^n Z^d`.
    pub m: IntMatrix,
    pub phi: IntMatrix,
}

pub const INTERSECTION_DEPTH: u32 = 12;

/// Vectors of the radius-2 box lying in `φ(M^n Z^d)` for every `n ≤ depth`, by lattice
/// membership along the image chain.
pub fn image_chain_box(c: &IntersectionCase, depth: u32) -> crate::Result<BTreeSet<Vec<BigInt>>> {
    let chain = (0..=depth)
        .map(|n| Ok(Lattice::column_span(&c.phi.mul(&c.m.pow(n)?)?)))
        .collect::<crate::Result<Vec<_>>>()?;
    let mut out = BTreeSet::new();
    for v in box_vectors(c.phi.rows(), 2) {
        if chain.iter().all(|l| l.contains(&v)) {
            out.insert(v);
        }
    }
    Ok(out)
}

/// `φ(∩ B_n)` against `∩ φ(B_n)`: the left side from `stable_sublattice`, the right side
/// from the image chain, compared on a box; the left side must also sit in every `φ(B_n)`.
pub fn check_intersection(c: &IntersectionCase) -> Check {
    let l = stable_sublattice(&c.m).map_err(err)?;
    let lhs = image_lattice(&c.phi, &l).map_err(err)?;
    for n in 0..=INTERSECTION_DEPTH {
        let bn = Lattice::column_span(&c.phi.mul(&c.m.pow(n).map_err(err)?).map_err(err)?);
        ensure(bn.contains_lattice(&lhs).map_err(err)?, || {
            format!("φ(∩B) not inside φ(B_{n})")
        })?;
    }
    let rhs = image_chain_box(c, INTERSECTION_DEPTH).map_err(err)?;
    for v in &rhs {
        if !lhs.contains(v) {
            let shown: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            return Err(format!(
                "({}) lies in φ(B_n) for all n ≤ {INTERSECTION_DEPTH} but not in φ(∩B_n)",
                shown.join(", ")
            ));
        }
    }
    Ok(())
}

struct Intersection;

impl Suite for Intersection {
    type Case = IntersectionCase;
    fn generate(&self, rng: &mut ChaCha8Rng) -> IntersectionCase {
        let (d, e) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        IntersectionCase {
            m: random_matrix(rng, d, d, 3),
            phi: random_matrix(rng, e, d, 2),
        }
    }
    fn check(&self, c: &IntersectionCase) -> Check {
        check_intersection(c)
    }
    fn shrink(&self, c: &IntersectionCase) -> Vec<IntersectionCase> {
        let mut out: Vec<IntersectionCase> = shrink_matrix(&c.phi)
            .into_iter()
            .filter(|p| p.cols() == c.m.cols())
            .map(|phi| IntersectionCase { m: c.m.clone(), phi })
            .collect();
        out.extend(
            shrink_matrix(&c.m)
                .into_iter()
                .filter(|m| m.is_square() && m.rows() == c.m.rows())
                .map(|m| IntersectionCase { m, phi: c.phi.clone() }),
        );
        out
    }
}

/// A random complex on at most 6 vertices, as a facet list.
pub fn random_complex(rng: &mut ChaCha8Rng) -> SimplicialComplex {
    let n = rng.gen_range(2..=6);
    let facets: Vec<Vec<usize>> = (0..rng.gen_range(1..=6))
        .map(|_| {
            let size = rng.gen_range(1..=4.min(n));
            let mut s: Vec<usize> = rand::seq::index::sample(rng, n, size).into_vec();
            s.sort_unstable();
            s
        })
        .collect();
    let used: BTreeSet<usize> = facets.iter().flatten().copied().collect();
    let labels: Vec<usize> = used.into_iter().collect();
    let facets: Vec<Vec<usize>> = facets
        .iter()
        .map(|f| f.iter().map(|v| labels.binary_search(v).expect("used")).collect())
        .collect();
    SimplicialComplex::from_indices(labels.len(), facets)
}

/// Ranks against rational Betti numbers and torsion counts against mod-p Betti numbers.
pub fn check_homology(k: &SimplicialComplex) -> Check {
    for n in 0..=k.dim().map_or(0, |d| d + 1) {
        let h = homology(k, n, false);
        let b = oracles::betti(k, n, None);
        ensure(h.rank() == b, || {
            format!("H_{n} rank {} but Betti number {b}", h.rank())
        })?;
        for p in [2u64, 3, 5] {
            let t = h
                .torsion()
                .iter()
                .filter(|x| x.is_multiple_of(&BigInt::from(p)))
                .count();
            let want = oracles::torsion_summands(k, n, p);
            ensure(t == want, || {
                format!("H_{n} has {t} {p}-primary summands, oracle {want}")
            })?;
        }
    }
    Ok(())
}

struct Homology;

impl Suite for Homology {
    type Case = SimplicialComplex;
    fn generate(&self, rng: &mut ChaCha8Rng) -> SimplicialComplex {
        random_complex(rng)
    }
    fn check(&self, k: &SimplicialComplex) -> Check {
        check_homology(k)
    }
}

/// The three tower families of the reduction identity.
pub fn e0_towers() -> Vec<Tower> {
    vec![
        Tower::multiplication(2),
        Tower::multiplication(6),
        Tower::periodic(FgGroup::free(2), vec![IntMatrix::diag(&[2, 3])]).expect("periodic tower"),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct E0Case {
    pub family: usize,
    pub element: TowerElement,
}

/// `e0_reduce(p(a), t) = η_t(a_t)` for every `t < depth`.
pub fn check_e0(t: &Tower, a: &TowerElement, depth: usize) -> Check {
    let b = shift_apply(t, a).map_err(err)?;
    for s in 0..depth {
        let g = t.group(s).map_err(err)?.ngens();
        let lhs = e0_reduce(t, &b, s, depth).map_err(err)?;
        let rhs = eta(t, s, &a.coord(s, g), depth).map_err(err)?;
        ensure(lhs == rhs, || format!("reduction differs from η at t = {s}"))?;
    }
    Ok(())
}

pub fn random_zero_tail(rng: &mut ChaCha8Rng, ngens: usize) -> TowerElement {
    let len = rng.gen_range(1..=6);
    TowerElement::zero_tail((0..len).map(|_| random_vec(rng, ngens, 20)).collect())
}

struct E0Identity(SuiteParams);

impl Suite for E0Identity {
    type Case = E0Case;
    fn generate(&self, rng: &mut ChaCha8Rng) -> E0Case {
        let family = rng.gen_range(0..3);
        let g = e0_towers()[family].group(0).expect("level 0").ngens();
        E0Case {
            family,
            element: random_zero_tail(rng, g),
        }
    }
    fn check(&self, c: &E0Case) -> Check {
        check_e0(&e0_towers()[c.family], &c.element, self.0.depth)
    }
}

struct RoundTrip;

impl Suite for RoundTrip {
    type Case = (usize, u64);
    fn generate(&self, rng: &mut ChaCha8Rng) -> (usize, u64) {
        (rng.gen_range(0..=1), rng.gen())
    }
    fn check(&self, &(n, seed): &(usize, u64)) -> Check {
        let ct = polygon_tower(6).map_err(err)?;
        let r = milnor_roundtrip(&ct, n, 1, seed).map_err(err)?;
        ensure(r.all_certified(), || "g(f(b)) − b is not a compatible boundary".into())
    }
}

/// Every generator of `N_m` has a shift preimage that re-applies correctly.
pub fn check_n_subgroup(t: &Tower, m: usize, depth: usize) -> Check {
    let n = n_subgroup(t, m, depth).map_err(err)?;
    ensure(n.witnesses.len() == n.generators.len(), || "missing witnesses".into())?;
    for w in &n.witnesses {
        ensure(w.verify(t).map_err(err)?, || {
            format!("witness for {:?} fails re-application", w.generator)
        })?;
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerCase {
    pub tower: Tower,
    pub level: usize,
}

struct NSub(SuiteParams);

impl Suite for NSub {
    type Case = TowerCase;
    fn generate(&self, rng: &mut ChaCha8Rng) -> TowerCase {
        let tower = if rng.gen_bool(0.5) {
            let d = rng.gen_range(1..=2);
            let mut m = random_matrix(rng, d, d, 3);
            while m.det().expect("square").is_zero() {
                m = random_matrix(rng, d, d, 3);
            }
            Tower::periodic(FgGroup::free(d), vec![m]).expect("periodic")
        } else {
            Tower::cyclic_quotients(&random_divisors(rng), rng.gen_range(1..=2))
        };
        TowerCase {
            tower,
            level: rng.gen_range(0..=2),
        }
    }
    fn check(&self, c: &TowerCase) -> Check {
        check_n_subgroup(&c.tower, c.level, self.0.depth.max(c.level + 2))
    }
}

/// A divisor sequence with a short prefix and cycle of ratios in `2..=6`.
pub fn random_divisors(rng: &mut ChaCha8Rng) -> DivisorSequence {
    let mut prefix = vec![1i64];
    for _ in 0..rng.gen_range(0..=2) {
        let last = *prefix.last().expect("nonempty");
        prefix.push(last * rng.gen_range(2..=6));
    }
    let cycle: Vec<i64> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(2..=6)).collect();
    DivisorSequence::from_i64(&prefix, &cycle).expect("valid sequence")
}

#[derive(Clone, Debug, Serialize)]
pub struct AdicCase {
    pub base: DivisorSequence,
    pub values: Vec<i64>,
    /// Residues modulo `a_precision` given without a value.
    #[serde(serialize_with = "crate::fgab::ser::vec")]
    pub residues: Vec<BigInt>,
}

fn adic_values(c: &AdicCase, k: usize) -> Vec<AdicInteger> {
    let mut out: Vec<AdicInteger> = c.values.iter().map(|&v| AdicInteger::from_int(&c.base, v, k)).collect();
    out.extend(c.residues.iter().map(|r| AdicInteger::from_residue(&c.base, r, k)));
    out
}

/// Commutative-ring identities on residues, and recovery of integers.
pub fn check_adic_ring(c: &AdicCase, k: usize) -> Check {
    let xs = adic_values(c, k);
    let m = c.base.term(k);
    let eq = |a: &AdicInteger, b: &AdicInteger| a.residue().mod_floor(&m) == b.residue().mod_floor(&m);
    for x in &xs {
        for y in &xs {
            let s = x.add(y).map_err(err)?;
            ensure(eq(&s, &y.add(x).map_err(err)?), || "addition not commutative".into())?;
            ensure(eq(&s.sub(y).map_err(err)?, x), || "(x + y) − y differs from x".into())?;
            for z in &xs {
                let l = x.mul(&y.add(z).map_err(err)?).map_err(err)?;
                let r = x.mul(y).map_err(err)?.add(&x.mul(z).map_err(err)?).map_err(err)?;
                ensure(eq(&l, &r), || "distributivity fails".into())?;
                let l = x.add(y).map_err(err)?.add(z).map_err(err)?;
                let r = x.add(&y.add(z).map_err(err)?).map_err(err)?;
                ensure(eq(&l, &r), || "addition not associative".into())?;
            }
        }
        ensure(x.add(&x.neg()).map_err(err)?.residue().mod_floor(&m).is_zero(), || {
            "x + (−x) ≠ 0".into()
        })?;
    }
    for &v in &c.values {
        let x = AdicInteger::from_int(&c.base, v, k);
        ensure(x.integer_detect().map_err(err)? == Some(big(v)), || {
            format!("{v} not recovered")
        })?;
    }
    Ok(())
}

fn random_adic_case(rng: &mut ChaCha8Rng, k: usize) -> AdicCase {
    let base = random_divisors(rng);
    let m = base.term(k);
    let values = (0..3).map(|_| rng.gen_range(-1_000_000..=1_000_000)).collect();
    let residues = (0..2).map(|_| BigInt::from(rng.gen::<u64>()).mod_floor(&m)).collect();
    AdicCase { base, values, residues }
}

struct AdicRing(SuiteParams);

impl Suite for AdicRing {
    type Case = AdicCase;
    fn generate(&self, rng: &mut ChaCha8Rng) -> AdicCase {
        random_adic_case(rng, self.0.precision)
    }
    fn check(&self, c: &AdicCase) -> Check {
        check_adic_ring(c, self.0.precision)
    }
}

pub const SMALL_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// `q·y − x` is the reported integer modulo the modulus of `y`.
pub fn check_divisibility(x: &AdicInteger, q: u64) -> Check {
    let d = solve_divisibility(x, q).map_err(err)?;
    ensure(d.certified, || "not certified".into())?;
    let m = d.y.modulus();
    ensure(x.modulus().is_multiple_of(&m), || {
        "quotient is finer than the input".into()
    })?;
    let lhs = (d.y.residue() * BigInt::from(q) - x.residue()).mod_floor(&m);
    ensure(lhs == d.integer.mod_floor(&m), || {
        format!("q·y − x ≢ {} mod {m}", d.integer)
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisibilityCase {
    pub x: AdicInteger,
    pub q: u64,
}

struct AdicDivisibility(SuiteParams);

impl Suite for AdicDivisibility {
    type Case = DivisibilityCase;
    fn generate(&self, rng: &mut ChaCha8Rng) -> DivisibilityCase {
        let k = self.0.precision;
        let base = random_divisors(rng);
        let x = match rng.gen_range(0..3) {
            0 => AdicInteger::from_int(&base, rng.gen_range(-10_000i64..=10_000), k),
            1 => loop {
                let q = BigRational::new(big(rng.gen_range(-50..=50)), big(rng.gen_range(1..=30)));
                if let Ok(x) = AdicInteger::from_rational(&base, &q, k) {
                    break x;
                }
            },
            _ => AdicInteger::from_residue(&base, &BigInt::from(rng.gen::<u64>()).mod_floor(&base.term(k)), k),
        };
        DivisibilityCase {
            x,
            q: SMALL_PRIMES[rng.gen_range(0..SMALL_PRIMES.len())],
        }
    }
    fn check(&self, c: &DivisibilityCase) -> Check {
        check_divisibility(&c.x, c.q)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfiniteCase {
    pub chain: LatticeChain,
    #[serde(serialize_with = "crate::fgab::ser::vecs")]
    pub vectors: Vec<Vec<BigInt>>,
}

/// Reduction is additive, integers are recovered, and the odometer moves every
/// level-`m` residue when the step is outside `r_m`.
pub fn check_profinite(c: &ProfiniteCase, depth: usize) -> Check {
    let (u, v) = (&c.vectors[0], &c.vectors[1]);
    let sum: Vec<BigInt> = u.iter().zip(v).map(|(a, b)| a + b).collect();
    let ru = profinite_reduce(u, &c.chain, depth).map_err(err)?;
    let rv = profinite_reduce(v, &c.chain, depth).map_err(err)?;
    let lhs = profinite_reduce(&sum, &c.chain, depth).map_err(err)?;
    let rhs = profinite_add(&ru, &rv).map_err(err)?;
    for m in 0..=depth {
        ensure(lhs.residue(m).map_err(err)? == rhs.residue(m).map_err(err)?, || {
            format!("sum differs at level {m}")
        })?;
    }
    ensure(&ru.integer_detect().map_err(err)? == u, || {
        "integer not recovered".into()
    })?;
    let stepped = odometer_step(&ru, v).map_err(err)?;
    for m in 1..=depth {
        if !c.chain.lattice(m).contains(v) {
            ensure(stepped.residue(m).map_err(err)? != ru.residue(m).map_err(err)?, || {
                format!("odometer fixes a residue at level {m}")
            })?;
        }
    }
    Ok(())
}

pub fn random_chain(rng: &mut ChaCha8Rng) -> LatticeChain {
    let d = rng.gen_range(1..=2);
    let transitions = (0..rng.gen_range(0..=1)).map(|_| nonsingular(rng, d, 3)).collect();
    let cycle = vec![nonsingular(rng, d, 3)];
    LatticeChain::new(d, transitions, cycle).expect("nonsingular transitions")
}

struct Profinite(SuiteParams);

impl Suite for Profinite {
    type Case = ProfiniteCase;
    fn generate(&self, rng: &mut ChaCha8Rng) -> ProfiniteCase {
        let chain = random_chain(rng);
        let d = chain.dim();
        ProfiniteCase {
            vectors: (0..2).map(|_| random_vec(rng, d, 30)).collect(),
            chain,
        }
    }
    fn check(&self, c: &ProfiniteCase) -> Check {
        check_profinite(c, self.0.depth.min(6))
    }
}

/// Generators of a superlattice of `Z^d`: the unit vectors plus random rational vectors.
pub fn random_superlattice(rng: &mut ChaCha8Rng) -> Vec<Vec<BigRational>> {
    let d = rng.gen_range(1..=3);
    let mut gens: Vec<Vec<BigRational>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| BigRational::from_integer(big((i == j) as i64)))
                .collect()
        })
        .collect();
    for _ in 0..rng.gen_range(1..=2) {
        gens.push(
            (0..d)
                .map(|_| BigRational::new(big(rng.gen_range(-6..=6)), big(rng.gen_range(1..=6))))
                .collect(),
        );
    }
    gens
}

/// Index duality and box pairing checks for the dual of a superlattice.
pub fn check_dual(gens: &[Vec<BigRational>]) -> Check {
    let d = gens[0].len();
    let r = dual_lattice(d, gens).map_err(err)?;
    ensure(r.pairing_ok && r.involution_ok, || {
        "pairing or involution check failed".into()
    })?;
    let sup = oracles::superlattice_order(gens);
    let quo = oracles::dual_quotient_order(gens);
    ensure(r.superlattice_index == big(sup as i64), || {
        format!("[A : Z^d] = {} but closure gives {sup}", r.superlattice_index)
    })?;
    ensure(r.index == big(quo as i64), || {
        format!("[Z^d : A*] = {} but pairing patterns give {quo}", r.index)
    })?;
    ensure(sup == quo, || "index duality fails".into())?;
    let found: BTreeSet<Vec<i64>> = oracles::dual_by_search(gens, 4).into_iter().collect();
    for v in box_vectors(d, 4) {
        let vi: Vec<i64> = v.iter().map(|x| i64::try_from(x).expect("small")).collect();
        let inside = r.lattice.contains(&v);
        ensure(inside == found.contains(&vi), || {
            format!("{vi:?}: lattice says {inside}, pairing says {}", !inside)
        })?;
    }
    Ok(())
}

#[derive(Clone, Debug)]
struct RationalGens(Vec<Vec<BigRational>>);

impl Serialize for RationalGens {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Vec<String>> = self
            .0
            .iter()
            .map(|g| g.iter().map(|q| q.to_string()).collect())
            .collect();
        v.serialize(s)
    }
}

struct DualSuite;

impl Suite for DualSuite {
    type Case = RationalGens;
    fn generate(&self, rng: &mut ChaCha8Rng) -> RationalGens {
        RationalGens(random_superlattice(rng))
    }
    fn check(&self, c: &RationalGens) -> Check {
        check_dual(&c.0)
    }
}

pub fn powers_chain(p: u64) -> LatticeChain {
    LatticeChain::from_divisors(&DivisorSequence::powers(p))
}

/// Composites of certified homs are defined, multiply multipliers and stay continuous.
pub fn check_compose(
    r: &LatticeChain,
    l: &LatticeChain,
    m: &LatticeChain,
    p: SuiteParams,
    pick: (usize, usize),
) -> Check {
    let depth = p.depth.min(5);
    let bound = p.bound.min(2);
    let first = enumerate_trivial_homs(r, l, depth, bound).map_err(err)?;
    let second = enumerate_trivial_homs(l, m, depth, bound).map_err(err)?;
    if first.homs.is_empty() || second.homs.is_empty() {
        return Ok(());
    }
    let sigma: &TrivialHom = &first.homs[pick.0 % first.homs.len()].hom;
    let tau: &TrivialHom = &second.homs[pick.1 % second.homs.len()].hom;
    let c = compose(sigma, tau, r, l, depth).ok_or("composite not defined")?;
    let want = sigma.multiplier(r).mul(&tau.multiplier(l));
    ensure(c.multiplier(r) == want, || {
        format!("composite multiplier {} vs {want}", c.multiplier(r))
    })?;
    ensure(continuity_check(&c, r, m, depth).is_certified(), || {
        "composite not continuous".into()
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ComposeCase {
    pub primes: [u64; 3],
    pub pick: (usize, usize),
}

struct Compose(SuiteParams);

impl Suite for Compose {
    type Case = ComposeCase;
    fn generate(&self, rng: &mut ChaCha8Rng) -> ComposeCase {
        let choices = [2u64, 3, 4, 6];
        ComposeCase {
            primes: [0; 3].map(|_| choices[rng.gen_range(0..choices.len())]),
            pick: (rng.gen_range(0..16), rng.gen_range(0..16)),
        }
    }
    fn check(&self, c: &ComposeCase) -> Check {
        let [a, b, m] = c.primes.map(powers_chain);
        check_compose(&a, &b, &m, self.0, c.pick)
    }
}

/// The conjugacy verdict on one-dimensional chains agrees with the classification,
/// in both directions.
pub fn check_conjugacy(a: &DivisorSequence, b: &DivisorSequence, p: SuiteParams) -> Check {
    let (ra, rb) = (LatticeChain::from_divisors(a), LatticeChain::from_divisors(b));
    let homeo = classify_pair(a, b, p.prime_bound).map_err(err)?.homeomorphic;
    for (x, y) in [(&ra, &rb), (&rb, &ra)] {
        let r = chains_conjugate(x, y, p.depth, 1, p.prime_bound).map_err(err)?;
        let agrees = match r.verdict {
            Verdict::Conjugate => homeo,
            Verdict::NotConjugateAtDepth { .. } => !homeo,
            Verdict::Undecided { .. } => false,
        };
        ensure(agrees, || format!("verdict {:?} but homeomorphic = {homeo}", r.verdict))?;
    }
    Ok(())
}

struct Conjugacy(SuiteParams);

impl Suite for Conjugacy {
    type Case = (DivisorSequence, DivisorSequence);
    fn generate(&self, rng: &mut ChaCha8Rng) -> (DivisorSequence, DivisorSequence) {
        (random_divisors(rng), random_divisors(rng))
    }
    fn check(&self, (a, b): &(DivisorSequence, DivisorSequence)) -> Check {
        check_conjugacy(a, b, self.0)
    }
}

/// Descriptors of `0 → (Z, ×a) → (Z, id) → (Z/a_n) → 0` and the sample checks.
pub fn check_six_term(a: &DivisorSequence, p: SuiteParams, seed: u64) -> Check {
    let opts = LimitOptions {
        depth: p.depth,
        prime_bound: p.prime_bound,
    };
    let r = six_term(&canonical_sequence(a, p.depth), 5, seed, &opts).map_err(err)?;
    ensure(r.all_pass(), || "an exactness check failed".into())?;
    ensure(
        r.samples
            .iter()
            .all(|s| s.boundary_maps_to_shift && s.boundary_in_shift_image),
        || "a sample check failed".into(),
    )?;
    ensure(r.lim[0].group() == Some(FgGroup::zero()), || "lim A ≠ 0".into())?;
    ensure(r.lim[1].group() == Some(FgGroup::free(1)), || "lim B ≠ Z".into())?;
    ensure(r.lim1[1].is_zero(), || "lim¹ B ≠ 0".into())?;
    let s = supernatural_of(a, p.prime_bound).map_err(err)?;
    ensure(r.lim1[0].supernatural() == Some(&s), || {
        format!("lim¹ A should carry {s}")
    })?;
    ensure(r.lim1[2].is_zero(), || "lim¹ C ≠ 0".into())
}

struct SixTerm(SuiteParams);

impl Suite for SixTerm {
    type Case = (DivisorSequence, u64);
    fn generate(&self, rng: &mut ChaCha8Rng) -> (DivisorSequence, u64) {
        (random_divisors(rng), rng.gen())
    }
    fn check(&self, (a, seed): &(DivisorSequence, u64)) -> Check {
        check_six_term(a, self.0, *seed)
    }
}
