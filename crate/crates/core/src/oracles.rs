//! Brute-force reference computations. Nothing here calls the normal-form
//! kernels, so these routines can be used to cross-check them.

use crate::fgab::IntMatrix;
use crate::simplicial::SimplicialComplex;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeSet, VecDeque};

/// Determinant by cofactor expansion along the first row.
pub fn det_expand(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    match n {
        0 => BigInt::one(),
        1 => rows[0][0].clone(),
        _ => {
            let mut acc = BigInt::zero();
            for j in 0..n {
                if rows[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<BigInt>> = rows[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = &rows[0][j] * det_expand(&minor);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `gcd` of all `k×k` minors.
pub fn determinantal_divisor(a: &IntMatrix, k: usize) -> BigInt {
    let rows = subsets(a.rows(), k);
    let cols = subsets(a.cols(), k);
    let mut g = BigInt::zero();
    for r in &rows {
        for c in &cols {
            let m: Vec<Vec<BigInt>> = r
                .iter()
                .map(|&i| c.iter().map(|&j| a.get(i, j).clone()).collect())
                .collect();
            g = g.gcd(&det_expand(&m));
        }
    }
    g
}

/// Nonzero invariant factors `D_k / D_{k−1}` from the determinantal divisors.
pub fn determinantal_invariants(a: &IntMatrix) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=a.rows().min(a.cols()) {
        let dk = determinantal_divisor(a, k);
        if dk.is_zero() {
            break;
        }
        out.push(&dk / &prev);
        prev = dk;
    }
    out
}

/// Some `x` with `|x_i| ≤ radius` and `A x = b`.
pub fn solve_in_box(a: &IntMatrix, b: &[BigInt], radius: i64) -> Option<Vec<BigInt>> {
    let n = a.cols();
    let side = (2 * radius + 1) as u64;
    (0..side.pow(n as u32)).find_map(|mut code| {
        let x: Vec<BigInt> = (0..n)
            .map(|_| {
                let e = (code % side) as i64 - radius;
                code /= side;
                BigInt::from(e)
            })
            .collect();
        (a.mul_vec(&x).ok()? == b).then_some(x)
    })
}

/// Rank over `Q` by fraction-free elimination.
pub fn rank_q(a: &IntMatrix) -> usize {
    rank_generic(a.to_rows(), |x| x.is_zero(), |p, q, r, s| p * s - q * r)
}

/// Rank over `F_p`.
pub fn rank_mod_p(a: &IntMatrix, p: u64) -> usize {
    let p = BigInt::from(p);
    let rows = a
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.mod_floor(&p)).collect())
        .collect();
    rank_generic(rows, |x| x.is_zero(), |a, b, c, d| (a * d - b * c).mod_floor(&p))
}

fn rank_generic(
    mut rows: Vec<Vec<BigInt>>,
    zero: impl Fn(&BigInt) -> bool,
    eliminate: impl Fn(&BigInt, &BigInt, &BigInt, &BigInt) -> BigInt,
) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(rank, p);
        for i in rank + 1..rows.len() {
            if zero(&rows[i][c]) {
                continue;
            }
            let (pivot, lead) = (rows[rank][c].clone(), rows[i][c].clone());
            for j in 0..ncols {
                let v = eliminate(&pivot, &lead, &rows[rank][j], &rows[i][j]);
                rows[i][j] = v;
            }
        }
        rank += 1;
    }
    rank
}

fn boundary(k: &SimplicialComplex, n: usize) -> IntMatrix {
    let rows = if n == 0 { 0 } else { k.num_faces(n - 1) };
    let mut m = IntMatrix::zeros(rows, k.num_faces(n));
    if n == 0 {
        return m;
    }
    for (j, s) in k.faces(n).iter().enumerate() {
        for i in 0..s.len() {
            let mut f = s.to_vec();
            f.remove(i);
            let r = k.face_index(&f).expect("faces are closed under removal");
            m.set(r, j, if i % 2 == 0 { 1 } else { -1 });
        }
    }
    m
}

/// Betti number over `Q` (`p = None`) or `F_p`, unreduced.
pub fn betti(k: &SimplicialComplex, n: usize, p: Option<u64>) -> usize {
    let rank = |m: &IntMatrix| {
        if m.rows() == 0 || m.cols() == 0 {
            0
        } else {
            match p {
                None => rank_q(m),
                Some(p) => rank_mod_p(m, p),
            }
        }
    };
    k.num_faces(n) - rank(&boundary(k, n)) - rank(&boundary(k, n + 1))
}

/// Number of `p`-primary cyclic summands of `H_n`, from the universal coefficient
/// theorem: `dim H_n(F_p) = b_n + t_n + t_{n−1}`.
pub fn torsion_summands(k: &SimplicialComplex, n: usize, p: u64) -> usize {
    let mut t_prev = 0;
    let mut t = 0;
    for m in 0..=n {
        t = betti(k, m, Some(p)) - betti(k, m, None) - t_prev;
        t_prev = t;
    }
    t
}

/// The subgroup of `(Z/k)^e` generated by `gens`, by breadth-first closure.
pub fn subgroup_mod(gens: &[Vec<BigInt>], k: i64, e: usize) -> BTreeSet<Vec<i64>> {
    let kb = BigInt::from(k);
    let gens: Vec<Vec<i64>> = gens
        .iter()
        .map(|g| {
            g.iter()
                .map(|x| x.mod_floor(&kb).to_i64().expect("small modulus"))
                .collect()
        })
        .collect();
    let zero = vec![0i64; e];
    let mut seen = BTreeSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y: Vec<i64> = x.iter().zip(g).map(|(a, b)| (a + b).rem_euclid(k)).collect();
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// `∩_n (φ M^n Z^d + k Z^e)`, computed in `(Z/k)^e`: the chain `M^n (Z/k)^d` is run
/// until it repeats, and its last term is pushed forward.
pub fn stabilized_image_mod(phi: &IntMatrix, m: &IntMatrix, k: i64) -> BTreeSet<Vec<i64>> {
    let d = m.rows();
    let mut p = IntMatrix::identity(d);
    let mut current = subgroup_mod(&p.to_cols(), k, d);
    loop {
        let next_p = m.mul(&p).expect("square");
        let next = subgroup_mod(&next_p.to_cols(), k, d);
        if next == current {
            break;
        }
        p = next_p;
        current = next;
    }
    subgroup_mod(&phi.mul(&p).expect("shapes").to_cols(), k, phi.rows())
}

/// Integer vectors `g` in the box `|g_i| ≤ radius` pairing integrally with every generator.
pub fn dual_by_search(gens: &[Vec<BigRational>], radius: i64) -> Vec<Vec<i64>> {
    let d = gens.first().map_or(0, Vec::len);
    let side = (2 * radius + 1) as u64;
    (0..side.pow(d as u32))
        .map(|mut code| {
            (0..d)
                .map(|_| {
                    let e = (code % side) as i64 - radius;
                    code /= side;
                    e
                })
                .collect::<Vec<i64>>()
        })
        .filter(|g| pairs_integrally(gens, g))
        .collect()
}

pub fn pairs_integrally(gens: &[Vec<BigRational>], g: &[i64]) -> bool {
    gens.iter().all(|x| {
        x.iter()
            .zip(g)
            .fold(BigRational::zero(), |s, (a, b)| {
                s + a * BigRational::from_integer(BigInt::from(*b))
            })
            .is_integer()
    })
}

/// `|A / Z^d|` by closing the generators modulo `Z^d`.
pub fn superlattice_order(gens: &[Vec<BigRational>]) -> usize {
    let frac = |v: &[BigRational]| -> Vec<BigRational> { v.iter().map(|q| q - q.floor()).collect() };
    let d = gens.first().map_or(0, Vec::len);
    let zero = vec![BigRational::zero(); d];
    let gens: Vec<Vec<BigRational>> = gens.iter().map(|g| frac(g)).collect();
    let mut seen = BTreeSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y: Vec<BigRational> = frac(&x.iter().zip(g).map(|(a, b)| a + b).collect::<Vec<_>>());
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.len()
}

/// `|Z^d / A*|` as the number of pairing patterns `g ↦ (⟨x, g⟩ mod 1)_x`,
/// closed from the patterns of the unit vectors.
pub fn dual_quotient_order(gens: &[Vec<BigRational>]) -> usize {
    let d = gens.first().map_or(0, Vec::len);
    let frac = |q: BigRational| &q - q.floor();
    let units: Vec<Vec<BigRational>> = (0..d)
        .map(|i| gens.iter().map(|x| frac(x[i].clone())).collect())
        .collect();
    let zero = vec![BigRational::zero(); gens.len()];
    let mut seen = BTreeSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(p) = queue.pop_front() {
        for u in &units {
            let q: Vec<BigRational> = p.iter().zip(u).map(|(a, b)| frac(a + b)).collect();
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen.len()
}

/// Greedy mixed-radix digits of `n mod a_K` for `a = (1, a_1, ..., a_K)`.
pub fn greedy_digits(n: i128, terms: &[i128]) -> Vec<i128> {
    let top = *terms.last().expect("nonempty");
    let mut r = n.rem_euclid(top);
    let mut out = Vec::with_capacity(terms.len() - 1);
    for w in terms.windows(2) {
        let digit = (r % w[1]) / w[0];
        out.push(digit);
        r -= digit * w[0];
    }
    out
}

/// `∩_n M^n Z^d` restricted to a coordinate box, for `n ≤ steps`, by testing membership
/// of each box vector with rational solves.
pub fn stable_box(m: &IntMatrix, steps: u32, radius: i64) -> Vec<Vec<i64>> {
    let d = m.rows();
    let powers: Vec<IntMatrix> = (1..=steps).map(|n| m.pow(n).expect("square")).collect();
    let side = (2 * radius + 1) as u64;
    (0..side.pow(d as u32))
        .map(|mut code| {
            (0..d)
                .map(|_| {
                    let e = (code % side) as i64 - radius;
                    code /= side;
                    e
                })
                .collect::<Vec<i64>>()
        })
        .filter(|v| {
            let b: Vec<BigInt> = v.iter().map(|&x| x.into()).collect();
            powers.iter().all(|p| integral_preimage(p, &b))
        })
        .collect()
}

/// Whether `A x = b` has an integer solution, for square `A` with an arbitrary
/// rank, decided by enumerating `x` on a box around the rational solution set.
fn integral_preimage(a: &IntMatrix, b: &[BigInt]) -> bool {
    let det = det_expand(&a.to_rows());
    if !det.is_zero() {
        let x = cramer(a, b, &det);
        return x.iter().all(|q| q.is_integer());
    }
    solve_in_box(a, b, 12).is_some()
}

fn cramer(a: &IntMatrix, b: &[BigInt], det: &BigInt) -> Vec<BigRational> {
    let n = a.rows();
    (0..n)
        .map(|j| {
            let rows: Vec<Vec<BigInt>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|c| if c == j { b[i].clone() } else { a.get(i, c).clone() })
                        .collect()
                })
                .collect();
            BigRational::new(det_expand(&rows), det.clone())
        })
        .collect()
}

/// `|x|` of the largest entry, used to keep random inputs honest.
pub fn max_abs(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::bigs;

    #[test]
    fn determinantal_examples() {
        assert_eq!(determinantal_invariants(&IntMatrix::diag(&[2, 3])), bigs(&[1, 6]));
        assert_eq!(determinantal_invariants(&IntMatrix::from_i64(&[[0]])), bigs(&[]));
        assert_eq!(
            determinantal_invariants(&IntMatrix::from_i64(&[[2, 1], [0, 2]])),
            bigs(&[1, 4])
        );
    }

    #[test]
    fn homology_by_ranks() {
        let rp2 = SimplicialComplex::projective_plane();
        assert_eq!(betti(&rp2, 1, None), 0);
        assert_eq!(torsion_summands(&rp2, 1, 2), 1);
        assert_eq!(torsion_summands(&rp2, 2, 2), 0);
        assert_eq!(betti(&SimplicialComplex::sphere(2), 2, None), 1);
    }

    #[test]
    fn dual_counts() {
        let q = |p: i64, d: i64| BigRational::new(p.into(), d.into());
        let gens = vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)], vec![q(1, 2), q(1, 2)]];
        assert_eq!(superlattice_order(&gens), 2);
        assert_eq!(dual_quotient_order(&gens), 2);
        assert!(dual_by_search(&gens, 2).iter().all(|g| (g[0] + g[1]) % 2 == 0));
    }

    #[test]
    fn digits_and_boxes() {
        assert_eq!(greedy_digits(5, &[1, 2, 6, 24]), vec![1, 2, 0]);
        assert_eq!(greedy_digits(-1, &[1, 2, 4, 8]), vec![1, 1, 1]);
        let s = stable_box(&IntMatrix::diag(&[2, 1]), 10, 3);
        assert!(s.iter().all(|v| v[0] == 0) && s.len() == 7);
    }
}
