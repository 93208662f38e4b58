//! `∩_n M^n Z^d` for a square integer matrix `M`, `d ≤ 4`.

use super::lattice::Lattice;
use super::matrix::IntMatrix;
use super::smith::kernel_lattice;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub const MAX_STABLE_DIM: usize = 4;

/// Integer polynomial, coefficients from degree 0 upward.
pub type Poly = Vec<BigInt>;

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Division by a monic polynomial; returns `None` when the remainder is nonzero.
fn div_exact_monic(a: &[BigInt], m: &[BigInt]) -> Option<Poly> {
    let dm = m.len() - 1;
    if a.len() < m.len() {
        return a.iter().all(Zero::is_zero).then(|| vec![BigInt::zero()]);
    }
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - dm];
    for k in (0..q.len()).rev() {
        let c = r[k + dm].clone();
        if !c.is_zero() {
            for (j, mj) in m.iter().enumerate() {
                r[k + j] -= &c * mj;
            }
        }
        q[k] = c;
    }
    r.iter().all(Zero::is_zero).then(|| trim(q))
}

/// Characteristic polynomial `det(xI − M)` by the Faddeev–LeVerrier recursion.
pub fn char_poly(m: &IntMatrix) -> Result<Poly> {
    if !m.is_square() {
        return Err(Error::Dimension(
            "characteristic polynomial of a non-square matrix".into(),
        ));
    }
    let n = m.rows();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut mk = IntMatrix::identity(n);
    for k in 1..=n {
        let am = m.mul(&mk)?;
        let tr: BigInt = (0..n).map(|i| am.get(i, i).clone()).sum();
        let ck = -tr / BigInt::from(k);
        c[n - k] = ck.clone();
        mk = am.add(&IntMatrix::scalar(n, ck))?;
    }
    Ok(c)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut i = BigInt::one();
    let r = n.sqrt();
    while i <= r {
        if (&n % &i).is_zero() {
            out.push(i.clone());
            let j = &n / &i;
            if j != i {
                out.push(j);
            }
        }
        i += 1;
    }
    out.sort();
    out
}

fn eval(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Factors a monic polynomial of degree at most 4 into monic irreducibles over `Z`.
pub fn factor_monic(p: &[BigInt]) -> Result<Vec<Poly>> {
    let p = trim(p.to_vec());
    let deg = p.len() - 1;
    if deg > MAX_STABLE_DIM {
        return Err(Error::UnsupportedDimension {
            dim: deg,
            max: MAX_STABLE_DIM,
        });
    }
    if !p[deg].is_one() {
        return Err(Error::Precondition("polynomial is not monic".into()));
    }
    let mut rest = p;
    let mut out = Vec::new();
    // Linear factors: integer roots divide the constant term.
    'outer: while rest.len() > 2 {
        let candidates = if rest[0].is_zero() {
            vec![BigInt::zero()]
        } else {
            divisors(&rest[0]).into_iter().flat_map(|d| [d.clone(), -d]).collect()
        };
        for r in candidates {
            if eval(&rest, &r).is_zero() {
                let lin = vec![-r, BigInt::one()];
                rest = div_exact_monic(&rest, &lin).expect("root gives exact division");
                out.push(lin);
                continue 'outer;
            }
        }
        break;
    }
    if rest.len() == 5 {
        if let Some((q1, q2)) = quadratic_split(&rest) {
            out.push(q1);
            out.push(q2);
            rest = vec![BigInt::one()];
        }
    }
    if rest.len() > 1 {
        out.push(rest);
    }
    Ok(out)
}

/// Splits a monic quartic without integer roots as `(x² + bx + c)(x² + ex + f)`.
fn quadratic_split(p: &[BigInt]) -> Option<(Poly, Poly)> {
    let a0 = &p[0];
    let p3 = &p[3];
    let p2 = &p[2];
    for d in divisors(a0) {
        for c in [d.clone(), -d] {
            let f = a0 / &c;
            // b + e = p3, b·e = p2 − c − f
            let s = p2 - &c - &f;
            let disc = p3 * p3 - BigInt::from(4) * &s;
            if disc.is_negative() {
                continue;
            }
            let r = disc.sqrt();
            if &r * &r != disc || !(p3 + &r).is_even() {
                continue;
            }
            for b in [(p3 + &r) / BigInt::from(2), (p3 - &r) / BigInt::from(2)] {
                let e = p3 - &b;
                let q1 = vec![c.clone(), b.clone(), BigInt::one()];
                let q2 = vec![f.clone(), e, BigInt::one()];
                if poly_mul(&q1, &q2) == p {
                    return Some((q1, q2));
                }
            }
        }
    }
    None
}

pub fn eval_matrix(p: &[BigInt], m: &IntMatrix) -> Result<IntMatrix> {
    let n = m.rows();
    let mut acc = IntMatrix::zeros(n, n);
    for c in p.iter().rev() {
        acc = acc.mul(m)?.add(&IntMatrix::scalar(n, c.clone()))?;
    }
    Ok(acc)
}

/// `∩_n M^n Z^d`, computed as `M^d Z^d ∩ ker f(M)` where `f` collects the
/// irreducible factors of the characteristic polynomial with constant term ±1.
pub fn stable_sublattice(m: &IntMatrix) -> Result<Lattice> {
    if !m.is_square() {
        return Err(Error::Dimension("stable sublattice of a non-square matrix".into()));
    }
    let d = m.rows();
    if d > MAX_STABLE_DIM {
        return Err(Error::UnsupportedDimension {
            dim: d,
            max: MAX_STABLE_DIM,
        });
    }
    let factors = factor_monic(&char_poly(m)?)?;
    let f = factors
        .iter()
        .filter(|q| q[0].magnitude().is_one())
        .fold(vec![BigInt::one()], |acc, q| poly_mul(&acc, q));
    let ker = kernel_lattice(&eval_matrix(&f, m)?);
    let range = Lattice::column_span(&m.pow(d as u32)?);
    range.intersect(&ker)
}
