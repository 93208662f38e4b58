use super::tower::{Tower, TowerElement};
use crate::error::{Error, Result};
use crate::fgab::{ser, Lattice};
use num_bigint::BigInt;
use serde::Serialize;

/// A compatible family of cosets `x_n + ran(p_{s,n+1})` in `A_s`, `n = s..depth`,
/// each given by its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetChain {
    pub start: usize,
    #[serde(serialize_with = "ser::vecs")]
    pub representatives: Vec<Vec<BigInt>>,
}

impl CosetChain {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// Each representative reduces to the previous one modulo the coarser subgroup.
    pub fn is_compatible(&self, t: &Tower) -> Result<bool> {
        for (i, w) in self.representatives.windows(2).enumerate() {
            let coarse = t.range(self.start, self.start + i + 1)?;
            if coarse.reduce(&w[1])? != w[0] {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn check_depth(t: &Tower, depth: usize) -> Result<()> {
    match t.available() {
        Some(k) if depth + 1 > k => Err(Error::Depth {
            requested: depth + 1,
            available: k,
        }),
        _ => Ok(()),
    }
}

fn moduli(t: &Tower, s: usize, depth: usize) -> Result<Vec<Lattice>> {
    (s..depth).map(|n| t.range(s, n + 1)).collect()
}

/// `η_s(x)` truncated: the images of `x ∈ A_s` in `A_s / ran(p_{s,n+1})` for `n < depth`.
pub fn eta(t: &Tower, s: usize, x: &[BigInt], depth: usize) -> Result<CosetChain> {
    check_depth(t, depth)?;
    t.group(s)?.check(x)?;
    let representatives = moduli(t, s, depth)?
        .iter()
        .map(|m| m.reduce(x))
        .collect::<Result<Vec<_>>>()?;
    Ok(CosetChain {
        start: s,
        representatives,
    })
}

/// Digits `c_{k,n}` of `x ∈ A_k` for `n = k..depth`, read off with the canonical
/// transversals of `A_n / ran(p_{n+1})`.
pub fn digits(t: &Tower, k: usize, x: &[BigInt], depth: usize) -> Result<Vec<Vec<BigInt>>> {
    check_depth(t, depth)?;
    let mut r = t.group(k)?.reduce(x);
    let mut out = Vec::with_capacity(depth.saturating_sub(k));
    for n in k..depth {
        let c = t.range(n, n + 1)?.reduce(&r)?;
        let g = t.group(n)?;
        let diff = g.sub(&r, &c);
        out.push(c);
        if n + 1 < depth {
            r = t
                .map(n)?
                .preimage(&diff)?
                .ok_or_else(|| Error::Precondition(format!("digit remainder at level {n} is not in the image")))?;
            r = t.group(n + 1)?.reduce(&r);
        }
    }
    Ok(out)
}

/// The truncated reduction `f_s(b)`: digits of every `b_k`, `k ≥ s`, summed along
/// diagonals and pushed down to `A_s`.
pub fn e0_reduce(t: &Tower, b: &TowerElement, s: usize, depth: usize) -> Result<CosetChain> {
    check_depth(t, depth)?;
    if s >= depth {
        return Ok(CosetChain {
            start: s,
            representatives: Vec::new(),
        });
    }
    let digit_rows = (s..depth)
        .map(|k| {
            let g = t.group(k)?;
            digits(t, k, &b.coord(k, g.ngens()), depth)
        })
        .collect::<Result<Vec<_>>>()?;
    let gs = t.group(s)?;
    let mut acc = gs.zero_elem();
    let mut representatives = Vec::with_capacity(depth - s);
    for (i, m) in moduli(t, s, depth)?.iter().enumerate() {
        let n = s + i;
        let gn = t.group(n)?;
        let mut d = gn.zero_elem();
        for (j, row) in digit_rows[..=i].iter().enumerate() {
            d = gn.add(&d, &row[i - j]);
        }
        acc = gs.add(&acc, &t.composite(s, n)?.apply(&d)?);
        representatives.push(m.reduce(&acc)?);
    }
    Ok(CosetChain {
        start: s,
        representatives,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::{bigs, FgGroup, IntMatrix};
    use crate::towers::shift_apply;

    #[test]
    fn zero_reduces_to_zero() {
        let t = Tower::multiplication(2);
        let b = TowerElement::from_i64(&[[0], [0], [0]]);
        let r = e0_reduce(&t, &b, 0, 5).unwrap();
        assert!(r.representatives.iter().all(|x| x == &bigs(&[0])));
    }

    #[test]
    fn binary_digits() {
        let t = Tower::multiplication(2);
        let d = digits(&t, 0, &bigs(&[11]), 5).unwrap();
        assert_eq!(d, vec![bigs(&[1]), bigs(&[1]), bigs(&[0]), bigs(&[1]), bigs(&[0])]);
        let d = digits(&t, 0, &bigs(&[-1]), 4).unwrap();
        assert_eq!(d, vec![bigs(&[1]); 4]);
    }

    #[test]
    fn matches_eta_on_images() {
        let towers = [
            Tower::multiplication(2),
            Tower::multiplication(6),
            Tower::periodic(FgGroup::free(2), vec![IntMatrix::diag(&[2, 3])]).unwrap(),
        ];
        for t in &towers {
            let g = t.group(0).unwrap().ngens();
            let prefix: Vec<Vec<i64>> = (0..5)
                .map(|n| (0..g).map(|j| n as i64 * 7 - 13 + j as i64).collect())
                .collect();
            let a = TowerElement::from_i64(&prefix);
            let b = shift_apply(t, &a).unwrap();
            for s in 0..5 {
                let lhs = e0_reduce(t, &b, s, 8).unwrap();
                let rhs = eta(t, s, &a.coord(s, g), 8).unwrap();
                assert_eq!(lhs, rhs);
                assert!(lhs.is_compatible(t).unwrap());
            }
        }
    }

    #[test]
    fn ones_found_by_search() {
        let t = Tower::multiplication(2);
        let b = TowerElement::from_i64(&[[1], [1], [1], [1]]);
        let depth = 6;
        let r = e0_reduce(&t, &b, 0, depth).unwrap();
        let mut found = Vec::new();
        for code in 0..16i64.pow(4) {
            let a: Vec<i64> = (0..4).map(|i| (code >> (4 * i)) & 15).collect();
            let b_ok = (0..4).all(|n| a[n] - 2 * a.get(n + 1).copied().unwrap_or(0) == 1);
            if b_ok {
                found.push(a[0]);
            }
        }
        assert_eq!(found, vec![15]);
        assert_eq!(r, eta(&t, 0, &bigs(&[15]), depth).unwrap());
    }

    #[test]
    fn depth_checked() {
        let t = Tower::new(
            vec![FgGroup::free(1); 2],
            vec![IntMatrix::from_i64(&[[2]])],
            crate::towers::Tail::None,
        )
        .unwrap();
        let b = TowerElement::from_i64(&[[1]]);
        assert!(e0_reduce(&t, &b, 0, 5).is_err());
    }
}
