use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

pub const DEFAULT_PRIME_BOUND: u64 = 1_000_000;

/// Prime factorization of `|n|` by trial division up to `bound`.
///
/// Fails when a prime factor above `bound` remains.
pub fn factorize(n: &BigInt, bound: u64) -> Result<BTreeMap<u64, u32>> {
    let mut out = BTreeMap::new();
    if n.is_zero() {
        return Err(Error::Precondition("cannot factor zero".into()));
    }
    if let Some(small) = n.abs().to_u128() {
        let mut m = small;
        let mut p: u64 = 2;
        while (p as u128) * (p as u128) <= m && p <= bound {
            while m % p as u128 == 0 {
                *out.entry(p).or_insert(0) += 1;
                m /= p as u128;
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if m > 1 {
            let m_is_prime = (p as u128) * (p as u128) > m;
            if !m_is_prime || m > bound as u128 {
                return Err(Error::FactorBound {
                    value: n.clone(),
                    bound,
                });
            }
            *out.entry(m as u64).or_insert(0) += 1;
        }
        return Ok(out);
    }
    let mut m = n.abs();
    let mut p: u64 = 2;
    while p <= bound && !m.is_one() {
        let bp = BigInt::from(p);
        loop {
            let (q, r) = m.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            *out.entry(p).or_insert(0) += 1;
            m = q;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        return Err(Error::FactorBound {
            value: n.clone(),
            bound,
        });
    }
    Ok(out)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Exponent of `p` in `n` (`n ≠ 0`).
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    let bp = BigInt::from(p);
    let mut m = n.abs();
    let mut k = 0;
    while !m.is_zero() && m.is_multiple_of(&bp) {
        m /= &bp;
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorizations() {
        let f = factorize(&BigInt::from(360), 100).unwrap();
        assert_eq!(f.into_iter().collect::<Vec<_>>(), vec![(2, 3), (3, 2), (5, 1)]);
        assert!(factorize(&BigInt::from(1), 10).unwrap().is_empty());
        assert_eq!(factorize(&BigInt::from(97), 100).unwrap().len(), 1);
        assert!(factorize(&BigInt::from(101), 100).is_err());
        assert!(factorize(&BigInt::from(2 * 101), 10).is_err());
    }

    #[test]
    fn large_values() {
        let n = BigInt::from(2).pow(130) * BigInt::from(7);
        let f = factorize(&n, 10).unwrap();
        assert_eq!(f[&2], 130);
        assert_eq!(f[&7], 1);
    }
}
