use crate::error::{Error, Result};
use crate::fgab::ser;
use crate::steinitz::{is_prime, DivisorSequence, DEFAULT_PRIME_BOUND};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use std::fmt;

/// What the digits past the precision look like.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AdicTail {
    /// A non-negative integer.
    Zero,
    /// A negative integer: eventually maximal digits.
    Max,
    /// A non-integral rational: eventually periodic digits.
    Periodic,
    /// Only the residue modulo `a_K` is known.
    Unknown,
}

/// Element of `Z_a = lim Z/a_i` written `Σ x_i a_i` with `0 ≤ x_i < a_{i+1}/a_i`,
/// known to precision `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdicInteger {
    base: DivisorSequence,
    digits: Vec<BigInt>,
    value: Option<BigRational>,
}

pub(crate) fn mod_inverse(x: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let g = x.extended_gcd(m);
    g.gcd.is_one().then(|| g.x.mod_floor(m))
}

fn digits_of_residue(base: &DivisorSequence, r: &BigInt, k: usize) -> Vec<BigInt> {
    (0..k).map(|i| (r / base.term(i)).mod_floor(&base.ratio(i))).collect()
}

impl AdicInteger {
    fn from_parts(base: &DivisorSequence, residue: &BigInt, k: usize, value: Option<BigRational>) -> Self {
        let r = residue.mod_floor(&base.term(k));
        AdicInteger {
            digits: digits_of_residue(base, &r, k),
            base: base.clone(),
            value,
        }
    }

    pub fn from_int(base: &DivisorSequence, n: impl Into<BigInt>, k: usize) -> Self {
        let n = n.into();
        Self::from_parts(base, &n, k, Some(BigRational::from_integer(n.clone())))
    }

    /// `u/v` with `v` prime to every `a_i`.
    pub fn from_rational(base: &DivisorSequence, q: &BigRational, k: usize) -> Result<Self> {
        let den = q.denom();
        let coprime = den.gcd(&base.term(base.tail_start())).is_one() && den.gcd(&base.cycle_product()).is_one();
        if !coprime {
            return Err(Error::Precondition(format!(
                "{q} is not in the completion: its denominator meets the base"
            )));
        }
        let m = base.term(k);
        let inv = mod_inverse(den, &m).expect("coprime denominator");
        Ok(Self::from_parts(base, &(q.numer() * inv), k, Some(q.clone())))
    }

    /// Only the residue modulo `a_k` is known.
    pub fn from_residue(base: &DivisorSequence, r: &BigInt, k: usize) -> Self {
        Self::from_parts(base, r, k, None)
    }

    /// Digits with a zero or maximal tail.
    pub fn from_digits(base: &DivisorSequence, digits: &[BigInt], tail: AdicTail) -> Result<Self> {
        let k = digits.len();
        for (i, x) in digits.iter().enumerate() {
            if x.is_negative() || x >= &base.ratio(i) {
                return Err(Error::Precondition(format!(
                    "digit {i} is {x}, outside 0..{}",
                    base.ratio(i)
                )));
            }
        }
        let r: BigInt = digits.iter().enumerate().map(|(i, x)| x * base.term(i)).sum();
        let v = match tail {
            AdicTail::Zero => r,
            AdicTail::Max => r - base.term(k),
            _ => return Ok(Self::from_residue(base, &r, k)),
        };
        Ok(Self::from_int(base, v, k))
    }

    pub fn base(&self) -> &DivisorSequence {
        &self.base
    }

    pub fn precision(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[BigInt] {
        &self.digits
    }

    /// Exact rational value when the tail follows a rule.
    pub fn value(&self) -> Option<&BigRational> {
        self.value.as_ref()
    }

    /// `Σ_{i<K} x_i a_i`, the residue modulo `a_K`.
    pub fn residue(&self) -> BigInt {
        self.digits.iter().enumerate().map(|(i, x)| x * self.base.term(i)).sum()
    }

    pub fn modulus(&self) -> BigInt {
        self.base.term(self.precision())
    }

    pub fn tail(&self) -> AdicTail {
        match &self.value {
            None => AdicTail::Unknown,
            Some(v) if !v.is_integer() => AdicTail::Periodic,
            Some(v) if v.is_negative() => AdicTail::Max,
            Some(_) => AdicTail::Zero,
        }
    }

    /// The same element at a lower precision.
    pub fn truncate(&self, k: usize) -> Self {
        let k = k.min(self.precision());
        AdicInteger {
            base: self.base.clone(),
            digits: self.digits[..k].to_vec(),
            value: self.value.clone(),
        }
    }

    fn check(&self, other: &AdicInteger) -> Result<()> {
        if self.base != other.base {
            return Err(Error::Precondition("adic integers over different bases".into()));
        }
        if self.precision() != other.precision() {
            return Err(Error::Precision(self.precision(), other.precision()));
        }
        Ok(())
    }

    fn combine(
        &self,
        other: &AdicInteger,
        r: impl Fn(&BigInt, &BigInt) -> BigInt,
        v: impl Fn(&BigRational, &BigRational) -> BigRational,
    ) -> Result<Self> {
        self.check(other)?;
        let value = match (&self.value, &other.value) {
            (Some(a), Some(b)) => Some(v(a, b)),
            _ => None,
        };
        Ok(Self::from_parts(
            &self.base,
            &r(&self.residue(), &other.residue()),
            self.precision(),
            value,
        ))
    }

    pub fn add(&self, other: &AdicInteger) -> Result<Self> {
        self.combine(other, |a, b| a + b, |a, b| a + b)
    }

    pub fn sub(&self, other: &AdicInteger) -> Result<Self> {
        self.combine(other, |a, b| a - b, |a, b| a - b)
    }

    pub fn mul(&self, other: &AdicInteger) -> Result<Self> {
        self.combine(other, |a, b| a * b, |a, b| a * b)
    }

    pub fn neg(&self) -> Self {
        Self::from_parts(
            &self.base,
            &-self.residue(),
            self.precision(),
            self.value.as_ref().map(|v| -v),
        )
    }

    /// The integer this element equals, `None` if it is not an integer, and an
    /// error when the tail is not known.
    pub fn integer_detect(&self) -> Result<Option<BigInt>> {
        match &self.value {
            None => Err(Error::Undecidable(format!(
                "digits beyond precision {} are unknown",
                self.precision()
            ))),
            Some(v) => Ok(v.is_integer().then(|| v.to_integer())),
        }
    }
}

impl fmt::Display for AdicInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.digits.iter().map(|x| x.to_string()).collect();
        write!(f, "({}", d.join(", "))?;
        match self.tail() {
            AdicTail::Zero => write!(f, ", 0, ...)"),
            AdicTail::Max => write!(f, ", max, ...)"),
            AdicTail::Periodic => write!(f, ", ...) = {}", self.value.as_ref().expect("rule tail")),
            AdicTail::Unknown => write!(f, ", ?)"),
        }
    }
}

impl Serialize for AdicInteger {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            base: &'a DivisorSequence,
            precision: usize,
            #[serde(serialize_with = "ser::vec")]
            digits: &'a [BigInt],
            tail: AdicTail,
            #[serde(skip_serializing_if = "Option::is_none")]
            value: Option<String>,
        }
        Repr {
            base: &self.base,
            precision: self.precision(),
            digits: &self.digits,
            tail: self.tail(),
            value: self.value.as_ref().map(|v| v.to_string()),
        }
        .serialize(s)
    }
}

/// `y` with `q·y − x` an integer, and that integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Divisibility {
    pub y: AdicInteger,
    #[serde(serialize_with = "ser::int")]
    pub integer: BigInt,
    /// Index `j` of the re-indexed sequence `(1, q, a_j, a_{j+1}, ...)`, if used.
    pub reindexed_at: Option<usize>,
    /// `q·y − x` matches the integer at `y`'s precision, digit by digit.
    pub certified: bool,
}

fn index_divisible_by(base: &DivisorSequence, q: &BigInt) -> Option<usize> {
    let end = base.tail_start() + base.cycle().len();
    (0..=end).find(|&i| base.term(i).is_multiple_of(q))
}

/// Divides `x` by the prime `q` modulo the integers.
///
/// When `q` divides some `a_i` the sequence is replaced by the equivalent
/// `(1, q, a_j, ...)` and `y = x_1 + x_2 (b_2/q) + ...` is read off the digits of `x`
/// there; otherwise `y = x/q`.
pub fn solve_divisibility(x: &AdicInteger, q: u64) -> Result<Divisibility> {
    if !is_prime(q) {
        return Err(Error::Precondition(format!("{q} is not prime")));
    }
    if q > DEFAULT_PRIME_BOUND {
        return Err(Error::FactorBound {
            value: q.into(),
            bound: DEFAULT_PRIME_BOUND,
        });
    }
    let base = x.base();
    let k = x.precision();
    let bq = BigInt::from(q);
    let xr = x.residue();
    let (y, integer, reindexed_at) = match index_divisible_by(base, &bq) {
        None => {
            let inv = mod_inverse(&bq, &x.modulus()).expect("q is prime to the base");
            let value = x.value().map(|v| v / BigRational::from_integer(bq.clone()));
            (
                AdicInteger::from_parts(base, &(&xr * inv), k, value),
                BigInt::zero(),
                None,
            )
        }
        Some(j) => {
            if k < j {
                return Err(Error::Precision(k, j));
            }
            let x0 = xr.mod_floor(&bq);
            let y = match x.value() {
                Some(v) => {
                    let yv = (v - BigRational::from_integer(x0.clone())) / BigRational::from_integer(bq.clone());
                    AdicInteger::from_rational(base, &yv, k)?
                }
                None => {
                    let m = x.modulus();
                    let ky = (0..=k)
                        .rev()
                        .find(|&i| m.is_multiple_of(&(base.term(i) * &bq)))
                        .unwrap_or(0);
                    AdicInteger::from_residue(base, &((&xr - &x0) / &bq), ky)
                }
            };
            (y, -x0, Some(j))
        }
    };
    let ky = y.precision();
    let m = base.term(ky);
    let lhs = (&bq * y.residue() - x.truncate(ky).residue()).mod_floor(&m);
    let mut certified = lhs == integer.mod_floor(&m);
    if let (Some(yv), Some(xv)) = (y.value(), x.value()) {
        certified &= yv * BigRational::from_integer(bq.clone()) - xv == BigRational::from_integer(integer.clone());
    }
    Ok(Divisibility {
        y,
        integer,
        reindexed_at,
        certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::bigs;

    fn two() -> DivisorSequence {
        DivisorSequence::powers(2)
    }

    #[test]
    fn from_int_digits() {
        let m = AdicInteger::from_int(&two(), -1, 5);
        assert_eq!(m.digits(), &bigs(&[1, 1, 1, 1, 1])[..]);
        assert_eq!(m.tail(), AdicTail::Max);
        let fact = DivisorSequence::from_i64(&[1, 2, 6], &[4]).unwrap();
        assert_eq!(AdicInteger::from_int(&fact, 5, 3).digits(), &bigs(&[1, 2, 0])[..]);
        let z = AdicInteger::from_int(&two(), 1, 5).add(&m).unwrap();
        assert_eq!(z, AdicInteger::from_int(&two(), 0, 5));
        assert_eq!(
            AdicInteger::from_int(&two(), -7, 6).integer_detect().unwrap(),
            Some(BigInt::from(-7))
        );
    }

    #[test]
    fn digits_round_trip() {
        let x = AdicInteger::from_digits(&two(), &bigs(&[1, 0, 0, 1]), AdicTail::Max).unwrap();
        assert_eq!(x.integer_detect().unwrap(), Some(BigInt::from(9 - 16)));
        assert!(AdicInteger::from_digits(&two(), &bigs(&[2]), AdicTail::Zero).is_err());
        let u = AdicInteger::from_digits(&two(), &bigs(&[1, 1]), AdicTail::Unknown).unwrap();
        assert!(u.integer_detect().is_err());
    }

    #[test]
    fn precision_mismatch() {
        let a = AdicInteger::from_int(&two(), 1, 5);
        let b = AdicInteger::from_int(&two(), 1, 4);
        assert_eq!(a.add(&b), Err(Error::Precision(5, 4)));
    }

    #[test]
    fn rationals() {
        let third = BigRational::new(1.into(), 3.into());
        let x = AdicInteger::from_rational(&two(), &third, 6).unwrap();
        let three = AdicInteger::from_int(&two(), 3, 6);
        assert_eq!(x.mul(&three).unwrap(), AdicInteger::from_int(&two(), 1, 6));
        assert_eq!(x.tail(), AdicTail::Periodic);
        assert!(AdicInteger::from_rational(&two(), &BigRational::new(1.into(), 2.into()), 3).is_err());
    }

    #[test]
    fn divisibility_examples() {
        let one = AdicInteger::from_int(&two(), 1, 5);
        let d = solve_divisibility(&one, 3).unwrap();
        assert_eq!(d.y.residue(), BigInt::from(11));
        assert!(d.certified && d.integer.is_zero());
        let d = solve_divisibility(&one, 2).unwrap();
        assert!(d.certified);
        assert_eq!(d.integer, BigInt::from(-1));
        assert_eq!(d.reindexed_at, Some(1));
        let zero = AdicInteger::from_int(&two(), 0, 5);
        for q in [2, 3, 5] {
            let d = solve_divisibility(&zero, q).unwrap();
            assert_eq!(d.y.integer_detect().unwrap(), Some(BigInt::zero()));
        }
        let six = DivisorSequence::powers(6);
        let x = AdicInteger::from_residue(&six, &BigInt::from(100), 4);
        let d = solve_divisibility(&x, 3).unwrap();
        assert!(d.certified);
        assert_eq!(d.y.precision(), 3);
        assert!(solve_divisibility(&one, 4).is_err());
    }
}
