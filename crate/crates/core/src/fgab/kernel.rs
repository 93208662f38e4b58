//! Normal-form kernels generic over the entry type.
//!
//! Every routine first runs on checked `i128` arithmetic and falls back to
//! `BigInt` on overflow, so results are always exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

pub(crate) type Mat<S> = Vec<Vec<S>>;

pub(crate) trait Scalar: Clone + Eq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn cmp_abs(&self, other: &Self) -> Ordering;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// `q` with `self - q*d` in `[0, |d|)`.
    fn quot(&self, d: &Self) -> Option<Self>;
    fn divides(&self, o: &Self) -> bool;
}

impl Scalar for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn quot(&self, d: &Self) -> Option<Self> {
        self.checked_div_euclid(*d)
    }
    fn divides(&self, o: &Self) -> bool {
        if self.is_unit() {
            return true;
        }
        if *self == 0 {
            return *o == 0;
        }
        o % self == 0
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn quot(&self, d: &Self) -> Option<Self> {
        let q = self.div_floor(&d.abs());
        Some(if d.is_negative() { -q } else { q })
    }
    fn divides(&self, o: &Self) -> bool {
        if Zero::is_zero(self) {
            return Zero::is_zero(o);
        }
        Zero::is_zero(&(o % self))
    }
}

fn identity<S: Scalar>(n: usize) -> Mat<S> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect()
}

/// `dst -= q * src`, entrywise.
fn axpy<S: Scalar>(dst: &mut [S], src: &[S], q: &S) -> Option<()> {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d = d.sub(&s.mul(q)?)?;
        }
    }
    Some(())
}

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Track {
    pub u: bool,
    pub uinv: bool,
    pub v: bool,
    pub vinv: bool,
}

impl Track {
    #[cfg(test)]
    pub const ALL: Track = Track {
        u: true,
        uinv: true,
        v: true,
        vinv: true,
    };
    pub const NONE: Track = Track {
        u: false,
        uinv: false,
        v: false,
        vinv: false,
    };
}

#[derive(Clone, Debug)]
pub(crate) struct SnfOut<S> {
    pub s: Mat<S>,
    pub u: Option<Mat<S>>,
    pub uinv: Option<Mat<S>>,
    pub v: Option<Mat<S>>,
    pub vinv: Option<Mat<S>>,
    pub rank: usize,
}

struct Snf<S> {
    m: usize,
    n: usize,
    a: Mat<S>,
    u: Option<Mat<S>>,
    uinv: Option<Mat<S>>,
    v: Option<Mat<S>>,
    vinv: Option<Mat<S>>,
}

impl<S: Scalar> Snf<S> {
    fn row_sub(&mut self, i: usize, t: usize, q: &S) -> Option<()> {
        let (lo, hi) = pair_mut(&mut self.a, i, t);
        axpy(lo, hi, q)?;
        if let Some(u) = &mut self.u {
            let (lo, hi) = pair_mut(u, i, t);
            axpy(lo, hi, q)?;
        }
        if let Some(ui) = &mut self.uinv {
            for row in ui.iter_mut() {
                if !row[i].is_zero() {
                    row[t] = row[t].add(&row[i].mul(q)?)?;
                }
            }
        }
        Some(())
    }

    fn col_sub(&mut self, j: usize, t: usize, q: &S) -> Option<()> {
        for row in self.a.iter_mut() {
            if !row[t].is_zero() {
                row[j] = row[j].sub(&row[t].mul(q)?)?;
            }
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                if !row[t].is_zero() {
                    row[j] = row[j].sub(&row[t].mul(q)?)?;
                }
            }
        }
        if let Some(vi) = &mut self.vinv {
            let (dst, src) = pair_mut(vi, t, j);
            let neg = q.neg()?;
            axpy(dst, src, &neg)?;
        }
        Some(())
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        self.a.swap(i, k);
        if let Some(u) = &mut self.u {
            u.swap(i, k);
        }
        if let Some(ui) = &mut self.uinv {
            for row in ui.iter_mut() {
                row.swap(i, k);
            }
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j == k {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(j, k);
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                row.swap(j, k);
            }
        }
        if let Some(vi) = &mut self.vinv {
            vi.swap(j, k);
        }
    }

    /// Row `t` += row `i`.
    fn row_add(&mut self, t: usize, i: usize) -> Option<()> {
        let neg = S::one().neg()?;
        let (dst, src) = pair_mut(&mut self.a, t, i);
        axpy(dst, src, &neg)?;
        if let Some(u) = &mut self.u {
            let (dst, src) = pair_mut(u, t, i);
            axpy(dst, src, &neg)?;
        }
        if let Some(ui) = &mut self.uinv {
            for row in ui.iter_mut() {
                if !row[t].is_zero() {
                    row[i] = row[i].sub(&row[t])?;
                }
            }
        }
        Some(())
    }

    fn neg_row(&mut self, t: usize) -> Option<()> {
        for x in self.a[t].iter_mut() {
            *x = x.neg()?;
        }
        if let Some(u) = &mut self.u {
            for x in u[t].iter_mut() {
                *x = x.neg()?;
            }
        }
        if let Some(ui) = &mut self.uinv {
            for row in ui.iter_mut() {
                row[t] = row[t].neg()?;
            }
        }
        Some(())
    }

    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m {
            for j in t..self.n {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                if x.is_unit() {
                    return Some((i, j));
                }
                match best {
                    Some((bi, bj)) if x.cmp_abs(&self.a[bi][bj]) != Ordering::Less => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn run(&mut self) -> Option<usize> {
        let mut t = 0;
        while t < self.m.min(self.n) {
            let Some((pi, pj)) = self.find_pivot(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..self.m {
                    if !self.a[i][t].is_zero() {
                        let q = self.a[i][t].quot(&self.a[t][t])?;
                        self.row_sub(i, t, &q)?;
                        dirty |= !self.a[i][t].is_zero();
                    }
                }
                for j in t + 1..self.n {
                    if !self.a[t][j].is_zero() {
                        let q = self.a[t][j].quot(&self.a[t][t])?;
                        self.col_sub(j, t, &q)?;
                        dirty |= !self.a[t][j].is_zero();
                    }
                }
                if dirty {
                    let mut best = (t, t);
                    for i in t + 1..self.m {
                        let x = &self.a[i][t];
                        if !x.is_zero() && x.cmp_abs(&self.a[best.0][best.1]) == Ordering::Less {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..self.n {
                        let x = &self.a[t][j];
                        if !x.is_zero() && x.cmp_abs(&self.a[best.0][best.1]) == Ordering::Less {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                if !self.a[t][t].is_unit() {
                    let p = self.a[t][t].clone();
                    let bad = (t + 1..self.m).find(|&i| self.a[i][t + 1..].iter().any(|x| !p.divides(x)));
                    if let Some(i) = bad {
                        self.row_add(t, i)?;
                        continue;
                    }
                }
                break;
            }
            if self.a[t][t].is_neg() {
                self.neg_row(t)?;
            }
            t += 1;
        }
        Some(t)
    }
}

fn pair_mut<T>(v: &mut [T], i: usize, j: usize) -> (&mut T, &T) {
    assert_ne!(i, j);
    if i < j {
        let (a, b) = v.split_at_mut(j);
        (&mut a[i], &b[0])
    } else {
        let (a, b) = v.split_at_mut(i);
        (&mut b[0], &a[j])
    }
}

fn snf_generic<S: Scalar>(a: Mat<S>, m: usize, n: usize, track: Track) -> Option<SnfOut<S>> {
    let mut st = Snf {
        m,
        n,
        a,
        u: track.u.then(|| identity(m)),
        uinv: track.uinv.then(|| identity(m)),
        v: track.v.then(|| identity(n)),
        vinv: track.vinv.then(|| identity(n)),
    };
    let rank = st.run()?;
    Some(SnfOut {
        s: st.a,
        u: st.u,
        uinv: st.uinv,
        v: st.v,
        vinv: st.vinv,
        rank,
    })
}

fn hnf_generic<S: Scalar>(mut a: Mat<S>, ncols: usize) -> Option<Mat<S>> {
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..a.len() {
                if a[i][c].is_zero() {
                    continue;
                }
                match best {
                    Some(b) if a[i][c].cmp_abs(&a[b][c]) != Ordering::Less => {}
                    _ => best = Some(i),
                }
            }
            let Some(b) = best else { break };
            a.swap(r, b);
            let mut dirty = false;
            for i in r + 1..a.len() {
                if !a[i][c].is_zero() {
                    let q = a[i][c].quot(&a[r][c])?;
                    let (dst, src) = pair_mut(&mut a, i, r);
                    axpy(dst, src, &q)?;
                    dirty |= !a[i][c].is_zero();
                }
            }
            if !dirty {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_neg() {
            for x in a[r].iter_mut() {
                *x = x.neg()?;
            }
        }
        for i in 0..r {
            if !a[i][c].is_zero() {
                let q = a[i][c].quot(&a[r][c])?;
                if !q.is_zero() {
                    let (dst, src) = pair_mut(&mut a, i, r);
                    axpy(dst, src, &q)?;
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    Some(a)
}

fn to_small(a: &[Vec<BigInt>]) -> Option<Mat<i128>> {
    a.iter()
        .map(|row| {
            row.iter()
                .map(|x| x.to_i64().map(i128::from))
                .collect::<Option<Vec<_>>>()
        })
        .collect()
}

fn to_big(a: Mat<i128>) -> Mat<BigInt> {
    a.into_iter()
        .map(|row| row.into_iter().map(BigInt::from).collect())
        .collect()
}

pub(crate) fn snf(a: &[Vec<BigInt>], m: usize, n: usize, track: Track) -> SnfOut<BigInt> {
    if let Some(small) = to_small(a) {
        if let Some(out) = snf_generic(small, m, n, track) {
            return SnfOut {
                s: to_big(out.s),
                u: out.u.map(to_big),
                uinv: out.uinv.map(to_big),
                v: out.v.map(to_big),
                vinv: out.vinv.map(to_big),
                rank: out.rank,
            };
        }
    }
    snf_generic(a.to_vec(), m, n, track).expect("bigint arithmetic cannot overflow")
}

pub(crate) fn hnf(a: &[Vec<BigInt>], ncols: usize) -> Mat<BigInt> {
    if let Some(small) = to_small(a) {
        if let Some(out) = hnf_generic(small, ncols) {
            return to_big(out);
        }
    }
    hnf_generic(a.to_vec(), ncols).expect("bigint arithmetic cannot overflow")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Mat<BigInt> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn small_and_big_paths_agree() {
        let a = big(&[&[4, 6, 2], &[2, 8, 10], &[6, 0, 12]]);
        let small = snf_generic(to_small(&a).unwrap(), 3, 3, Track::ALL).unwrap();
        let large = snf_generic(a.clone(), 3, 3, Track::ALL).unwrap();
        assert_eq!(to_big(small.s), large.s);
        assert_eq!(to_big(small.v.unwrap()), large.v.unwrap());
        let h1 = to_big(hnf_generic(to_small(&a).unwrap(), 3).unwrap());
        assert_eq!(h1, hnf_generic(a, 3).unwrap());
    }

    #[test]
    fn overflow_falls_back() {
        let x = i64::MAX;
        let a = big(&[&[x, x - 1], &[x - 2, x - 7]]);
        let out = snf(&a, 2, 2, Track::ALL);
        assert_eq!(out.rank, 2);
        let h = hnf(&a, 2);
        assert_eq!(h.len(), 2);
    }

    #[test]
    fn hnf_is_reduced_echelon() {
        let a = big(&[&[3, 5, 7], &[2, 4, 6], &[0, 0, 0]]);
        let h = hnf(&a, 3);
        assert_eq!(h, big(&[&[1, 1, 1], &[0, 2, 4]]));
    }
}
