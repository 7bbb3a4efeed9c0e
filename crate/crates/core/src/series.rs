//! Truncated Poincaré series and their growth.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::cohomology::BettiTable;

/// Coefficients `b_0..=b_N` of a Poincaré series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoincareSeries {
    cutoff: u32,
    coeffs: Vec<BigUint>,
}

impl PoincareSeries {
    pub fn new(cutoff: u32, mut coeffs: Vec<BigUint>) -> Self {
        coeffs.resize(cutoff as usize + 1, BigUint::zero());
        Self { cutoff, coeffs }
    }

    pub fn from_u64(cutoff: u32, coeffs: &[u64]) -> Self {
        Self::new(cutoff, coeffs.iter().map(|&c| BigUint::from(c)).take(cutoff as usize + 1).collect())
    }

    /// The series `1` (a point).
    pub fn one(cutoff: u32) -> Self {
        Self::new(cutoff, vec![BigUint::one()])
    }

    pub fn from_betti(t: &BettiTable) -> Self {
        Self::new(t.cutoff, t.dims.iter().map(|&b| BigUint::from(b)).collect())
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn get(&self, j: u32) -> BigUint {
        self.coeffs.get(j as usize).cloned().unwrap_or_default()
    }

    pub fn truncate(&self, cutoff: u32) -> Self {
        let cutoff = cutoff.min(self.cutoff);
        Self { cutoff, coeffs: self.coeffs[..=cutoff as usize].to_vec() }
    }

    /// Degrees with nonzero coefficient.
    pub fn support(&self) -> Vec<u32> {
        (0..=self.cutoff).filter(|&j| !self.coeffs[j as usize].is_zero()).collect()
    }

    /// Truncated product; the cutoff is the smaller of the two.
    pub fn product(&self, other: &Self) -> Self {
        let cutoff = self.cutoff.min(other.cutoff) as usize;
        let mut out = vec![BigUint::zero(); cutoff + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(cutoff + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(cutoff + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self { cutoff: cutoff as u32, coeffs: out }
    }
}

pub fn series_product(a: &PoincareSeries, b: &PoincareSeries) -> PoincareSeries {
    a.product(b)
}

/// Poincaré series of `K(Q^multiplicity, n)`: `(1 + t^n)^mult` for `n`
/// odd, `(1 - t^n)^{-mult}` for `n` even.
pub fn em_series(n: u32, multiplicity: usize, cutoff: u32) -> PoincareSeries {
    let single = if n % 2 == 1 {
        let mut c = vec![BigUint::zero(); cutoff as usize + 1];
        c[0] = BigUint::one();
        if n <= cutoff {
            c[n as usize] = BigUint::one();
        }
        PoincareSeries::new(cutoff, c)
    } else {
        let c = (0..=cutoff).map(|j| if j % n == 0 { BigUint::one() } else { BigUint::zero() }).collect();
        PoincareSeries::new(cutoff, c)
    };
    (0..multiplicity).fold(PoincareSeries::one(cutoff), |acc, _| acc.product(&single))
}

/// A series written as `numerator(t) / ∏ (1 - t^a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    pub numerator: Vec<BigInt>,
    pub denominator_degrees: Vec<u32>,
}

impl RationalSeries {
    /// Finds the numerator from a truncated series, given the denominator.
    /// The last `tail` numerator coefficients below the cutoff must vanish;
    /// otherwise the truncation is too short to trust and `None` is
    /// returned.
    pub fn reconstruct(series: &PoincareSeries, denominator_degrees: &[u32], tail: usize) -> Option<Self> {
        let n = series.cutoff as usize;
        if tail == 0 || tail > n {
            return None;
        }
        let mut num: Vec<BigInt> = series.coeffs.iter().map(|c| BigInt::from(c.clone())).collect();
        for &a in denominator_degrees {
            let a = a as usize;
            for j in (a..=n).rev() {
                let sub = num[j - a].clone();
                num[j] -= sub;
            }
        }
        if num[n + 1 - tail..].iter().any(|c| !c.is_zero()) {
            return None;
        }
        while num.last().is_some_and(Zero::is_zero) {
            num.pop();
        }
        Some(Self { numerator: num, denominator_degrees: denominator_degrees.to_vec() })
    }

    /// Multiplicity of `t = 1` as a root of the numerator.
    pub fn numerator_root_multiplicity(&self) -> usize {
        let mut p = self.numerator.clone();
        let mut mult = 0;
        while !p.is_empty() && p.iter().sum::<BigInt>().is_zero() {
            // p = (1 - t) q, q_j = p_0 + ... + p_j
            let mut acc = BigInt::zero();
            let mut q = Vec::with_capacity(p.len());
            for c in &p {
                acc += c;
                q.push(acc.clone());
            }
            while q.last().is_some_and(Zero::is_zero) {
                q.pop();
            }
            p = q;
            mult += 1;
        }
        mult
    }

    /// Order of the pole at `t = 1` (zero when there is none).
    pub fn pole_order(&self) -> usize {
        if self.numerator.is_empty() {
            return 0;
        }
        self.denominator_degrees.len().saturating_sub(self.numerator_root_multiplicity())
    }
}

/// Growth of Betti numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Growth {
    /// Eventually zero.
    Finite,
    /// `b_j <= C j^d` with the bound attained up to a constant infinitely
    /// often.
    Polynomial(u32),
    /// Not determined because a factor is symbolic.
    Symbolic,
}

impl Growth {
    /// From the total pole order at `t = 1`.
    pub fn from_pole_order(order: usize) -> Self {
        match order {
            0 => Growth::Finite,
            p => Growth::Polynomial(p as u32 - 1),
        }
    }
}

fn partial_sum(series: &PoincareSeries, n: u32) -> BigUint {
    (1..=n).map(|j| series.get(j)).sum()
}

/// Numerical check of a growth claim on `b_1..=b_{2h}` with `h = horizon/2`:
///
/// * finite: `b_j = 0` for `h < j <= 2h`;
/// * polynomial(d): the partial sums `S(n) = b_1 + ... + b_n` grow like
///   `n^{d+1}`, so `S(2h)/S(h)` must lie strictly within a factor `√2` of
///   `2^{d+1}`; compared exactly as `2^{2d+1} S(h)^2 < S(2h)^2 < 2^{2d+3} S(h)^2`.
///
/// The series must reach `horizon`.
pub fn check_growth_bound(series: &PoincareSeries, growth: Growth, horizon: u32) -> bool {
    if series.cutoff < horizon || horizon < 2 {
        return false;
    }
    let h = horizon / 2;
    match growth {
        Growth::Symbolic => false,
        Growth::Finite => (h + 1..=2 * h).all(|j| series.get(j).is_zero()),
        Growth::Polynomial(d) => {
            let (low, high) = (partial_sum(series, h), partial_sum(series, 2 * h));
            if low.is_zero() {
                return false;
            }
            let (low2, high2) = (&low * &low, &high * &high);
            high2 > (&low2 << (2 * d + 1)) && high2 < (low2 << (2 * d + 3))
        }
    }
}

/// Signed coefficients of `numerator / ∏(1 - t^a)` up to `cutoff`; used
/// to validate a reconstruction against the series it came from.
pub fn expand(r: &RationalSeries, cutoff: u32) -> Vec<BigInt> {
    let n = cutoff as usize;
    let mut c = vec![BigInt::zero(); n + 1];
    for (i, x) in r.numerator.iter().enumerate().take(n + 1) {
        c[i] = x.clone();
    }
    for &a in &r.denominator_degrees {
        let a = a as usize;
        for j in a..=n {
            let add = c[j - a].clone();
            c[j] += add;
        }
    }
    c
}

/// Whether every coefficient is nonnegative (sanity check on expansions).
pub fn all_nonnegative(c: &[BigInt]) -> bool {
    c.iter().all(|x| !x.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn em_series_examples() {
        assert_eq!(em_series(3, 1, 5).coeffs(), &u(&[1, 0, 0, 1, 0, 0])[..]);
        assert_eq!(em_series(2, 1, 6).coeffs(), &u(&[1, 0, 1, 0, 1, 0, 1])[..]);
        assert_eq!(em_series(2, 2, 4).coeffs(), &u(&[1, 0, 2, 0, 3])[..]);
    }

    #[test]
    fn products() {
        let p = em_series(5, 1, 15).product(&em_series(7, 1, 15));
        assert_eq!(p.support(), vec![0, 5, 7, 12]);
        let a = em_series(2, 3, 10);
        assert_eq!(a.product(&PoincareSeries::one(10)), a);
    }

    #[test]
    fn reconstruction_and_pole_order() {
        // 1/(1-t^2)^2
        let s = em_series(2, 2, 60);
        let r = RationalSeries::reconstruct(&s, &[2, 2], 10).unwrap();
        assert_eq!(r.numerator, vec![BigInt::one()]);
        assert_eq!(r.pole_order(), 2);
        // (1 + t^3) / (1 - t^2) against denominator (1-t^2)(1-t^4): numerator (1+t^3)(1-t^4)
        let s = em_series(3, 1, 60).product(&em_series(2, 1, 60));
        let r = RationalSeries::reconstruct(&s, &[2, 4], 10).unwrap();
        assert_eq!(r.pole_order(), 1);
        assert_eq!(expand(&r, 60), s.coeffs().iter().map(|c| BigInt::from(c.clone())).collect::<Vec<_>>());
        // a finite series has no pole
        let s = em_series(3, 2, 40);
        assert_eq!(RationalSeries::reconstruct(&s, &[], 10).unwrap().pole_order(), 0);
        // a denominator that does not fit is detected
        let s = em_series(2, 2, 40);
        assert!(RationalSeries::reconstruct(&s, &[2], 10).is_none());
    }

    #[test]
    fn growth_checks() {
        let s = em_series(5, 1, 200).product(&em_series(7, 1, 200));
        assert!(check_growth_bound(&s, Growth::Finite, 200));
        assert!(!check_growth_bound(&s, Growth::Polynomial(0), 200));
        let s = em_series(2, 1, 200);
        assert!(check_growth_bound(&s, Growth::Polynomial(0), 200));
        assert!(!check_growth_bound(&s, Growth::Finite, 200));
        let s = em_series(2, 2, 200);
        assert!(check_growth_bound(&s, Growth::Polynomial(1), 200));
        assert!(!check_growth_bound(&s, Growth::Polynomial(0), 200));
        assert!(!check_growth_bound(&s, Growth::Polynomial(2), 200));
    }
}
