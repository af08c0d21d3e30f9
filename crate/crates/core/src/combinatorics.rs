//! Exact binomial machinery over arbitrary-precision integers, plus the
//! closed-form Stirling and Bahadur-type bounds used by the divergence analysis.
//!
//! Rows and prefixes of Pascal's triangle are always walked with the ratio
//! recurrence `C(n, i+1) = C(n, i) * (n - i) / (i + 1)`, which stays in exact
//! integers and costs one small multiply and one small divide per step.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::infotheory::binary_entropy;

/// Arbitrary-precision nonnegative integer used for codebook sizes and ranks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BigCount(BigUint);

impl BigCount {
    pub fn zero() -> Self {
        BigCount(BigUint::zero())
    }

    pub fn one() -> Self {
        BigCount(BigUint::one())
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Number of significant bits; zero has bit length 0.
    pub fn bits(&self) -> u64 {
        self.0.bits()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    /// `log2` of the value, see [`log2_big`].
    pub fn log2(&self) -> Result<f64> {
        log2_big(self)
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl From<u32> for BigCount {
    fn from(v: u32) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl From<BigUint> for BigCount {
    fn from(v: BigUint) -> Self {
        BigCount(v)
    }
}

impl PartialEq<u64> for BigCount {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl std::str::FromStr for BigCount {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .parse::<BigUint>()
            .map(BigCount)
            .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
    }
}

/// A lower/upper pair. Whether the values live in the count domain or in bits
/// is documented at each operation returning one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPair {
    pub lower: f64,
    pub upper: f64,
}

impl BoundPair {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// `C(n, k)`, zero when `k > n`.
pub fn binom(n: u64, k: u64) -> BigCount {
    BigCount(binom_big(n, k))
}

pub(crate) fn binom_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 0..k {
        c *= n - i;
        c /= i + 1;
    }
    c
}

/// `|C_k| = sum_{i=0}^{k} C(n, i)`.
pub fn partial_binom_sum(n: u64, k: u64) -> Result<BigCount> {
    if k > n {
        return Err(Error::WeightExceedsLength { n, k });
    }
    let mut cursor = PrefixCursor::new(n);
    while cursor.weight() < k {
        cursor.advance();
    }
    Ok(BigCount(cursor.size().clone()))
}

/// Doubled center-weighted sum `sum_{i=0}^{k} C(n, i) (n - 2i)`.
///
/// The classical identity has weights `n/2 - i` and right-hand side
/// `(k+1)/2 C(n, k+1)`; doubling keeps both sides integral for odd `n`, so the
/// result always equals `(k+1) C(n, k+1)` exactly.
pub fn center_weighted_sum(n: u64, k: u64) -> Result<BigCount> {
    if k > n {
        return Err(Error::WeightExceedsLength { n, k });
    }
    let mut acc = BigInt::zero();
    let mut c = BigUint::one();
    for i in 0..=k {
        let weight = BigInt::from(n) - BigInt::from(2 * i);
        acc += BigInt::from(c.clone()) * weight;
        c *= n - i;
        c /= i + 1;
    }
    // The identity guarantees a nonnegative total.
    acc.to_biguint()
        .map(BigCount)
        .ok_or_else(|| Error::OutOfDomain("negative center-weighted sum".into()))
}

/// `log2(x)` for `x >= 1`, from the bit length and the top 64 bits of the
/// integer, so it stays accurate far beyond the range of `f64`.
pub fn log2_big(x: &BigCount) -> Result<f64> {
    if x.is_zero() {
        return Err(Error::LogOfZero);
    }
    Ok(log2_biguint(&x.0))
}

pub(crate) fn log2_biguint(x: &BigUint) -> f64 {
    debug_assert!(!x.is_zero());
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap();
    (top as f64).log2() + shift as f64
}

/// `x * 2^exp` without intermediate overflow of `2^exp`.
pub(crate) fn ldexp(mut x: f64, mut exp: i64) -> f64 {
    while exp > 1000 {
        x *= 2f64.powi(1000);
        exp -= 1000;
    }
    while exp < -1000 {
        x *= 2f64.powi(-1000);
        exp += 1000;
    }
    x * 2f64.powi(exp as i32)
}

/// `num / den` rounded to `f64` with roughly 64 bits of quotient precision.
pub(crate) fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    assert!(!den.is_zero(), "ratio with zero denominator");
    if num.is_zero() {
        return 0.0;
    }
    let shift = 64 + den.bits() as i64 - num.bits() as i64;
    let (n, d) = if shift >= 0 {
        (num << shift as u64, den.clone())
    } else {
        (num.clone(), den << (-shift) as u64)
    };
    let (mut q, r) = n.div_rem(&d);
    // q has at least 64 bits, so a sticky low bit makes the final rounding exact.
    if !r.is_zero() {
        q |= BigUint::one();
    }
    ldexp(q.to_f64().unwrap(), -shift)
}

/// Walks `k = 0, 1, ..., n` keeping `C(n, k)`, `|C_k|` and the total weight
/// `sum_{i<=k} i C(n, i)` of the union of the first `k + 1` type sets.
#[derive(Debug, Clone)]
pub struct PrefixCursor {
    n: u64,
    k: u64,
    binom: BigUint,
    size: BigUint,
    weight_sum: BigUint,
}

impl PrefixCursor {
    pub fn new(n: u64) -> Self {
        PrefixCursor {
            n,
            k: 0,
            binom: BigUint::one(),
            size: BigUint::one(),
            weight_sum: BigUint::zero(),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// The current largest weight `k`.
    pub fn weight(&self) -> u64 {
        self.k
    }

    /// `C(n, k)`.
    pub fn binom(&self) -> &BigUint {
        &self.binom
    }

    /// `|C_k|`.
    pub fn size(&self) -> &BigUint {
        &self.size
    }

    /// `sum_{i=0}^{k} i C(n, i)`.
    pub fn weight_sum(&self) -> &BigUint {
        &self.weight_sum
    }

    /// `C(n, k + 1)`, the size of the next type set.
    pub fn next_binom(&self) -> BigUint {
        if self.k >= self.n {
            return BigUint::zero();
        }
        &self.binom * (self.n - self.k) / (self.k + 1)
    }

    /// Moves to `k + 1`; returns `false` (and stays put) at `k = n`.
    pub fn advance(&mut self) -> bool {
        if self.k >= self.n {
            return false;
        }
        self.binom = self.next_binom();
        self.k += 1;
        self.size += &self.binom;
        self.weight_sum += &self.binom * self.k;
        true
    }
}

fn integral_weight(n: u64, p: Ratio<u64>) -> Result<u64> {
    let num = (n as u128) * (*p.numer() as u128);
    let den = *p.denom() as u128;
    if !num.is_multiple_of(den) {
        return Err(Error::OutOfDomain(format!(
            "n*p = {n}*{p} is not an integer"
        )));
    }
    Ok((num / den) as u64)
}

fn ratio_f64(p: Ratio<u64>) -> f64 {
    *p.numer() as f64 / *p.denom() as f64
}

/// Stirling-type bracket of `C(n, np)` in the count domain:
/// `2^{nH(p)} / sqrt(8np(1-p)) <= C(n, np) <= 2^{nH(p)} / sqrt(2 pi np(1-p))`.
///
/// Values overflow to infinity once `nH(p)` exceeds the `f64` exponent range;
/// use [`stirling_bounds_log2`] at large `n`.
pub fn stirling_bounds(n: u64, p: Ratio<u64>) -> Result<BoundPair> {
    let b = stirling_bounds_log2(n, p)?;
    Ok(BoundPair {
        lower: b.lower.exp2(),
        upper: b.upper.exp2(),
    })
}

/// [`stirling_bounds`] in bits.
pub fn stirling_bounds_log2(n: u64, p: Ratio<u64>) -> Result<BoundPair> {
    if n == 0 {
        return Err(Error::OutOfDomain("n must be positive".into()));
    }
    if p.is_zero() || p >= Ratio::one() {
        return Err(Error::OutOfDomain(format!("p = {p} must lie in (0, 1)")));
    }
    integral_weight(n, p)?;
    let pf = ratio_f64(p);
    let nf = n as f64;
    let nh = nf * binary_entropy(pf);
    let var = nf * pf * (1.0 - pf);
    Ok(BoundPair {
        lower: nh - 0.5 * (8.0 * var).log2(),
        upper: nh - 0.5 * (2.0 * std::f64::consts::PI * var).log2(),
    })
}

/// Bracket of the partial sum `sum_{i=0}^{np} C(n, i)` in the count domain:
/// `C(n, np) alpha beta <= sum <= C(n, np) alpha` with
/// `alpha = (1 - p + 1/n) / (1 - 2p + 1/n)` and
/// `beta = n(1-2p)^2 / (1 + n(1-2p)^2)`.
pub fn partial_sum_bounds(n: u64, p: Ratio<u64>) -> Result<BoundPair> {
    let (alpha, beta) = partial_sum_factors(n, p)?;
    let k = integral_weight(n, p)?;
    let c = binom_big(n, k).to_f64().unwrap_or(f64::INFINITY);
    Ok(BoundPair {
        lower: c * alpha * beta,
        upper: c * alpha,
    })
}

/// The `(alpha, beta)` factors of [`partial_sum_bounds`].
pub fn partial_sum_factors(n: u64, p: Ratio<u64>) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::OutOfDomain("n must be positive".into()));
    }
    if p >= Ratio::new(1, 2) {
        return Err(Error::OutOfDomain(format!("p = {p} must be below 1/2")));
    }
    integral_weight(n, p)?;
    let pf = ratio_f64(p);
    let nf = n as f64;
    let inv = 1.0 / nf;
    let alpha = (1.0 - pf + inv) / (1.0 - 2.0 * pf + inv);
    let t = nf * (1.0 - 2.0 * pf).powi(2);
    Ok((alpha, t / (1.0 + t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn pascal_row(n: usize) -> Vec<BigUint> {
        let mut row = vec![BigUint::one()];
        for _ in 0..n {
            let mut next = vec![BigUint::one(); row.len() + 1];
            for i in 1..row.len() {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        row
    }

    #[test]
    fn binom_small_values() {
        assert_eq!(binom(4, 2), 6);
        assert_eq!(binom(7, 0), 1);
        assert_eq!(binom(0, 0), 1);
        assert_eq!(binom(3, 5), 0);
        // Pascal-triangle oracle.
        assert_eq!(binom(20, 10), 184756);
        let row = pascal_row(60);
        for (k, c) in row.iter().enumerate() {
            assert_eq!(binom(60, k as u64).as_biguint(), c);
        }
    }

    #[test]
    fn partial_sums() {
        assert_eq!(partial_binom_sum(4, 1).unwrap(), 5);
        assert_eq!(partial_binom_sum(8, 3).unwrap(), 93);
        assert_eq!(partial_binom_sum(10, 10).unwrap(), 1024);
        assert_eq!(
            partial_binom_sum(100, 100).unwrap().as_biguint(),
            &(BigUint::one() << 100u32)
        );
        assert!(matches!(
            partial_binom_sum(4, 5),
            Err(Error::WeightExceedsLength { n: 4, k: 5 })
        ));
    }

    #[test]
    fn partial_sum_differences_are_binomials() {
        for n in 0..40 {
            for k in 1..=n {
                let hi = partial_binom_sum(n, k).unwrap().into_biguint();
                let lo = partial_binom_sum(n, k - 1).unwrap().into_biguint();
                assert_eq!(hi - lo, binom_big(n, k));
            }
        }
    }

    #[test]
    fn log2_values() {
        assert_eq!(log2_big(&BigCount::one()).unwrap(), 0.0);
        assert_eq!(log2_big(&BigCount::from(1024u64)).unwrap(), 10.0);
        // 50-digit mpmath reference.
        let v = log2_big(&BigCount::from(93u64)).unwrap();
        assert!((v - 6.539_158_811_108_031).abs() < 1e-12);
        assert_eq!(log2_big(&BigCount::zero()), Err(Error::LogOfZero));
        let huge = BigCount::from(BigUint::one() << 100_000u32);
        assert_eq!(log2_big(&huge).unwrap(), 100_000.0);
    }

    #[test]
    fn ratio_conversion() {
        let a = BigUint::from(1u32);
        let b = BigUint::from(3u32);
        assert_eq!(ratio_to_f64(&a, &b), 1.0 / 3.0);
        let big = BigUint::one() << 5000u32;
        let r = ratio_to_f64(&(&big * 3u32), &(&big * 7u32));
        assert!((r - 3.0 / 7.0).abs() < 1e-16);
        assert_eq!(
            ratio_to_f64(&(BigUint::one() << 2000u32), &BigUint::one()),
            f64::INFINITY
        );
        assert_eq!(ldexp(1.0, 1500), f64::INFINITY);
        assert_eq!(ldexp(1.0, -1074), f64::from_bits(1));
        assert_eq!(ldexp(3.0, -1), 1.5);
    }

    #[test]
    fn stirling_examples() {
        let b = stirling_bounds(4, Ratio::new(1, 2)).unwrap();
        assert!((b.lower - 5.656_854_249_492_38).abs() < 1e-12);
        assert!((b.upper - 6.383_076_486_422_923).abs() < 1e-12);
        assert!(b.contains(6.0));
        let b = stirling_bounds(4, Ratio::new(1, 4)).unwrap();
        assert!((b.lower - 3.870_798_605_879_59).abs() < 1e-12);
        assert!((b.upper - 4.367_728_506_896_883).abs() < 1e-12);
        assert!(b.contains(4.0));
        let b = stirling_bounds(100, Ratio::new(1, 2)).unwrap();
        let exact = binom_big(100, 50);
        assert!(BigUint::from_f64(b.lower.ceil()).unwrap() <= exact);
        assert!(exact <= BigUint::from_f64(b.upper.floor()).unwrap());
    }

    #[test]
    fn stirling_rejects() {
        assert!(stirling_bounds(4, Ratio::new(1, 3)).is_err());
        assert!(stirling_bounds(4, Ratio::new(0, 1)).is_err());
        assert!(stirling_bounds(4, Ratio::new(1, 1)).is_err());
        assert!(stirling_bounds(0, Ratio::new(1, 2)).is_err());
    }

    #[test]
    fn partial_sum_examples() {
        let b = partial_sum_bounds(4, Ratio::new(1, 4)).unwrap();
        assert!((b.lower - 8.0 / 3.0).abs() < 1e-12);
        assert!((b.upper - 16.0 / 3.0).abs() < 1e-12);
        assert!(b.contains(5.0));
        for n in 1..50 {
            let b = partial_sum_bounds(n, Ratio::new(0, 1)).unwrap();
            assert!(b.lower <= 1.0 && 1.0 <= b.upper);
        }
        let b = partial_sum_bounds(200, Ratio::new(1, 4)).unwrap();
        let exact = partial_binom_sum(200, 50).unwrap().into_biguint();
        assert!(BigUint::from_f64(b.lower.ceil()).unwrap() <= exact);
        assert!(exact <= BigUint::from_f64(b.upper.floor()).unwrap());
        assert!(partial_sum_bounds(4, Ratio::new(1, 2)).is_err());
        assert!(partial_sum_bounds(5, Ratio::new(1, 4)).is_err());
    }

    #[test]
    fn center_weighted_examples() {
        assert_eq!(center_weighted_sum(4, 1).unwrap(), 12);
        assert_eq!(center_weighted_sum(10, 4).unwrap(), 1260);
        for n in 1..20 {
            assert_eq!(center_weighted_sum(n, 0).unwrap(), n);
        }
        assert_eq!(center_weighted_sum(5, 5).unwrap(), 0);
        assert!(center_weighted_sum(3, 4).is_err());
    }

    #[test]
    fn cursor_tracks_prefix_statistics() {
        let n = 30;
        let row = pascal_row(n);
        let mut cursor = PrefixCursor::new(n as u64);
        let mut size = BigUint::zero();
        let mut weight = BigUint::zero();
        for (k, c) in row.iter().enumerate() {
            size += c;
            weight += c * k;
            assert_eq!(cursor.weight(), k as u64);
            assert_eq!(cursor.binom(), c);
            assert_eq!(cursor.size(), &size);
            assert_eq!(cursor.weight_sum(), &weight);
            assert_eq!(cursor.advance(), k < n);
        }
    }
}
