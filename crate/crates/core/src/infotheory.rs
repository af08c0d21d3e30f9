//! Binary entropy, binary informational divergence, and the probability types
//! that carry exact rationals through the letter-distribution arithmetic.
//!
//! Everything is in bits, with `0 log 0 = 0`.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::One;

use crate::error::{Error, Result};

/// A probability in `[0, 1]`, optionally with its exact rational value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probability {
    value: f64,
    exact: Option<Ratio<u64>>,
}

impl Probability {
    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidProbability(format!(
                "{value} is not in [0, 1]"
            )));
        }
        Ok(Probability { value, exact: None })
    }

    pub fn from_ratio(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::InvalidProbability(format!(
                "{num}/{den} is not in [0, 1]"
            )));
        }
        Ok(Self::exact(Ratio::new(num, den)))
    }

    fn exact(r: Ratio<u64>) -> Self {
        Probability {
            value: *r.numer() as f64 / *r.denom() as f64,
            exact: Some(r),
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn as_ratio(&self) -> Option<Ratio<u64>> {
        self.exact
    }

    /// `1 - p`, exact when `p` is.
    pub fn complement(&self) -> Self {
        match self.exact {
            Some(r) => Self::exact(Ratio::one() - r),
            None => Probability {
                value: 1.0 - self.value,
                exact: None,
            },
        }
    }
}

impl AsRef<Probability> for Probability {
    fn as_ref(&self) -> &Probability {
        self
    }
}

impl From<Ratio<u64>> for Probability {
    fn from(r: Ratio<u64>) -> Self {
        assert!(r <= Ratio::one(), "probability above one");
        Self::exact(r)
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "{}", self.value),
        }
    }
}

/// Accepts `a/b` fractions and plain decimals such as `0.25`. Decimals with at
/// most 18 fractional digits are kept as exact rationals.
impl FromStr for Probability {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidProbability(format!("cannot parse {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            let num: u64 = num.trim().parse().map_err(|_| bad())?;
            let den: u64 = den.trim().parse().map_err(|_| bad())?;
            return Self::from_ratio(num, den);
        }
        if let Some(r) = parse_decimal(s) {
            if r > Ratio::one() {
                return Err(Error::InvalidProbability(format!("{s} is not in [0, 1]")));
            }
            return Ok(Self::exact(r));
        }
        let v: f64 = s.parse().map_err(|_| bad())?;
        Self::new(v)
    }
}

fn parse_decimal(s: &str) -> Option<Ratio<u64>> {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let frac = frac.trim_end_matches('0');
    if frac.len() > 18 {
        return None;
    }
    let den = 10u64.pow(frac.len() as u32);
    let int: u64 = if int.is_empty() { 0 } else { int.parse().ok()? };
    let frac_v: u64 = if frac.is_empty() {
        0
    } else {
        frac.parse().ok()?
    };
    let num = int.checked_mul(den)?.checked_add(frac_v)?;
    Some(Ratio::new(num, den))
}

/// Binary target source `P(1) = p`, normalized to `0 < p < 1/2`.
///
/// A target above one half is complemented and flagged as mirrored; matchers
/// built for a mirrored source complement their output words.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetSource {
    p: Probability,
    mirrored: bool,
}

impl TargetSource {
    pub fn new(p: Probability) -> Result<Self> {
        let v = p.value();
        let half = match p.as_ratio() {
            Some(r) => r == Ratio::new(1, 2),
            None => v == 0.5,
        };
        if v <= 0.0 || v >= 1.0 || half {
            return Err(Error::InvalidProbability(format!(
                "target p = {p} must lie in (0, 1) and differ from 1/2"
            )));
        }
        if v > 0.5 {
            Ok(TargetSource {
                p: p.complement(),
                mirrored: true,
            })
        } else {
            Ok(TargetSource { p, mirrored: false })
        }
    }

    pub fn from_f64(p: f64) -> Result<Self> {
        Self::new(Probability::new(p)?)
    }

    pub fn from_ratio(num: u64, den: u64) -> Result<Self> {
        Self::new(Probability::from_ratio(num, den)?)
    }

    /// The normalized target, always below one half.
    pub fn p(&self) -> Probability {
        self.p
    }

    pub fn mirrored(&self) -> bool {
        self.mirrored
    }
}

impl AsRef<Probability> for TargetSource {
    fn as_ref(&self) -> &Probability {
        &self.p
    }
}

impl FromStr for TargetSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(s.parse()?)
    }
}

fn xlog2(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// `H(x) = -x log2 x - (1-x) log2(1-x)`.
pub fn binary_entropy(x: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&x), "entropy of {x}");
    -xlog2(x) - xlog2(1.0 - x)
}

/// `D(phat || p)` between Bernoulli distributions, in bits.
///
/// Fails when `phat` puts mass where `p` has none.
pub fn binary_divergence(phat: f64, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&phat) || !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(format!("D({phat} || {p})")));
    }
    if (p == 0.0 && phat > 0.0) || (p == 1.0 && phat < 1.0) {
        return Err(Error::OutOfDomain(format!(
            "D({phat} || {p}) is infinite: support mismatch"
        )));
    }
    let one = if phat == 0.0 {
        0.0
    } else {
        phat * (phat / p).log2()
    };
    let zero = if phat == 1.0 {
        0.0
    } else {
        (1.0 - phat) * ((1.0 - phat) / (1.0 - p)).log2()
    };
    // Rounding can push tiny divergences a hair below zero.
    Ok((one + zero).max(0.0))
}

/// Upper bound `eps log2((1 - p + eps) / (p - eps))` on `H(p) - H(p - eps)`.
pub fn entropy_diff_bound(p: f64, eps: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(format!(
            "p = {p} must lie in (0, 1)"
        )));
    }
    if eps.is_nan() || eps <= 0.0 || p - eps <= 0.0 {
        return Err(Error::OutOfDomain(format!(
            "need 0 < eps < p, got p = {p}, eps = {eps}"
        )));
    }
    Ok(eps * ((1.0 - p + eps) / (p - eps)).log2())
}
