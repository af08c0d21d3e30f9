//! Implicit binary codebooks and their divergence from a memoryless target.
//!
//! A codebook is never materialized for analysis. Its divergence from the
//! i.i.d. target splits exactly into
//!
//! ```text
//! D(U_C || P^n) = [-log2|C| + n H(p_C)] + n D(p_C || p)
//! ```
//!
//! where `p_C` is the letter distribution, the fraction of ones over all
//! positions of all codewords. Only `|C|` and the total weight of the codebook
//! are needed, both of which are exact big integers.
//!
//! Canonical order of codewords is weight ascending, then lexicographic (the
//! word read as a big-endian binary number).

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::combinatorics::{
    binom_big, log2_biguint, ratio_to_f64, BigCount, BoundPair, PrefixCursor,
};
use crate::error::{Error, Result};
use crate::infotheory::{binary_divergence, binary_entropy, Probability};

/// Largest block length for which codewords are enumerated explicitly.
pub const ENUMERATION_LIMIT: u64 = 24;

/// Implicit description of a binary codebook of block length `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodebookSpec {
    /// `C_k`: every word of weight at most `k`.
    UnionOfTypeSets { n: u64, k: u64 },
    /// The first `size` words of weight `weight`, in lexicographic order.
    ConstantComposition { n: u64, weight: u64, size: BigCount },
    /// The `size` most likely words under a target below one half: all of
    /// `C_k` followed by a lexicographic prefix of the weight `k + 1` type set.
    GreedyPrefix { n: u64, size: BigCount },
}

impl CodebookSpec {
    pub fn union_of_type_sets(n: u64, k: u64) -> Result<Self> {
        if k > n {
            return Err(Error::WeightExceedsLength { n, k });
        }
        Ok(CodebookSpec::UnionOfTypeSets { n, k })
    }

    pub fn constant_composition(n: u64, weight: u64, size: BigCount) -> Result<Self> {
        if weight > n {
            return Err(Error::WeightExceedsLength { n, k: weight });
        }
        let max = binom_big(n, weight);
        if size.is_zero() || size.as_biguint() > &max {
            return Err(Error::OutOfDomain(format!(
                "constant-composition size {size} not in [1, C({n},{weight}) = {max}]"
            )));
        }
        Ok(CodebookSpec::ConstantComposition { n, weight, size })
    }

    /// The whole type set of weight `weight`.
    pub fn full_type_set(n: u64, weight: u64) -> Result<Self> {
        Self::constant_composition(n, weight, BigCount::from(binom_big(n, weight)))
    }

    pub fn greedy_prefix(n: u64, size: BigCount) -> Result<Self> {
        let max = BigUint::from(1u32) << n;
        if size.is_zero() || size.as_biguint() > &max {
            return Err(Error::OutOfDomain(format!(
                "greedy codebook size {size} not in [1, 2^{n}]"
            )));
        }
        Ok(CodebookSpec::GreedyPrefix { n, size })
    }

    pub fn n(&self) -> u64 {
        match *self {
            CodebookSpec::UnionOfTypeSets { n, .. }
            | CodebookSpec::ConstantComposition { n, .. }
            | CodebookSpec::GreedyPrefix { n, .. } => n,
        }
    }

    /// Exact number of codewords.
    pub fn size(&self) -> BigCount {
        BigCount::from(self.letter_stats().size)
    }

    pub(crate) fn letter_stats(&self) -> LetterStats {
        match self {
            CodebookSpec::UnionOfTypeSets { n, k } => {
                let mut cursor = PrefixCursor::new(*n);
                while cursor.weight() < *k {
                    cursor.advance();
                }
                LetterStats::new(*n, cursor.size().clone(), cursor.weight_sum().clone())
            }
            CodebookSpec::ConstantComposition { n, weight, size } => LetterStats {
                n: *n,
                size: size.as_biguint().clone(),
                weight_sum: size.as_biguint() * *weight,
                composition: Some(*weight),
            },
            CodebookSpec::GreedyPrefix { n, size } => {
                let split = GreedySplit::new(*n, size.as_biguint());
                LetterStats::new(
                    *n,
                    size.as_biguint().clone(),
                    split.cursor.weight_sum() + &split.extra * (split.k() + 1),
                )
            }
        }
    }
}

/// Position of a greedy codebook size between consecutive `|C_k|`:
/// `size = |C_k| + extra` with `0 <= extra < C(n, k + 1)`.
pub(crate) struct GreedySplit {
    pub(crate) cursor: PrefixCursor,
    pub(crate) extra: BigUint,
}

impl GreedySplit {
    pub(crate) fn new(n: u64, size: &BigUint) -> Self {
        let mut cursor = PrefixCursor::new(n);
        while cursor.weight() < n && &(cursor.size() + cursor.next_binom()) <= size {
            cursor.advance();
        }
        let extra = size - cursor.size();
        GreedySplit { cursor, extra }
    }

    pub(crate) fn k(&self) -> u64 {
        self.cursor.weight()
    }
}

/// Codebook size, total weight and block length: everything the divergence
/// decomposition depends on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct LetterStats {
    pub(crate) n: u64,
    pub(crate) size: BigUint,
    pub(crate) weight_sum: BigUint,
    /// Common weight of every codeword, when there is one.
    pub(crate) composition: Option<u64>,
}

impl LetterStats {
    pub(crate) fn new(n: u64, size: BigUint, weight_sum: BigUint) -> Self {
        LetterStats {
            n,
            size,
            weight_sum,
            composition: None,
        }
    }

    pub(crate) fn letter_distribution(&self) -> Probability {
        let den = &self.size * self.n;
        if den.is_zero() {
            return Probability::from_ratio(0, 1).unwrap();
        }
        if let Some(w) = self.composition {
            return Probability::from_ratio(w, self.n).unwrap();
        }
        if den.bits() > 256 {
            // Reduction to a u64 fraction is hopeless at this size.
            return Probability::new(ratio_to_f64(&self.weight_sum, &den).clamp(0.0, 1.0)).unwrap();
        }
        let g = self.weight_sum.gcd(&den);
        let (num, den) = (&self.weight_sum / &g, den / &g);
        match (num.to_u64(), den.to_u64()) {
            (Some(a), Some(b)) => Probability::from_ratio(a, b).unwrap(),
            _ => Probability::new(ratio_to_f64(&num, &den).clamp(0.0, 1.0)).unwrap(),
        }
    }

    /// Whether `p_C` equals `target` as exact rationals.
    fn matches_exactly(&self, target: &Probability) -> bool {
        match target.as_ratio() {
            Some(r) => &self.weight_sum * *r.denom() == &self.size * self.n * *r.numer(),
            None => false,
        }
    }

    pub(crate) fn breakdown(&self, target: &Probability) -> DivergenceBreakdown {
        let p_letter = self.letter_distribution();
        let log2_size = log2_biguint(&self.size);
        let nf = self.n as f64;
        let codebook_term = -log2_size + nf * binary_entropy(p_letter.value());
        let letter_term = if self.matches_exactly(target) {
            0.0
        } else {
            binary_divergence(p_letter.value(), target.value())
                .map(|d| nf * d)
                .unwrap_or(f64::INFINITY)
        };
        DivergenceBreakdown {
            total: codebook_term + letter_term,
            codebook_term,
            letter_term,
            p_letter,
            log2_size,
        }
    }
}

/// The two-term split of the divergence between a uniform codebook and the
/// i.i.d. target, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceBreakdown {
    pub total: f64,
    /// `-log2|C| + n H(p_C)`, the divergence from the i.i.d. letter
    /// distribution; independent of the target.
    pub codebook_term: f64,
    /// `n D(p_C || p)`.
    pub letter_term: f64,
    pub p_letter: Probability,
    pub log2_size: f64,
}

pub fn codebook_size(spec: &CodebookSpec) -> BigCount {
    spec.size()
}

/// Letter distribution `p_C`: total weight over `n |C|`, reduced exactly.
pub fn letter_distribution(spec: &CodebookSpec) -> Probability {
    spec.letter_stats().letter_distribution()
}

/// Divergence through the codebook/letter decomposition. Works at any block
/// length; only the size and total weight of the codebook are computed.
///
/// `target` should lie strictly inside `(0, 1)`; otherwise the letter term can
/// be infinite.
pub fn divergence_decomposed<T: AsRef<Probability>>(
    spec: &CodebookSpec,
    target: &T,
) -> DivergenceBreakdown {
    spec.letter_stats().breakdown(target.as_ref())
}

/// Divergence by direct summation over every codeword. Limited to
/// `n <= ENUMERATION_LIMIT`.
pub fn divergence_exact<T: AsRef<Probability>>(spec: &CodebookSpec, target: &T) -> Result<f64> {
    let p = target.as_ref().value();
    let n = spec.n();
    let (log_one, log_zero) = (p.log2(), (1.0 - p).log2());
    let mut count = 0u64;
    let mut sum = NeumaierSum::default();
    for word in codewords(spec)? {
        let w = word.count_ones() as f64;
        let log_prob = w * log_one + (n as f64 - w) * log_zero;
        sum.add(-log_prob);
        count += 1;
    }
    let m = count as f64;
    Ok(-m.log2() + sum.value() / m)
}

#[derive(Default)]
struct NeumaierSum {
    sum: f64,
    carry: f64,
}

impl NeumaierSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Every codeword of `spec` in canonical order, as a bit mask whose most
/// significant of the `n` bits is the first letter.
pub fn codewords(spec: &CodebookSpec) -> Result<Codewords> {
    let n = spec.n();
    if n > ENUMERATION_LIMIT {
        return Err(Error::EnumerationLimit {
            n,
            limit: ENUMERATION_LIMIT,
        });
    }
    let (first_weight, last_weight, limit) = match spec {
        CodebookSpec::UnionOfTypeSets { k, .. } => (0, *k, u64::MAX),
        CodebookSpec::ConstantComposition { weight, size, .. } => {
            (*weight, *weight, size.to_u64().unwrap())
        }
        CodebookSpec::GreedyPrefix { size, .. } => (0, n, size.to_u64().unwrap()),
    };
    Ok(Codewords {
        n: n as u32,
        weight: first_weight as u32,
        last_weight: last_weight as u32,
        current: Some(lowest_word(first_weight as u32)),
        remaining: limit,
    })
}

fn lowest_word(weight: u32) -> u64 {
    (1u64 << weight) - 1
}

/// Iterator returned by [`codewords`].
#[derive(Debug, Clone)]
pub struct Codewords {
    n: u32,
    weight: u32,
    last_weight: u32,
    current: Option<u64>,
    remaining: u64,
}

impl Iterator for Codewords {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.remaining == 0 {
            return None;
        }
        let word = self.current?;
        self.remaining -= 1;
        let highest = lowest_word(self.weight) << (self.n - self.weight);
        self.current = if word != highest {
            // Next word of the same weight (Gosper's hack).
            let low = word & word.wrapping_neg();
            let ripple = word + low;
            Some((((ripple ^ word) >> 2) / low) | ripple)
        } else if self.weight < self.last_weight {
            self.weight += 1;
            Some(lowest_word(self.weight))
        } else {
            None
        };
        Some(word as u32)
    }
}

/// Bracket `0 <= k/n - p_{C_k} <= (1 - k/n) / (n (1 - 2k/n)) + 1 / (2 n^2 (1 - 2k/n)^2)`
/// for `k < n/2`.
pub fn pletter_gap_bounds(n: u64, k: u64) -> Result<BoundPair> {
    if n == 0 || 2 * k >= n {
        return Err(Error::OutOfDomain(format!(
            "need k < n/2, got n = {n}, k = {k}"
        )));
    }
    Ok(BoundPair {
        lower: 0.0,
        upper: pletter_gap_upper(n as f64, k as f64 / n as f64),
    })
}

/// `(1 - q) / (n (1 - 2q)) + 1 / (2 n^2 (1 - 2q)^2)`.
pub(crate) fn pletter_gap_upper(n: f64, q: f64) -> f64 {
    let s = 1.0 - 2.0 * q;
    (1.0 - q) / (n * s) + 1.0 / (2.0 * n * n * s * s)
}
