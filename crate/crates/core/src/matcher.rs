//! One-to-one fixed-length matching by enumerative coding.
//!
//! The input block is read as a base-`B` integer, most significant digit
//! first, and mapped to the codeword of that rank in canonical order. Within a
//! type set words are ranked with the combinatorial number system, so rank and
//! unrank each cost `O(n)` big-integer operations and never enumerate.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::analysis::optimal_k;
use crate::codebook::{CodebookSpec, GreedySplit};
use crate::combinatorics::{binom_big, BigCount, PrefixCursor};
use crate::error::{Error, Result};
use crate::infotheory::{binary_divergence, TargetSource};

/// A fixed-length binary word, first letter first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitBlock(Vec<bool>);

impl BitBlock {
    pub fn new(bits: Vec<bool>) -> Self {
        BitBlock(bits)
    }

    pub fn zeros(len: usize) -> Self {
        BitBlock(vec![false; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    /// Number of ones.
    pub fn weight(&self) -> u64 {
        self.0.iter().filter(|&&b| b).count() as u64
    }

    pub fn complement(&self) -> Self {
        BitBlock(self.0.iter().map(|b| !b).collect())
    }

    /// The low `len` bits of `mask`, most significant first.
    pub fn from_mask(mask: u64, len: usize) -> Self {
        BitBlock((0..len).rev().map(|i| (mask >> i) & 1 == 1).collect())
    }
}

impl fmt::Display for BitBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitBlock {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidSymbol {
                    symbol: c,
                    radix: 2,
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitBlock)
    }
}

/// Rank of a weight-`w` word among all weight-`w` words of its length in
/// lexicographic order.
fn lex_rank(bits: &[bool], weight: u64) -> BigUint {
    let n = bits.len() as u64;
    if n == 0 {
        return BigUint::zero();
    }
    // Invariant: c = C(a, r) with a positions after the current one and r
    // ones still to place.
    let (mut a, mut r) = (n - 1, weight);
    let mut c = binom_big(a, r);
    let mut rank = BigUint::zero();
    for &bit in bits {
        if bit {
            rank += &c;
        }
        if a == 0 {
            break;
        }
        if bit {
            c = c * r / a;
            r -= 1;
        } else {
            c = c * (a - r) / a;
        }
        a -= 1;
    }
    rank
}

fn lex_unrank(n: u64, weight: u64, mut index: BigUint) -> BitBlock {
    let mut bits = vec![false; n as usize];
    if n == 0 {
        return BitBlock(bits);
    }
    let (mut a, mut r) = (n - 1, weight);
    let mut c = binom_big(a, r);
    for bit in bits.iter_mut() {
        if r == 0 {
            break;
        }
        let one = index >= c;
        if one {
            index -= &c;
            *bit = true;
        }
        if a == 0 {
            break;
        }
        if one {
            c = c * r / a;
            r -= 1;
        } else {
            c = c * (a - r) / a;
        }
        a -= 1;
    }
    BitBlock(bits)
}

/// `|C_{w-1}|`, the number of words lighter than weight `w`.
fn lighter_words(n: u64, weight: u64) -> BigUint {
    if weight == 0 {
        return BigUint::zero();
    }
    let mut cursor = PrefixCursor::new(n);
    while cursor.weight() + 1 < weight {
        cursor.advance();
    }
    cursor.size().clone()
}

/// Position of `codeword` in the canonical order of `spec`, 0-based.
pub fn rank(codeword: &BitBlock, spec: &CodebookSpec) -> Result<BigCount> {
    let n = spec.n();
    if codeword.len() as u64 != n {
        return Err(Error::BlockLength {
            expected: n as usize,
            got: codeword.len(),
        });
    }
    let w = codeword.weight();
    let r = match spec {
        CodebookSpec::UnionOfTypeSets { k, .. } => {
            if w > *k {
                return Err(Error::NotACodeword);
            }
            lighter_words(n, w) + lex_rank(codeword.bits(), w)
        }
        CodebookSpec::ConstantComposition { weight, size, .. } => {
            if w != *weight {
                return Err(Error::NotACodeword);
            }
            let r = lex_rank(codeword.bits(), w);
            if &r >= size.as_biguint() {
                return Err(Error::NotACodeword);
            }
            r
        }
        CodebookSpec::GreedyPrefix { size, .. } => {
            let r = lighter_words(n, w) + lex_rank(codeword.bits(), w);
            if &r >= size.as_biguint() {
                return Err(Error::NotACodeword);
            }
            r
        }
    };
    Ok(BigCount::from(r))
}

/// Codeword at position `index` in the canonical order of `spec`.
pub fn unrank(index: &BigCount, spec: &CodebookSpec) -> Result<BitBlock> {
    let size = spec.size();
    if index >= &size {
        return Err(Error::IndexOutOfRange {
            index: index.to_string(),
            size: size.to_string(),
        });
    }
    let n = spec.n();
    let index = index.as_biguint().clone();
    match spec {
        CodebookSpec::ConstantComposition { weight, .. } => Ok(lex_unrank(n, *weight, index)),
        CodebookSpec::UnionOfTypeSets { .. } | CodebookSpec::GreedyPrefix { .. } => {
            if index.is_zero() {
                return Ok(BitBlock::zeros(n as usize));
            }
            // |C_k| <= index < |C_{k+1}|: the word has weight k + 1.
            let split = GreedySplit::new(n, &index);
            Ok(lex_unrank(n, split.k() + 1, split.extra))
        }
    }
}

/// Largest `m` with `radix^m <= size`, and `radix^m`.
fn largest_power(radix: u32, size: &BigUint) -> (usize, BigUint) {
    debug_assert!(radix >= 2 && !size.is_zero());
    if radix == 2 {
        let m = size.bits() - 1;
        return (m as usize, BigUint::one() << m);
    }
    let mut m = 0;
    let mut pow = BigUint::one();
    loop {
        let next = &pow * radix;
        if &next > size {
            return (m, pow);
        }
        pow = next;
        m += 1;
    }
}

/// Constant-composition matcher design.
#[derive(Debug, Clone, PartialEq)]
pub struct CcdmDesign {
    pub n: u64,
    /// Common weight `w` of all codewords; `w / n` is the optimal n-type.
    pub weight: u64,
    pub radix: u32,
    /// Input block length `m`, with `radix^m <= C(n, w) < radix^(m+1)`.
    pub input_len: usize,
    /// The first `radix^m` words of the type set.
    pub spec: CodebookSpec,
    pub mirrored: bool,
}

/// Weight `w` minimizing `D(w/n || p)`; ties go to the smaller weight.
pub fn optimal_type_weight(n: u64, src: &TargetSource) -> u64 {
    let p = src.p();
    if let Some(r) = p.as_ratio() {
        let num = n as u128 * *r.numer() as u128;
        if num.is_multiple_of(*r.denom() as u128) {
            return (num / *r.denom() as u128) as u64;
        }
    }
    let mut best = (0, f64::INFINITY);
    for w in 0..=n {
        let d = binary_divergence(w as f64 / n as f64, p.value()).unwrap_or(f64::INFINITY);
        if d < best.1 {
            best = (w, d);
        }
    }
    best.0
}

/// Designs the constant-composition matcher of block length `n` for `src` with
/// `radix`-ary input.
pub fn ccdm_design(n: u64, src: &TargetSource, radix: u32) -> Result<CcdmDesign> {
    if n == 0 {
        return Err(Error::OutOfDomain("block length must be positive".into()));
    }
    if radix < 2 {
        return Err(Error::OutOfDomain(format!(
            "input radix {radix} must be at least 2"
        )));
    }
    let weight = optimal_type_weight(n, src);
    let type_size = binom_big(n, weight);
    if type_size.is_zero() {
        return Err(Error::OutOfDomain(format!(
            "empty type set C({n}, {weight})"
        )));
    }
    let (input_len, size) = largest_power(radix, &type_size);
    Ok(CcdmDesign {
        n,
        weight,
        radix,
        input_len,
        spec: CodebookSpec::constant_composition(n, weight, size.into())?,
        mirrored: src.mirrored(),
    })
}

/// A fixed-to-fixed-length matcher over an implicit codebook.
///
/// Only the first `radix^m` codewords in canonical order are addressable,
/// where `m` is the input length. Matchers built for a mirrored target emit
/// complemented codewords.
#[derive(Debug, Clone, PartialEq)]
pub struct Matcher {
    spec: CodebookSpec,
    radix: u32,
    input_len: usize,
    mirrored: bool,
}

impl Matcher {
    pub fn new(spec: CodebookSpec, radix: u32, mirrored: bool) -> Result<Self> {
        if radix < 2 {
            return Err(Error::OutOfDomain(format!(
                "input radix {radix} must be at least 2"
            )));
        }
        let (input_len, _) = largest_power(radix, spec.size().as_biguint());
        Ok(Matcher {
            spec,
            radix,
            input_len,
            mirrored,
        })
    }

    /// Binary-input matcher with `m = floor(log2 |C|)`.
    pub fn from_spec(spec: CodebookSpec) -> Result<Self> {
        Self::new(spec, 2, false)
    }

    pub fn ccdm(n: u64, src: &TargetSource, radix: u32) -> Result<Self> {
        Ok(Self::from(&ccdm_design(n, src, radix)?))
    }

    /// Matcher over the minimum-divergence union of type sets `C_k`.
    pub fn optimal(n: u64, src: &TargetSource, radix: u32) -> Result<Self> {
        let best = optimal_k(n, src)?;
        let spec = CodebookSpec::union_of_type_sets(n, best.k_hat)?;
        Self::new(spec, radix, src.mirrored())
    }

    pub fn spec(&self) -> &CodebookSpec {
        &self.spec
    }

    pub fn radix(&self) -> u32 {
        self.radix
    }

    pub fn input_len(&self) -> usize {
        self.input_len
    }

    pub fn output_len(&self) -> usize {
        self.spec.n() as usize
    }

    pub fn mirrored(&self) -> bool {
        self.mirrored
    }

    /// Maps base-`radix` input digits, most significant first, to a codeword.
    pub fn match_digits(&self, digits: &[u32]) -> Result<BitBlock> {
        if digits.len() != self.input_len {
            return Err(Error::BlockLength {
                expected: self.input_len,
                got: digits.len(),
            });
        }
        let mut index = BigUint::zero();
        for &d in digits {
            if d >= self.radix {
                return Err(Error::InvalidSymbol {
                    symbol: char::from_digit(d, 36).unwrap_or('?'),
                    radix: self.radix,
                });
            }
            index = index * self.radix + d;
        }
        let word = unrank(&BigCount::from(index), &self.spec)?;
        Ok(if self.mirrored {
            word.complement()
        } else {
            word
        })
    }

    /// Inverse of [`Matcher::match_digits`].
    pub fn dematch_digits(&self, codeword: &BitBlock) -> Result<Vec<u32>> {
        if codeword.len() != self.output_len() {
            return Err(Error::BlockLength {
                expected: self.output_len(),
                got: codeword.len(),
            });
        }
        let word = if self.mirrored {
            codeword.complement()
        } else {
            codeword.clone()
        };
        let mut index = rank(&word, &self.spec)?.into_biguint();
        if !fits_digits(&index, self.radix, self.input_len) {
            // Codebook words beyond radix^m are never emitted.
            return Err(Error::NotACodeword);
        }
        let mut digits = vec![0u32; self.input_len];
        for d in digits.iter_mut().rev() {
            *d = (&index % self.radix).to_u32().unwrap();
            index /= self.radix;
        }
        Ok(digits)
    }

    /// Binary input convenience over [`Matcher::match_digits`].
    pub fn match_block(&self, input: &BitBlock) -> Result<BitBlock> {
        self.require_binary()?;
        let digits: Vec<u32> = input.bits().iter().map(|&b| b as u32).collect();
        self.match_digits(&digits)
    }

    pub fn dematch_block(&self, codeword: &BitBlock) -> Result<BitBlock> {
        self.require_binary()?;
        let digits = self.dematch_digits(codeword)?;
        Ok(BitBlock(digits.into_iter().map(|d| d == 1).collect()))
    }

    fn require_binary(&self) -> Result<()> {
        if self.radix != 2 {
            return Err(Error::OutOfDomain(format!(
                "bit blocks need a binary matcher, this one has radix {}",
                self.radix
            )));
        }
        Ok(())
    }
}

fn fits_digits(index: &BigUint, radix: u32, len: usize) -> bool {
    index < &BigUint::from(radix).pow(len as u32)
}

impl From<&CcdmDesign> for Matcher {
    fn from(d: &CcdmDesign) -> Self {
        Matcher {
            spec: d.spec.clone(),
            radix: d.radix,
            input_len: d.input_len,
            mirrored: d.mirrored,
        }
    }
}
