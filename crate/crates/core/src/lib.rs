//! Fixed-to-fixed-length, binary-output, one-to-one distribution matching.
//!
//! A distribution matcher maps uniformly distributed input blocks of length
//! `m` one-to-one onto binary output blocks of length `n` whose distribution
//! should resemble `n` independent draws from a biased coin `P(1) = p`. Its
//! quality is the unnormalized informational divergence between the uniform
//! distribution on the codebook and the i.i.d. target.
//!
//! The crate provides
//!
//! - exact big-integer binomial machinery and the classical Stirling-type
//!   bounds ([`combinatorics`]),
//! - binary entropy and divergence ([`infotheory`]),
//! - implicit codebooks and the exact codebook/letter split of the divergence
//!   ([`codebook`]),
//! - the matchers themselves, by enumerative coding ([`matcher`]),
//! - the optimal union-of-type-sets codebook, brute-force optimality oracles,
//!   and the logarithmic lower/upper bounds ([`analysis`]),
//! - CSV output for sweeps ([`report`]) and the command-line front end
//!   ([`cli`]).
//!
//! ```
//! use ffdm::{Matcher, TargetSource};
//!
//! let target: TargetSource = "1/4".parse().unwrap();
//! let matcher = Matcher::ccdm(4, &target, 2).unwrap();
//! let word = matcher.match_block(&"11".parse().unwrap()).unwrap();
//! assert_eq!(word.to_string(), "1000");
//! assert_eq!(matcher.dematch_block(&word).unwrap().to_string(), "11");
//! ```

pub mod analysis;
pub mod cli;
pub mod codebook;
pub mod combinatorics;
mod error;
pub mod infotheory;
pub mod matcher;
pub mod report;

pub use analysis::{
    asymptotic_gap_constant, ccdm_bounds, endpoint_property_check, exhaustive_best_divergence,
    greedy_divergence, optimal_k, optimal_lower_bound, sweep, sweep_record, union_divergence_scan,
    LowerBoundReport, OptimalResult, SweepRecord,
};
pub use codebook::{
    codebook_size, divergence_decomposed, divergence_exact, letter_distribution,
    pletter_gap_bounds, CodebookSpec, DivergenceBreakdown,
};
pub use combinatorics::{
    binom, center_weighted_sum, log2_big, partial_binom_sum, partial_sum_bounds, stirling_bounds,
    stirling_bounds_log2, BigCount, BoundPair,
};
pub use error::{Error, Result};
pub use infotheory::{
    binary_divergence, binary_entropy, entropy_diff_bound, Probability, TargetSource,
};
pub use matcher::{ccdm_design, rank, unrank, BitBlock, CcdmDesign, Matcher};
