use std::time::{Duration, Instant};

use ffdm::{unrank, BigCount, CodebookSpec};
use num_bigint::BigUint;

/// Best-of-five wall time for unranking indices spread over the codebook.
fn unrank_time(n: u64) -> Duration {
    let spec = CodebookSpec::union_of_type_sets(n, n / 4).unwrap();
    let size = spec.size().into_biguint();
    let indices: Vec<BigCount> = (1u32..=16)
        .map(|j| BigCount::from(&size * BigUint::from(j) / 17u32))
        .collect();
    (0..5)
        .map(|_| {
            let start = Instant::now();
            for idx in &indices {
                std::hint::black_box(unrank(idx, &spec).unwrap());
            }
            start.elapsed()
        })
        .min()
        .unwrap()
}

#[test]
fn unrank_cost_grows_polynomially() {
    // O(n) big-integer steps on O(n)-bit numbers: about 16x for 4x the
    // length. Enumeration would be astronomically slower.
    let small = unrank_time(1024);
    let large = unrank_time(4096);
    let ratio = large.as_secs_f64() / small.as_secs_f64().max(1e-6);
    assert!(
        ratio < 64.0,
        "4x length cost {ratio:.1}x ({small:?} -> {large:?})"
    );
}
