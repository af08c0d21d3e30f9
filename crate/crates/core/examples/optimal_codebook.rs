// Finds the best union of type sets and checks it against greedy and
// exhaustive codebook searches.
//
// Run with `cargo run -p ffdm --example optimal_codebook`.

use std::error::Error;

use ffdm::{
    endpoint_property_check, exhaustive_best_divergence, greedy_divergence, optimal_k,
    union_divergence_scan, BigCount, TargetSource,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let src = TargetSource::from_ratio(1, 4)?;
    println!("n = 8, p = 1/4");
    for (k, b) in union_divergence_scan(8, &src).iter().enumerate() {
        println!("  k={k}  |C_k|=2^{:.3}  D={:.6}", b.log2_size, b.total);
    }
    let best = optimal_k(8, &src)?;
    println!("k_hat = {}, D = {:.6}", best.k_hat, best.breakdown.total);

    let n = 4;
    for m in 1..=(1u64 << n) {
        let greedy = greedy_divergence(n, &src, &BigCount::from(m))?;
        let exhaustive = exhaustive_best_divergence(n, &src, m)?;
        assert!((greedy - exhaustive).abs() < 1e-12);
    }
    println!("greedy equals exhaustive search for every size at n = {n}");

    for k in 0..10 {
        assert!(endpoint_property_check(10, &src, k)?);
    }
    println!("intermediate greedy sizes never beat both neighbouring unions at n = 10");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
