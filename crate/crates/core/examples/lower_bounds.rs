// Lower bound on the optimal divergence, its limiting constant, and the
// bracket on the constant-composition matcher.
//
// Run with `cargo run -p ffdm --example lower_bounds`.

use std::error::Error;

use ffdm::{
    asymptotic_gap_constant, ccdm_bounds, ccdm_design, divergence_decomposed, optimal_k,
    optimal_lower_bound, TargetSource,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let src = TargetSource::from_f64(0.25)?;
    println!(
        "limit of D_opt - log2(n)/2 >= {:.4}",
        asymptotic_gap_constant(&src)
    );
    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>10}",
        "n", "bound", "D_opt", "ccdm lo", "ccdm hi"
    );
    for e in [6u32, 8, 10, 12] {
        let n = 1u64 << e;
        let best = optimal_k(n, &src)?;
        let lb = optimal_lower_bound(n, best.k_hat, &src)?;
        assert!(lb.bound_bits <= best.breakdown.total);

        let design = ccdm_design(n, &src, 2)?;
        let term = divergence_decomposed(&design.spec, &src).codebook_term;
        let b = ccdm_bounds(n, &src, 2)?;
        assert!(b.contains(term));
        println!(
            "{n:>6} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            lb.bound_bits, best.breakdown.total, b.lower, b.upper
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
