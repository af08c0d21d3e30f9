// Exact binomial coefficients next to their Stirling and partial-sum
// brackets, plus the centred weighted-sum identity.
//
// Run with `cargo run -p ffdm --example binomial_bounds`.

use std::error::Error;

use ffdm::{
    binom, center_weighted_sum, partial_binom_sum, partial_sum_bounds, stirling_bounds_log2,
    BigCount,
};
use num_rational::Ratio;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p = Ratio::new(1u64, 4);
    println!(
        "{:>6} {:>12} {:>12} {:>12}",
        "n", "lower", "log2 C(n,np)", "upper"
    );
    for n in [4u64, 16, 64, 256, 1024] {
        let k = n / 4;
        let exact = binom(n, k).log2()?;
        let b = stirling_bounds_log2(n, p)?;
        assert!(b.contains(exact));
        println!("{n:>6} {:>12.4} {exact:>12.4} {:>12.4}", b.lower, b.upper);
    }

    let n = 200;
    let sum = partial_binom_sum(n, 50)?;
    let b = partial_sum_bounds(n, p)?;
    println!("\nsum_(i<=50) C(200, i) = {sum}");
    println!("bracket: [{:.6e}, {:.6e}]", b.lower, b.upper);

    for (n, k) in [(10u64, 4u64), (64, 20)] {
        let lhs = center_weighted_sum(n, k)?;
        let rhs = BigCount::from(binom(n, k + 1).into_biguint() * (k + 1));
        assert_eq!(lhs, rhs);
        println!(
            "sum_(i<={k}) C({n},i)(n-2i) = {lhs} = ({k}+1) C({n},{})",
            k + 1
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
