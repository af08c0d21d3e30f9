// Splits the divergence of a codebook into its size term and its letter
// term, and checks the split against brute-force enumeration.
//
// Run with `cargo run -p ffdm --example divergence_breakdown`.

use std::error::Error;

use ffdm::{divergence_decomposed, divergence_exact, BigCount, CodebookSpec, TargetSource};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let target: TargetSource = "1/4".parse()?;
    println!("n = 12, p = 1/4");
    let n = 12;
    let specs = [
        (
            "union of weights 0..=3",
            CodebookSpec::union_of_type_sets(n, 3)?,
        ),
        ("all words of weight 3", CodebookSpec::full_type_set(n, 3)?),
        (
            "128 words of weight 3",
            CodebookSpec::constant_composition(n, 3, BigCount::from(128u64))?,
        ),
        (
            "1000 most likely words",
            CodebookSpec::greedy_prefix(n, BigCount::from(1000u64))?,
        ),
    ];
    println!(
        "{:<24} {:>9} {:>9} {:>9} {:>9}",
        "codebook", "total", "size", "letter", "enum"
    );
    for (label, spec) in &specs {
        let b = divergence_decomposed(spec, &target);
        let brute = divergence_exact(spec, &target)?;
        assert!((b.total - brute).abs() < 1e-9);
        println!(
            "{label:<24} {:>9.5} {:>9.5} {:>9.5} {:>9.5}",
            b.total, b.codebook_term, b.letter_term, brute
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
