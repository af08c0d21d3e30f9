// Constant-composition and optimal matchers: map uniform input blocks to
// biased codewords and back.
//
// Run with `cargo run -p ffdm --example ccdm_roundtrip`.

use std::error::Error;

use ffdm::{ccdm_design, BitBlock, Matcher, TargetSource};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let src: TargetSource = "0.25".parse()?;
    let design = ccdm_design(16, &src, 2)?;
    println!(
        "CCDM n={} weight={} input bits={}",
        design.n, design.weight, design.input_len
    );

    for matcher in [Matcher::ccdm(16, &src, 2)?, Matcher::optimal(16, &src, 2)?] {
        let m = matcher.input_len();
        let mut ones = 0;
        for x in 0..(1u64 << m) {
            let input = BitBlock::from_mask(x, m);
            let word = matcher.match_block(&input)?;
            assert_eq!(matcher.dematch_block(&word)?, input);
            ones += word.weight();
        }
        let freq = ones as f64 / ((1u64 << m) as f64 * matcher.output_len() as f64);
        println!(
            "{:?}: {m} -> {} bits, empirical P(1) = {freq:.4}",
            matcher.spec(),
            matcher.output_len()
        );
        let input: BitBlock = "1".repeat(m).parse()?;
        println!("  {input} -> {}", matcher.match_block(&input)?);
    }

    // A target above 1/2 is served by complementing the matcher for 1 - p.
    let mirrored = Matcher::ccdm(8, &"3/4".parse()?, 2)?;
    let word = mirrored.match_block(&"0000".parse()?)?;
    println!("p=3/4, 0000 -> {word}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
