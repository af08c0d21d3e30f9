// Sweeps n over powers of two and writes the comparison table as CSV.
//
// Run with `cargo run -p ffdm --example growth_sweep > sweep.csv`.

use std::error::Error;
use std::io;

use ffdm::report::write_sweep_csv;
use ffdm::{sweep, TargetSource};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let src = TargetSource::from_f64(0.25)?;
    let n_values: Vec<u64> = (6..=12).map(|e| 1u64 << e).collect();
    let rows = sweep(&src, &n_values, 2);
    for r in &rows {
        assert!(r.d_ccdm > r.d_opt_total);
    }
    write_sweep_csv(&mut io::stdout().lock(), &rows)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
