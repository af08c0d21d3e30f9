//! Locale-independent CSV output for sweeps.
//!
//! Layout: a `# schema=1` comment line, the header, then one row per record.
//! Reals carry 12 significant digits with `.` as decimal separator; lines end
//! in `\n`. Non-finite values print as `nan`, `inf` or `-inf`.

use std::io::{self, Write};

use crate::analysis::SweepRecord;

pub const SCHEMA_LINE: &str = "# schema=1";

pub const CSV_HEADER: &str = "n,k_hat,log2_size,p_letter,d_opt_total,d_opt_codebook_term,\
d_opt_letter_term,eq17_lower,d_ccdm,ccdm_lower,ccdm_upper,gap,flags";

const SIGNIFICANT_DIGITS: i32 = 12;

/// `x` with 12 significant digits, in plain decimal notation for magnitudes in
/// `[1e-6, 1e15)` and scientific notation otherwise.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-6..15).contains(&exp) {
        return format!("{:.*e}", (SIGNIFICANT_DIGITS - 1) as usize, x);
    }
    let decimals = (SIGNIFICANT_DIGITS - 1 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

impl SweepRecord {
    pub fn to_csv_row(&self) -> String {
        let reals = [
            self.log2_size,
            self.p_letter,
            self.d_opt_total,
            self.d_opt_codebook_term,
            self.d_opt_letter_term,
            self.eq17_lower,
            self.d_ccdm,
            self.ccdm_lower,
            self.ccdm_upper,
            self.gap,
        ];
        let mut row = format!("{},{}", self.n, self.k_hat);
        for x in reals {
            row.push(',');
            row.push_str(&format_real(x));
        }
        row.push(',');
        row.push_str(&self.flags);
        row
    }
}

pub fn write_sweep_csv<W: Write + ?Sized>(out: &mut W, records: &[SweepRecord]) -> io::Result<()> {
    writeln!(out, "{SCHEMA_LINE}")?;
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.to_csv_row())?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(0.0), "0");
        assert_eq!(format_real(0.25), "0.25");
        assert_eq!(format_real(-2.844_176_936_706_153), "-2.84417693671");
        assert_eq!(format_real(0.735_026_131_158_291_6), "0.735026131158");
        assert_eq!(format_real(13_107.123_456_789_01), "13107.1234568");
        assert_eq!(format_real(1e-9), "1.00000000000e-9");
        assert_eq!(format_real(f64::NAN), "nan");
        assert_eq!(format_real(f64::NEG_INFINITY), "-inf");
        assert_eq!(format_real(3.0), "3");
    }

    #[test]
    fn header_has_thirteen_columns() {
        assert_eq!(CSV_HEADER.split(',').count(), 13);
        let r = SweepRecord {
            n: 8,
            k_hat: 3,
            log2_size: 1.0,
            p_letter: 0.5,
            d_opt_total: 1.0,
            d_opt_codebook_term: 1.0,
            d_opt_letter_term: 0.0,
            eq17_lower: f64::NAN,
            d_ccdm: 1.0,
            ccdm_lower: 0.0,
            ccdm_upper: 2.0,
            gap: -0.5,
            flags: "khat_ge_half".into(),
        };
        let row = r.to_csv_row();
        assert_eq!(row.split(',').count(), 13);
        assert_eq!(row, "8,3,1,0.5,1,1,0,nan,1,0,2,-0.5,khat_ge_half");
    }

    #[test]
    fn empty_sweep_is_header_only() {
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            format!("{SCHEMA_LINE}\n{CSV_HEADER}\n")
        );
    }
}
