//! CSV emission and console summaries.

use antsel_core::BerRecord;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

pub const CSV_HEADER: &str =
    "scheme,m,k_s,phi,tau,snr_db,trials,symbols_per_channel,seed,bits_sent,bit_errors,ber,stderr";

/// Writes one row per record, in order. Floats use Rust's shortest
/// round-trip formatting, so identical runs produce byte-identical files.
pub fn write_csv(records: &[BerRecord], path: &Path) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        let p = &r.point;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            p.scheme,
            p.m,
            p.k_s,
            p.phi,
            p.tau,
            p.snr_db,
            p.trials,
            p.symbols_per_channel,
            p.seed,
            r.bits_sent,
            r.bit_errors,
            r.ber,
            r.stderr
        )?;
    }
    w.flush()
}

pub fn print_summary(records: &[BerRecord], out: &mut impl Write) -> io::Result<()> {
    writeln!(
        out,
        "{:<14} {:>4} {:>4} {:>5} {:>5} {:>7} {:>12} {:>11} {:>10}",
        "scheme", "m", "k_s", "phi", "tau", "snr_db", "bits", "errors", "ber"
    )?;
    for r in records {
        let p = &r.point;
        writeln!(
            out,
            "{:<14} {:>4} {:>4} {:>5} {:>5} {:>7} {:>12} {:>11} {:>10.3e}",
            p.scheme, p.m, p.k_s, p.phi, p.tau, p.snr_db, r.bits_sent, r.bit_errors, r.ber
        )?;
    }
    Ok(())
}
