//! CSV output of sweeps and fits.
//!
//! Floats are written by [`fmt_g`] with 12 significant digits. Rows come in
//! grid order, then pair or detector order.

use std::io::Write;

use super::{pair_label, CountRecord, FringeAnalysis, SinglesAnalysis, DETECTORS, INPUT_MODES, PAIRS};
use crate::error::{Error, Result};

const DIGITS: usize = 12;

/// `%.12g`-style formatting: fixed notation for decimal exponents in
/// `[−4, 12)`, scientific otherwise, trailing zeros trimmed.
pub fn fmt_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..DIGITS as i32).contains(&exp) {
        let decimals = (DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::Domain(format!("csv output failed: {e}"))
}

fn writer<W: Write>(out: W, header: &[&str]) -> Result<csv::Writer<W>> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(header).map_err(csv_err)?;
    Ok(w)
}

/// `alpha_rad,theta_prime_rad,pair,counts,accidentals`
pub fn write_fringes<W: Write>(out: W, records: &[CountRecord]) -> Result<()> {
    let mut w = writer(out, &["alpha_rad", "theta_prime_rad", "pair", "counts", "accidentals"])?;
    for r in records {
        for k in 0..PAIRS.len() {
            w.write_record([
                fmt_g(r.alpha),
                fmt_g(r.theta_prime),
                pair_label(k),
                r.pair_counts[k].to_string(),
                fmt_g(r.accidentals_estimate[k]),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush().map_err(csv_err)
}

/// `alpha_rad,input,detector,counts`
pub fn write_singles<W: Write>(out: W, records: &[CountRecord]) -> Result<()> {
    let mut w = writer(out, &["alpha_rad", "input", "detector", "counts"])?;
    for r in records {
        for (slot, input) in [INPUT_MODES.0, INPUT_MODES.1].into_iter().enumerate() {
            for d in 0..DETECTORS {
                w.write_record([
                    fmt_g(r.alpha),
                    input.to_string(),
                    d.to_string(),
                    r.singles_counts[slot][d].to_string(),
                ])
                .map_err(csv_err)?;
            }
        }
    }
    w.flush().map_err(csv_err)
}

/// `pair,offset,amplitude,phase0_rad,visibility`
pub fn write_fits<W: Write>(out: W, analysis: &FringeAnalysis) -> Result<()> {
    let mut w = writer(out, &["pair", "offset", "amplitude", "phase0_rad", "visibility"])?;
    for pf in &analysis.fits {
        let f = &pf.fit;
        w.write_record([
            pair_label(pf.pair),
            fmt_g(f.offset),
            fmt_g(f.amplitude),
            fmt_g(f.phase0),
            fmt_g(f.visibility),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(csv_err)
}

/// `input,detector,mean_counts,rse,amplitude_fraction`
pub fn write_rse<W: Write>(out: W, analysis: &SinglesAnalysis) -> Result<()> {
    let mut w = writer(out, &["input", "detector", "mean_counts", "rse", "amplitude_fraction"])?;
    for t in &analysis.traces {
        w.write_record([
            t.input.to_string(),
            t.detector.to_string(),
            fmt_g(t.mean_counts),
            fmt_g(t.rse),
            fmt_g(t.amplitude_fraction),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(csv_err)
}
