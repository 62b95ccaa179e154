//! Plain-text matrix files.
//!
//! The first non-blank line holds the dimension `n`; each of the next `n`
//! lines holds `n` whitespace-separated `re,im` pairs. Lines starting with
//! `#` are ignored.

use num_complex::Complex64;

use crate::complex::ComplexMatrix;
use crate::error::{Error, Result};

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut lines =
        text.lines().enumerate().map(|(k, l)| (k + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (first, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty matrix file".into() })?;
    let n: usize = header
        .parse()
        .map_err(|_| Error::Parse { line: first, msg: format!("expected the dimension, found `{header}`") })?;
    if n == 0 {
        return Err(Error::Parse { line: first, msg: "dimension must be positive".into() });
    }
    let mut data = Vec::with_capacity(n * n);
    for row in 0..n {
        let (line, text) = lines
            .next()
            .ok_or_else(|| Error::Parse { line: first + row + 1, msg: format!("expected {n} rows, found {row}") })?;
        let entries: Vec<&str> = text.split_whitespace().collect();
        if entries.len() != n {
            return Err(Error::Parse { line, msg: format!("expected {n} entries, found {}", entries.len()) });
        }
        for e in entries {
            data.push(parse_entry(e).map_err(|msg| Error::Parse { line, msg })?);
        }
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::Parse { line, msg: format!("unexpected content after {n} rows") });
    }
    ComplexMatrix::from_vec(n, n, data).map_err(|e| Error::Parse { line: first, msg: e.to_string() })
}

fn parse_entry(entry: &str) -> std::result::Result<Complex64, String> {
    let (re, im) = entry.split_once(',').ok_or_else(|| format!("entry `{entry}` is not a `re,im` pair"))?;
    let re: f64 = re.parse().map_err(|_| format!("bad real part in `{entry}`"))?;
    let im: f64 = im.parse().map_err(|_| format!("bad imaginary part in `{entry}`"))?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(format!("entry `{entry}` is not finite"));
    }
    Ok(Complex64::new(re, im))
}

/// Inverse of [`parse_matrix`]; uses shortest round-trip float formatting.
pub fn format_matrix(m: &ComplexMatrix) -> Result<String> {
    let n = m.require_square()?;
    let mut out = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = m.row(i).iter().map(|z| format!("{:?},{:?}", z.re, z.im)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    Ok(out)
}
