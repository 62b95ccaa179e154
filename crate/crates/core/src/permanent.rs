//! Matrix permanents and Fock-transition submatrices.

use num_complex::Complex64;

use crate::complex::{ComplexMatrix, C0, C1};
use crate::error::{Error, Result};

/// Largest matrix dimension accepted by [`permanent`]. The cost is `O(2ⁿ·n)`.
pub const MAX_PERMANENT_DIM: usize = 30;

/// Permanent by Ryser's inclusion-exclusion formula.
///
/// Column subsets are visited in Gray-code order so each step adds or removes
/// a single column from the running row sums, giving `O(2ⁿ·n)` total work.
pub fn permanent(m: &ComplexMatrix) -> Result<Complex64> {
    if m.is_empty() {
        return Ok(C1);
    }
    let n = m.require_square()?;
    if n > MAX_PERMANENT_DIM {
        return Err(Error::Size(format!("permanent of a {n}x{n} matrix exceeds the cap of {MAX_PERMANENT_DIM}")));
    }
    if n == 1 {
        return Ok(m.get(0, 0));
    }

    // Column-major copy so that adding column j walks contiguous memory.
    let columns: Vec<Vec<Complex64>> = (0..n).map(|j| (0..n).map(|i| m.get(i, j)).collect()).collect();
    let mut row_sums = vec![C0; n];
    let mut total = C0;
    let mut gray: u64 = 0;
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        gray ^= 1 << j;
        let col = &columns[j];
        if gray & (1 << j) != 0 {
            row_sums.iter_mut().zip(col).for_each(|(s, &c)| *s += c);
        } else {
            row_sums.iter_mut().zip(col).for_each(|(s, &c)| *s -= c);
        }
        let prod: Complex64 = row_sums.iter().product();
        if gray.count_ones().is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(if n % 2 == 0 { total } else { -total })
}

/// Builds `M[S,T]`: row `i` repeated `row_multiplicities[i]` times and column
/// `j` repeated `col_multiplicities[j]` times, in index order.
///
/// With all multiplicities zero the result is the empty matrix.
pub fn submatrix_with_repetition(
    m: &ComplexMatrix,
    row_multiplicities: &[usize],
    col_multiplicities: &[usize],
) -> Result<ComplexMatrix> {
    if row_multiplicities.len() != m.rows() || col_multiplicities.len() != m.cols() {
        return Err(Error::Shape(format!(
            "multiplicity vectors of length {}/{} do not match a {}x{} matrix",
            row_multiplicities.len(),
            col_multiplicities.len(),
            m.rows(),
            m.cols()
        )));
    }
    let row_total: usize = row_multiplicities.iter().sum();
    let col_total: usize = col_multiplicities.iter().sum();
    if row_total != col_total {
        return Err(Error::Shape(format!(
            "row multiplicities sum to {row_total} but column multiplicities sum to {col_total}"
        )));
    }
    if row_total == 0 {
        return Ok(ComplexMatrix::empty());
    }
    let expand = |mult: &[usize]| -> Vec<usize> {
        mult.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i, k)).collect()
    };
    let rows = expand(row_multiplicities);
    let cols = expand(col_multiplicities);
    ComplexMatrix::from_fn(rows.len(), cols.len(), |a, b| m.get(rows[a], cols[b]))
}
