//! Dense complex matrices and the equivalence predicates used throughout the
//! crate.
//!
//! Matrices are stored row-major. Every constructor rejects non-finite
//! entries, so downstream code never has to re-check for NaN.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const C0: Complex64 = Complex64::new(0.0, 0.0);
pub const C1: Complex64 = Complex64::new(1.0, 0.0);
pub const CI: Complex64 = Complex64::new(0.0, 1.0);

/// Absolute entrywise tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance(f64);

impl Tolerance {
    /// Tolerance used whenever a caller does not override it.
    pub const DEFAULT: Tolerance = Tolerance(1e-9);

    pub fn new(eps: f64) -> Result<Self> {
        if eps.is_finite() && eps >= 0.0 {
            Ok(Tolerance(eps))
        } else {
            Err(Error::Domain(format!("tolerance must be finite and >= 0, got {eps}")))
        }
    }

    pub fn eps(self) -> f64 {
        self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::DEFAULT
    }
}

/// Dense complex matrix, row-major.
///
/// Shapes are at least 1x1, except for the empty 0x0 matrix produced when a
/// Fock transition has no photons (see [`ComplexMatrix::empty`]).
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("matrix must be at least 1x1, got {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Domain(format!("non-finite entry at ({}, {})", pos / cols, pos % cols)));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.concat())
    }

    /// Builds a matrix from real entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_vec(rows, cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix must be at least 1x1");
        ComplexMatrix { rows, cols, data: vec![C0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C1;
        }
        m
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// The 0x0 matrix. Its permanent is the empty product, 1.
    pub fn empty() -> Self {
        ComplexMatrix { rows: 0, cols: 0, data: Vec::new() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::Shape(format!("expected a square matrix, got {}x{}", self.rows, self.cols)))
        }
    }

    pub fn require_same_shape(&self, other: &ComplexMatrix) -> Result<()> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(Error::Shape(format!("shape mismatch: {}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols)))
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self.get(i, j).conj());
            }
        }
        ComplexMatrix { rows: self.cols, cols: self.rows, data: out }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ComplexMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * c).collect() }
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = vec![C0; self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == C0 {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        Ok(ComplexMatrix { rows: self.rows, cols: rhs.cols, data: out })
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "cannot apply {}x{} matrix to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> Result<f64> {
        self.require_same_shape(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Determinant of a 2x2 matrix.
    pub fn det2(&self) -> Result<Complex64> {
        if self.rows != 2 || self.cols != 2 {
            return Err(Error::Shape(format!("det2 needs a 2x2 matrix, got {}x{}", self.rows, self.cols)));
        }
        Ok(self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0))
    }

    /// Multiplies rows `a` and `b` in place by a 2x2 block acting from the left.
    pub(crate) fn mix_rows(&mut self, a: usize, b: usize, block: [[Complex64; 2]; 2]) {
        for j in 0..self.cols {
            let x = self.get(a, j);
            let y = self.get(b, j);
            self[(a, j)] = block[0][0] * x + block[0][1] * y;
            self[(b, j)] = block[1][0] * x + block[1][1] * y;
        }
    }

    /// Multiplies columns `a` and `b` in place by a 2x2 block acting from the right.
    pub(crate) fn mix_cols(&mut self, a: usize, b: usize, block: [[Complex64; 2]; 2]) {
        for i in 0..self.rows {
            let x = self.get(i, a);
            let y = self.get(i, b);
            self[(i, a)] = x * block[0][0] + y * block[1][0];
            self[(i, b)] = x * block[0][1] + y * block[1][1];
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on a shape mismatch; use [`ComplexMatrix::matmul`] for a fallible product.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

/// Row-major, comma-separated `re+imi` pairs, one matrix row per line.
impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| {
                    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
                    match f.precision() {
                        Some(p) => format!("{:.*}{}{:.*}i", p, z.re, sign, p, z.im.abs()),
                        None => format!("{}{}{}i", z.re, sign, z.im.abs()),
                    }
                })
                .collect();
            writeln!(f, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// True iff `M†M` deviates from the identity by at most `tol` in every entry.
pub fn is_unitary(m: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    let n = m.require_square()?;
    let gram = &m.adjoint() * m;
    Ok(gram.max_abs_diff(&ComplexMatrix::identity(n))? <= tol.eps())
}

/// Unit-modulus version of `z`, or 1 when `z` vanishes.
pub(crate) fn unit_phase(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r > 0.0 {
        z / r
    } else {
        C1
    }
}

/// True iff `A ≈ c·B` for some unimodular `c`.
///
/// `c` is fixed by the largest-magnitude entry of `B`, so the check is exact
/// rather than an optimization over the phase.
pub fn equal_up_to_global_phase(a: &ComplexMatrix, b: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    a.require_same_shape(b)?;
    let pivot = b.as_slice().iter().enumerate().max_by(|x, y| x.1.norm().total_cmp(&y.1.norm())).map(|(k, _)| k);
    let c = match pivot {
        Some(k) if b.as_slice()[k].norm() > 0.0 => unit_phase(a.as_slice()[k] / b.as_slice()[k]),
        _ => C1,
    };
    Ok(a.max_abs_diff(&b.scale(c))? <= tol.eps())
}

/// True iff `A ≈ D₁·B·D₂` for diagonal unimodular `D₁`, `D₂`.
///
/// Zero patterns (entries with modulus at most `tol`) must agree exactly. The
/// phases are fixed constructively: starting from `D₁[0] = 1`, each nonzero
/// entry of row 0 fixes a column phase, each nonzero entry of a fixed column
/// fixes a row phase, and so on. For matrices without zero entries this is
/// exactly the first-row / first-column normalization. Disconnected blocks
/// restart from their first unvisited row.
pub fn equal_up_to_diagonal_phases(a: &ComplexMatrix, b: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    a.require_same_shape(b)?;
    a.require_square()?;
    let eps = tol.eps();
    let (rows, cols) = (a.rows(), a.cols());
    for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
        if (x.norm() <= eps) != (y.norm() <= eps) {
            return Ok(false);
        }
    }
    let nonzero = |i: usize, j: usize| b.get(i, j).norm() > eps;

    let mut d1: Vec<Option<Complex64>> = vec![None; rows];
    let mut d2: Vec<Option<Complex64>> = vec![None; cols];
    let mut queue = std::collections::VecDeque::new();
    for start in 0..rows {
        if d1[start].is_some() {
            continue;
        }
        d1[start] = Some(C1);
        queue.push_back((true, start));
        while let Some((is_row, k)) = queue.pop_front() {
            if is_row {
                let p = d1[k].unwrap();
                for j in 0..cols {
                    if d2[j].is_none() && nonzero(k, j) {
                        d2[j] = Some(unit_phase(a.get(k, j) / (p * b.get(k, j))));
                        queue.push_back((false, j));
                    }
                }
            } else {
                let q = d2[k].unwrap();
                for i in 0..rows {
                    if d1[i].is_none() && nonzero(i, k) {
                        d1[i] = Some(unit_phase(a.get(i, k) / (b.get(i, k) * q)));
                        queue.push_back((true, i));
                    }
                }
            }
        }
    }
    let d1: Vec<Complex64> = d1.into_iter().map(|p| p.unwrap_or(C1)).collect();
    let d2: Vec<Complex64> = d2.into_iter().map(|p| p.unwrap_or(C1)).collect();
    let mut worst: f64 = 0.0;
    for i in 0..rows {
        for j in 0..cols {
            worst = worst.max((a.get(i, j) - d1[i] * b.get(i, j) * d2[j]).norm());
        }
    }
    Ok(worst <= eps)
}
