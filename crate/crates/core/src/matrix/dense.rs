use std::fmt;
use std::ops::Index;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Dense row-major complex matrix. An `n×m` matrix is a map `n -> m`.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Invalid(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Invalid(format!("non-finite entry at flat index {pos}")));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Invalid("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn from_diagonal(rows: usize, cols: usize, diag: &[C64]) -> Self {
        Self::from_fn(rows, cols, |i, j| if i == j && i < diag.len() { diag[i] } else { C64::new(0.0, 0.0) })
    }

    pub(crate) fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub(crate) fn from_columns(rows: usize, columns: &[Vec<C64>]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Conjugate transpose: the dagger of the instance.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Plain transpose, the alternative (non-Moore-Penrose) dagger.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::mismatch(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in row.iter().enumerate() {
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let src = &other.data[k * other.cols..(k + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        out
    }

    fn zip_with(&self, other: &Self, op: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::mismatch(format!(
                "shapes {}x{} and {}x{} differ",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| op(a, b)).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, k: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * k).collect() }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.frobenius_norm())
    }

    pub fn block_diagonal(a: &Self, b: &Self) -> Self {
        Self::from_fn(a.rows + b.rows, a.cols + b.cols, |i, j| {
            if i < a.rows && j < a.cols {
                a.get(i, j)
            } else if i >= a.rows && j >= a.cols {
                b.get(i - a.rows, j - a.cols)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// `[a b]`: side by side, equal row counts.
    pub fn hstack(a: &Self, b: &Self) -> Result<Self> {
        if a.rows != b.rows {
            return Err(Error::mismatch("hstack needs equal row counts"));
        }
        Ok(Self::from_fn(a.rows, a.cols + b.cols, |i, j| if j < a.cols { a.get(i, j) } else { b.get(i, j - a.cols) }))
    }

    /// `[a; b]`: stacked, equal column counts.
    pub fn vstack(a: &Self, b: &Self) -> Result<Self> {
        if a.cols != b.cols {
            return Err(Error::mismatch("vstack needs equal column counts"));
        }
        let mut data = a.data.clone();
        data.extend_from_slice(&b.data);
        Ok(Self { rows: a.rows + b.rows, cols: a.cols, data })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub(crate) fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm_sqr(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// Extends `basis` (orthonormal vectors of length `dim`) to a full
/// orthonormal basis, drawing from the standard basis vector with the
/// largest residual each time.
pub(crate) fn complete_basis(dim: usize, basis: &mut Vec<Vec<C64>>) {
    while basis.len() < dim {
        let mut best: Option<(f64, Vec<C64>)> = None;
        for i in 0..dim {
            let mut r = vec![C64::new(0.0, 0.0); dim];
            r[i] = C64::new(1.0, 0.0);
            for _ in 0..2 {
                for q in basis.iter() {
                    let c = dot(q, &r);
                    for (x, y) in r.iter_mut().zip(q) {
                        *x -= c * y;
                    }
                }
            }
            let n = norm_sqr(&r).sqrt();
            if best.as_ref().is_none_or(|(bn, _)| n > *bn) {
                best = Some((n, r));
            }
        }
        let (n, mut r) = best.expect("dim > basis.len() >= 0");
        for x in r.iter_mut() {
            *x /= n;
        }
        basis.push(r);
    }
}

/// Rotates the pair `(x, y)` to `(c·x − s·w·y, s·x + c·w·y)`.
pub(crate) fn rotate_pair(x: &mut [C64], y: &mut [C64], c: f64, s: f64, w: C64) {
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let (xa, yb) = (*a, *b);
        *a = xa * c - w * yb * s;
        *b = xa * s + w * yb * c;
    }
}

/// Jacobi rotation parameters `(c, s)` that annihilate the coupling `g > 0`
/// between diagonal entries `alpha` and `beta`.
pub(crate) fn jacobi_parameters(alpha: f64, beta: f64, g: f64) -> (f64, f64) {
    let zeta = (beta - alpha) / (2.0 * g);
    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, c * t)
}

/// Multiplies each column by a unit phase so that its first entry of
/// modulus above `floor` is real and nonnegative. Returns the applied factors.
pub(crate) fn normalize_phases(columns: &mut [Vec<C64>], floor: f64) -> Vec<C64> {
    columns
        .iter_mut()
        .map(|col| {
            let Some(z) = col.iter().find(|z| z.norm() > floor).copied() else {
                return C64::new(1.0, 0.0);
            };
            let factor = (z / z.norm()).conj();
            for x in col.iter_mut() {
                *x *= factor;
            }
            factor
        })
        .collect()
}
