//! Dense matrices and the elementary row/column operations used by every
//! other module, Gauss-Jordan pivoting first among them.
//!
//! Indices are 0-based in the API. `PivotPos` renders 1-based, matching the
//! way tableaus are usually written down by hand.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TableauError {
    #[error("pivot at {pos} is {value:e}, within tolerance of zero")]
    PivotTooSmall { pos: PivotPos, value: f64 },
    #[error("matrix dimension {dim} is below the required minimum {min}")]
    DimensionTooSmall { dim: usize, min: usize },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("index {index} out of bounds for {what} of length {len}")]
    IndexOutOfBounds {
        what: &'static str,
        index: usize,
        len: usize,
    },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("non-finite entry {value} at ({row}, {col})")]
    NonFinite { row: usize, col: usize, value: f64 },
}

/// A pivot position, 0-based. Displays 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PivotPos {
    pub row: usize,
    pub col: usize,
}

impl PivotPos {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    /// Builds a position from the 1-based coordinates used in printed traces.
    pub fn one_based(row: usize, col: usize) -> Self {
        assert!(row >= 1 && col >= 1, "1-based indices start at 1");
        Self {
            row: row - 1,
            col: col - 1,
        }
    }
}

impl fmt::Display for PivotPos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row + 1, self.col + 1)
    }
}

/// Dense row-major matrix of finite reals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, TableauError> {
        if rows == 0 || cols == 0 {
            return Err(TableauError::ShapeMismatch(format!(
                "empty matrix {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(TableauError::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(idx) = data.iter().position(|v| !v.is_finite()) {
            return Err(TableauError::NonFinite {
                row: idx / cols,
                col: idx % cols,
                value: data[idx],
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, TableauError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != ncols {
                return Err(TableauError::ShapeMismatch(format!(
                    "row {} has {} entries, expected {ncols}",
                    i + 1,
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::new(nrows, ncols, data)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
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

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Largest entrywise absolute difference; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }

    pub fn approx_eq(&self, other: &Matrix, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Entries rounded to `decimals` places, with negative zero folded to zero.
    pub fn rounded(&self, decimals: u32) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| round_to(v, decimals)).collect(),
        }
    }

    pub(crate) fn check_row(&self, i: usize) -> Result<(), TableauError> {
        if i >= self.rows {
            return Err(TableauError::IndexOutOfBounds {
                what: "rows",
                index: i,
                len: self.rows,
            });
        }
        Ok(())
    }

    pub(crate) fn check_col(&self, j: usize) -> Result<(), TableauError> {
        if j >= self.cols {
            return Err(TableauError::IndexOutOfBounds {
                what: "columns",
                index: j,
                len: self.cols,
            });
        }
        Ok(())
    }

    pub(crate) fn require_square(&self) -> Result<usize, TableauError> {
        if !self.is_square() {
            return Err(TableauError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rows)
    }

    /// In-place Gauss-Jordan pivot. The pivot column is written exactly as a
    /// unit vector rather than computed, so basic columns stay exact.
    pub(crate) fn pivot_in_place(&mut self, p: PivotPos, tol: f64) -> Result<(), TableauError> {
        self.check_row(p.row)?;
        self.check_col(p.col)?;
        let pivot = self[(p.row, p.col)];
        if pivot.is_nan() || pivot.abs() <= tol {
            return Err(TableauError::PivotTooSmall {
                pos: p,
                value: pivot,
            });
        }
        let cols = self.cols;
        let r0 = p.row * cols;
        for j in 0..cols {
            self.data[r0 + j] /= pivot;
        }
        self.data[r0 + p.col] = 1.0;
        let pivot_row: Vec<f64> = self.data[r0..r0 + cols].to_vec();
        for i in 0..self.rows {
            if i == p.row {
                continue;
            }
            let base = i * cols;
            let factor = self.data[base + p.col];
            if factor == 0.0 {
                continue;
            }
            for (j, &pr) in pivot_row.iter().enumerate() {
                self.data[base + j] -= factor * pr;
            }
            self.data[base + p.col] = 0.0;
        }
        Ok(())
    }

    pub(crate) fn add_row_multiple_in_place(&mut self, src: usize, dst: usize, beta: f64) {
        let cols = self.cols;
        if src == dst {
            for v in &mut self.data[dst * cols..(dst + 1) * cols] {
                *v += beta * *v;
            }
            return;
        }
        for j in 0..cols {
            let s = self.data[src * cols + j];
            self.data[dst * cols + j] += beta * s;
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    /// Tab-separated rows; honours `{:.N}` precision.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str("\t")?;
                }
                let v = self[(i, j)];
                match f.precision() {
                    Some(p) => write!(f, "{}", format_number(v, p))?,
                    None => write!(f, "{v}")?,
                }
            }
            if i + 1 < self.rows {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}

/// Rounds to `decimals` places; `-0.0` becomes `0.0`.
pub fn round_to(v: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    let r = (v * scale).round() / scale;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Fixed-precision rendering with trailing zeros trimmed: `7.00` prints `7`.
pub fn format_number(v: f64, precision: usize) -> String {
    let s = format!("{:.*}", precision, v);
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

/// Gauss-Jordan pivot at `p`: the pivot row is divided by the pivot entry and
/// every other row gets `T_ij - T_ic * T_rj / T_rc`.
pub fn gj_pivot(m: &Matrix, p: PivotPos, tol: f64) -> Result<Matrix, TableauError> {
    let mut out = m.clone();
    out.pivot_in_place(p, tol)?;
    Ok(out)
}

/// Row `dst` += `beta` * row `src`. With `src == dst` this scales the row by
/// `1 + beta`.
pub fn add_row_multiple(
    m: &Matrix,
    src: usize,
    dst: usize,
    beta: f64,
) -> Result<Matrix, TableauError> {
    m.check_row(src)?;
    m.check_row(dst)?;
    let mut out = m.clone();
    out.add_row_multiple_in_place(src, dst, beta);
    Ok(out)
}

/// Swaps rows 1,2 and columns 1,2 of a square matrix of dimension >= 3.
pub fn swap_conjugate_12(m: &Matrix) -> Result<Matrix, TableauError> {
    let dim = m.require_square()?;
    if dim < 3 {
        return Err(TableauError::DimensionTooSmall { dim, min: 3 });
    }
    let perm = |i: usize| match i {
        0 => 1,
        1 => 0,
        other => other,
    };
    Ok(Matrix::from_fn(dim, dim, |i, j| m[(perm(i), perm(j))]))
}

/// Rows and columns `lo..=hi` (0-based, inclusive) of a square matrix.
pub fn principal_submatrix(m: &Matrix, lo: usize, hi: usize) -> Result<Matrix, TableauError> {
    let dim = m.require_square()?;
    if hi >= dim {
        return Err(TableauError::IndexOutOfBounds {
            what: "rows",
            index: hi,
            len: dim,
        });
    }
    if lo > hi {
        return Err(TableauError::ShapeMismatch(format!(
            "empty window {lo}..={hi}"
        )));
    }
    let size = hi - lo + 1;
    Ok(Matrix::from_fn(size, size, |i, j| m[(lo + i, lo + j)]))
}

pub fn augment_column(m: &Matrix, v: &[f64]) -> Result<Matrix, TableauError> {
    if v.len() != m.rows {
        return Err(TableauError::ShapeMismatch(format!(
            "column of length {} for a matrix with {} rows",
            v.len(),
            m.rows
        )));
    }
    Ok(Matrix::from_fn(m.rows, m.cols + 1, |i, j| {
        if j < m.cols {
            m[(i, j)]
        } else {
            v[i]
        }
    }))
}

pub fn swap_columns(m: &Matrix, a: usize, b: usize) -> Result<Matrix, TableauError> {
    m.check_col(a)?;
    m.check_col(b)?;
    let mut out = m.clone();
    if a != b {
        for i in 0..m.rows {
            out.data.swap(i * m.cols + a, i * m.cols + b);
        }
    }
    Ok(out)
}

pub fn drop_column(m: &Matrix, c: usize) -> Result<Matrix, TableauError> {
    m.check_col(c)?;
    if m.cols == 1 {
        return Err(TableauError::ShapeMismatch(
            "cannot drop the only column".into(),
        ));
    }
    Ok(Matrix::from_fn(m.rows, m.cols - 1, |i, j| {
        m[(i, if j < c { j } else { j + 1 })]
    }))
}
