//! Compact form: only the `k+n` nonbasic columns and `q` are stored, as a
//! square `(k+n+1) x (k+n+1)` matrix. Column `i < k+n` holds the partner
//! column of row `i`, so every pivot is a principal GJ+ pivot.

use crate::skewsym::gj_plus;
use crate::tableau::Matrix;

use super::instance::{Instance, PivotState};
use super::EngineError;

/// The nonbasic columns of `[M q]` ordered by row correspondence, followed by
/// `q`, together with the `z` index of each of those columns.
pub fn compact_state(inst: &Instance) -> (Matrix, Vec<usize>) {
    let size = inst.size();
    let cols = inst.corr().to_vec();
    let mat = Matrix::from_fn(size + 1, size + 1, |i, j| {
        if j < size {
            inst.entry(i, cols[j])
        } else {
            inst.q(i)
        }
    });
    (mat, cols)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompactInstance {
    mat: Matrix,
    // z index of compact column i; equals corr[i]
    cols: Vec<usize>,
    basis: Vec<usize>,
    k: usize,
    n: usize,
    f: Vec<f64>,
}

impl CompactInstance {
    pub fn from_full(inst: &Instance) -> Self {
        let (mat, cols) = compact_state(inst);
        Self {
            mat,
            cols,
            basis: inst.basis().to_vec(),
            k: inst.k(),
            n: inst.n(),
            f: inst.objective_coeffs().to_vec(),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    /// `z` index of each compact column.
    pub fn columns(&self) -> &[usize] {
        &self.cols
    }
}

impl PivotState for CompactInstance {
    fn k(&self) -> usize {
        self.k
    }

    fn n(&self) -> usize {
        self.n
    }

    fn q(&self, row: usize) -> f64 {
        self.mat[(row, self.size())]
    }

    fn entry(&self, row: usize, col: usize) -> f64 {
        let size = self.size();
        let pair = col % size;
        if self.cols[pair] == col {
            self.mat[(row, pair)]
        } else {
            f64::from(row == pair)
        }
    }

    fn basis(&self) -> &[usize] {
        &self.basis
    }

    fn corr(&self) -> &[usize] {
        &self.cols
    }

    fn objective_coeffs(&self) -> &[f64] {
        &self.f
    }

    fn add_last_row(&mut self, row: usize, beta: f64) {
        let last = self.size();
        self.mat.add_row_multiple_in_place(last, row, beta);
    }

    fn principal_pivot(&mut self, row: usize, tol: f64) -> Result<(), EngineError> {
        self.mat = gj_plus(&self.mat, row, tol)?;
        std::mem::swap(&mut self.basis[row], &mut self.cols[row]);
        Ok(())
    }

    fn snapshot(&self) -> Matrix {
        self.mat.clone()
    }
}
