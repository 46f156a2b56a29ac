use crate::tableau::{Matrix, PivotPos, TableauError};

use super::EngineError;

/// Pivoting state shared by the full tableau and the compact matrix.
///
/// Columns are addressed by their index in `z` (`0 .. 2(k+n)`); rows by
/// `0 ..= k+n`, with `k+n` the last row. Row `r` always holds the basic
/// member of the complementary pair `{r, k+n+r}`.
pub trait PivotState: Clone {
    fn k(&self) -> usize;
    fn n(&self) -> usize;

    fn size(&self) -> usize {
        self.k() + self.n()
    }

    /// Right-hand side entry of `row`.
    fn q(&self, row: usize) -> f64;

    /// Tableau entry at `row` in `z`-column `col`.
    fn entry(&self, row: usize, col: usize) -> f64;

    /// Basic column of each row `0 .. k+n`.
    fn basis(&self) -> &[usize];

    /// Nonbasic partner of each row `0 .. k+n`.
    fn corr(&self) -> &[usize];

    fn objective_coeffs(&self) -> &[f64];

    /// Row `row` += `beta` * last row.
    fn add_last_row(&mut self, row: usize, beta: f64);

    /// Pivots row `row` onto its nonbasic partner and swaps the pair roles.
    fn principal_pivot(&mut self, row: usize, tol: f64) -> Result<(), EngineError>;

    /// The matrix this state is stored as.
    fn snapshot(&self) -> Matrix;

    fn is_basic(&self, col: usize) -> bool {
        let size = self.size();
        self.basis()[col % size] == col
    }

    fn complement(&self, col: usize) -> usize {
        let size = self.size();
        (col + size) % (2 * size)
    }

    fn q_vector(&self) -> Vec<f64> {
        (0..=self.size()).map(|i| self.q(i)).collect()
    }
}

/// An `[M q]` tableau with basis bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    tab: Matrix,
    basis: Vec<usize>,
    corr: Vec<usize>,
    k: usize,
    n: usize,
    f: Vec<f64>,
}

impl Instance {
    /// Validates that each `basis[r]` is a unit column `e_r` belonging to
    /// pair `r`.
    pub fn from_parts(
        tab: Matrix,
        basis: Vec<usize>,
        k: usize,
        n: usize,
        f: Vec<f64>,
    ) -> Result<Self, TableauError> {
        let size = k + n;
        if tab.rows() != size + 1 || tab.cols() != 2 * size + 1 {
            return Err(TableauError::ShapeMismatch(format!(
                "tableau is {}x{}, expected {}x{}",
                tab.rows(),
                tab.cols(),
                size + 1,
                2 * size + 1
            )));
        }
        if basis.len() != size || f.len() != n {
            return Err(TableauError::ShapeMismatch(
                "basis or objective length does not match k + n".into(),
            ));
        }
        let mut corr = Vec::with_capacity(size);
        for (r, &col) in basis.iter().enumerate() {
            if col != r && col != size + r {
                return Err(TableauError::ShapeMismatch(format!(
                    "row {} holds column {}, outside its pair",
                    r + 1,
                    col + 1
                )));
            }
            for i in 0..=size {
                let expected = if i == r { 1.0 } else { 0.0 };
                if tab[(i, col)] != expected {
                    return Err(TableauError::ShapeMismatch(format!(
                        "column {} is not the unit vector e_{}",
                        col + 1,
                        r + 1
                    )));
                }
            }
            corr.push((col + size) % (2 * size));
        }
        Ok(Self {
            tab,
            basis,
            corr,
            k,
            n,
            f,
        })
    }

    /// Infers the basis from unit columns: row `r` is basic in column `r`
    /// if that column is `e_r`, otherwise in column `k+n+r`.
    pub fn from_tableau(
        tab: Matrix,
        k: usize,
        n: usize,
        f: Vec<f64>,
    ) -> Result<Self, TableauError> {
        let size = k + n;
        if tab.rows() != size + 1 {
            return Err(TableauError::ShapeMismatch("row count".into()));
        }
        let is_unit = |col: usize, r: usize| (0..=size).all(|i| tab[(i, col)] == f64::from(i == r));
        let basis = (0..size)
            .map(|r| if is_unit(r, r) { r } else { size + r })
            .collect();
        Self::from_parts(tab, basis, k, n, f)
    }

    pub fn tableau(&self) -> &Matrix {
        &self.tab
    }
}

impl PivotState for Instance {
    fn k(&self) -> usize {
        self.k
    }

    fn n(&self) -> usize {
        self.n
    }

    fn q(&self, row: usize) -> f64 {
        self.tab[(row, 2 * self.size())]
    }

    fn entry(&self, row: usize, col: usize) -> f64 {
        self.tab[(row, col)]
    }

    fn basis(&self) -> &[usize] {
        &self.basis
    }

    fn corr(&self) -> &[usize] {
        &self.corr
    }

    fn objective_coeffs(&self) -> &[f64] {
        &self.f
    }

    fn add_last_row(&mut self, row: usize, beta: f64) {
        let last = self.size();
        self.tab.add_row_multiple_in_place(last, row, beta);
    }

    fn principal_pivot(&mut self, row: usize, tol: f64) -> Result<(), EngineError> {
        let col = self.corr[row];
        self.tab.pivot_in_place(PivotPos::new(row, col), tol)?;
        std::mem::swap(&mut self.basis[row], &mut self.corr[row]);
        Ok(())
    }

    fn snapshot(&self) -> Matrix {
        self.tab.clone()
    }
}
