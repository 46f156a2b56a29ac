//! Linear programs in symmetric form, their homogeneous embedding `(M, q)`,
//! tableau initialization, and solution extraction/validation.
//!
//! The program is `maximize f'x subject to Ax <= b, x >= 0` with `A` of size
//! `k x n`. The embedding works on `z = (y, x, s, t)` (duals, primals,
//! slacks, surpluses) and
//!
//! ```text
//!     M = [  0   A  I  0 ]      q = [  b ]
//!         [ -A'  0  0  I ]          [ -f ]
//!         [ -b'  f' 0  0 ]          [  0 ]
//! ```
//!
//! A nonnegative `z` with `Mz = q` and `z_j z_{k+n+j} = 0` is a primal-dual
//! optimal pair.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{Instance, PivotState};
use crate::tableau::{Matrix, TableauError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("instance is not terminal: {0}")]
    NotTerminal(String),
    #[error("negative value {value:e} for z[{index}]")]
    NegativeValue { index: usize, value: f64 },
    #[error("complementarity violated for pair ({j}, {partner}): product {product:e}")]
    ComplementarityViolation {
        j: usize,
        partner: usize,
        product: f64,
    },
}

/// `maximize f'x subject to Ax <= b, x >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram {
    f: Vec<f64>,
    a: Matrix,
    b: Vec<f64>,
}

impl LinearProgram {
    pub fn new(f: Vec<f64>, a: Matrix, b: Vec<f64>) -> Result<Self, LpError> {
        if f.len() != a.cols() {
            return Err(LpError::Dimension(format!(
                "objective has {} coefficients but A has {} columns",
                f.len(),
                a.cols()
            )));
        }
        if b.len() != a.rows() {
            return Err(LpError::Dimension(format!(
                "right-hand side has {} entries but A has {} rows",
                b.len(),
                a.rows()
            )));
        }
        if f.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(LpError::Dimension("non-finite objective or rhs".into()));
        }
        Ok(Self { f, a, b })
    }

    /// Convenience constructor from nested rows.
    pub fn from_rows<R: AsRef<[f64]>>(f: &[f64], a: &[R], b: &[f64]) -> Result<Self, LpError> {
        Self::new(f.to_vec(), Matrix::from_rows(a)?, b.to_vec())
    }

    /// Number of constraints.
    pub fn k(&self) -> usize {
        self.a.rows()
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn f(&self) -> &[f64] {
        &self.f
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        dot(&self.f, x)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `(M, q)` for a linear program.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousSystem {
    pub m: Matrix,
    pub q: Vec<f64>,
    pub k: usize,
    pub n: usize,
    pub f: Vec<f64>,
}

impl HomogeneousSystem {
    /// `k + n`, the number of complementary pairs.
    pub fn size(&self) -> usize {
        self.k + self.n
    }
}

pub fn build_homogeneous(lp: &LinearProgram) -> HomogeneousSystem {
    let (k, n) = (lp.k(), lp.n());
    let size = k + n;
    let mut m = Matrix::zeros(size + 1, 2 * size);
    for i in 0..k {
        for j in 0..n {
            m[(i, k + j)] = lp.a[(i, j)];
            m[(k + j, i)] = -lp.a[(i, j)];
        }
        m[(i, size + i)] = 1.0;
        m[(size, i)] = -lp.b[i];
    }
    for j in 0..n {
        m[(k + j, size + k + j)] = 1.0;
        m[(size, k + j)] = lp.f[j];
    }
    let q =
        lp.b.iter()
            .copied()
            .chain(lp.f.iter().map(|v| -v))
            .chain(std::iter::once(0.0))
            .collect();
    HomogeneousSystem {
        m,
        q,
        k,
        n,
        f: lp.f.clone(),
    }
}

/// How the last row of `[M q]` is folded into the others before pivoting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitVariant {
    /// Add the last row to every other row.
    AllRows,
    /// Add the last row only to the given (0-based) row, the intended first
    /// pivot row.
    SingleRow(usize),
}

/// Builds the starting `[M q]` instance. The slack/surplus columns
/// `k+n .. 2(k+n)` form the initial basis, and row `i` corresponds to
/// column `i`.
pub fn initialize_instance(
    sys: &HomogeneousSystem,
    variant: InitVariant,
) -> Result<Instance, LpError> {
    let size = sys.size();
    let mut tab = Matrix::zeros(size + 1, 2 * size + 1);
    for i in 0..=size {
        for j in 0..2 * size {
            tab[(i, j)] = sys.m[(i, j)];
        }
        tab[(i, 2 * size)] = sys.q[i];
    }
    match variant {
        InitVariant::AllRows => {
            for i in 0..size {
                tab.add_row_multiple_in_place(size, i, 1.0);
            }
        }
        InitVariant::SingleRow(i) => {
            if i >= size {
                return Err(TableauError::IndexOutOfBounds {
                    what: "rows",
                    index: i,
                    len: size,
                }
                .into());
            }
            tab.add_row_multiple_in_place(size, i, 1.0);
        }
    }
    let basis = (0..size).map(|r| size + r).collect();
    Ok(Instance::from_parts(
        tab,
        basis,
        sys.k,
        sys.n,
        sys.f.clone(),
    )?)
}

/// Outcome class of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Optimal,
    NoSolution,
    Stalled,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Optimal => "Optimal",
            Status::NoSolution => "NoSolution",
            Status::Stalled => "Stalled",
        })
    }
}

/// Primal `x`, dual `y` and objective. The vectors are empty and the
/// objective is `None` unless the status is `Optimal`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub status: Status,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub objective: Option<f64>,
}

impl Solution {
    pub fn without_point(status: Status) -> Self {
        Self {
            status,
            x: Vec::new(),
            y: Vec::new(),
            objective: None,
        }
    }
}

/// Reads `z` off a terminal instance and splits it into `(y, x)`.
pub fn extract_solution<S: PivotState>(inst: &S, tol: f64) -> Result<Solution, LpError> {
    let size = inst.size();
    let q_last = inst.q(size);
    if q_last.abs() > tol {
        return Err(LpError::NotTerminal(format!("q_last = {q_last:e}")));
    }
    let mut z = vec![0.0; 2 * size];
    for (r, &col) in inst.basis().iter().enumerate() {
        let v = inst.q(r);
        if v < -tol {
            return Err(LpError::NegativeValue {
                index: col,
                value: v,
            });
        }
        z[col] = v.max(0.0);
    }
    for j in 0..size {
        let product = z[j] * z[size + j];
        if product.abs() > tol {
            return Err(LpError::ComplementarityViolation {
                j,
                partner: size + j,
                product,
            });
        }
    }
    let k = inst.k();
    let y = z[..k].to_vec();
    let x = z[k..size].to_vec();
    let objective = dot(inst.objective_coeffs(), &x);
    Ok(Solution {
        status: Status::Optimal,
        x,
        y,
        objective: Some(objective),
    })
}

/// Primal feasibility, dual feasibility and zero duality gap, each within
/// `tol`.
pub fn check_kkt(lp: &LinearProgram, sol: &Solution, tol: f64) -> bool {
    let (k, n) = (lp.k(), lp.n());
    if sol.status != Status::Optimal || sol.x.len() != n || sol.y.len() != k {
        return false;
    }
    if sol.x.iter().chain(&sol.y).any(|&v| v < -tol) {
        return false;
    }
    let primal = (0..k).all(|i| dot(lp.a.row(i), &sol.x) <= lp.b[i] + tol);
    let dual = (0..n).all(|j| {
        let aty: f64 = (0..k).map(|i| lp.a[(i, j)] * sol.y[i]).sum();
        aty >= lp.f[j] - tol
    });
    let gap = (lp.objective(&sol.x) - dot(&lp.b, &sol.y)).abs();
    primal && dual && gap <= tol
}
