//! Skew-symmetric and latently skew-symmetric matrices.
//!
//! A square matrix `S` of dimension `s` is *latently skew-symmetric* when
//! adding `beta_i` times its last row to every row `i < s`, and scaling the
//! last row by `1 + beta_s`, produces a skew-symmetric matrix. The common
//! value of `S[s][i] / S[i][s]` over rows with a usable last-column entry is
//! the last-row/last-column ratio.
//!
//! `gj_plus` is the complementary Gauss-Jordan-plus pivot: attach `e_j`,
//! pivot at `(j, j)`, swap column `j` with the attached column and drop it.
//! Two consecutive GJ+ pivots map a latently skew-symmetric matrix to another
//! one; `lemma1_transform` performs that pair.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tableau::{
    add_row_multiple, augment_column, drop_column, gj_pivot, swap_columns, Matrix, PivotPos,
    TableauError,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SkewError {
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error("certificate does not skew-symmetrize the matrix (residual {residual:e})")]
    CertMismatch { residual: f64 },
    #[error("matrix is not latently skew-symmetric")]
    NotLatentSkew,
    #[error("no row-{last} pre-addition makes the pivot at column {col} usable")]
    InfeasiblePivot { col: usize, last: usize },
    #[error("column {col} is the last column; GJ+ pivots must use an earlier column")]
    LastColumn { col: usize },
    #[error("degenerate denominator {name} = {value:e}")]
    DegenerateDenominator { name: &'static str, value: f64 },
}

/// Certificate of latent skew-symmetry.
///
/// `betas[i]` for `i < s-1` is the multiple of the last row added to row `i`;
/// `betas[s-1]` scales the last row by `1 + betas[s-1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LSkewCert {
    pub betas: Vec<f64>,
    pub ratio: f64,
}

impl LSkewCert {
    /// Factor applied to the last row.
    pub fn last_row_scale(&self) -> f64 {
        1.0 + self.betas[self.betas.len() - 1]
    }
}

/// `|m[i][j] + m[j][i]| <= tol` for all `i, j` (diagonal included).
pub fn is_skew_symmetric(m: &Matrix, tol: f64) -> Result<bool, SkewError> {
    Ok(skew_residual(m)? <= tol)
}

/// Largest `|m[i][j] + m[j][i]|`.
pub fn skew_residual(m: &Matrix) -> Result<f64, SkewError> {
    let dim = m.require_square()?;
    let mut worst: f64 = 0.0;
    for i in 0..dim {
        for j in i..dim {
            worst = worst.max((m[(i, j)] + m[(j, i)]).abs());
        }
    }
    Ok(worst)
}

/// Searches for a latent skew-symmetry certificate.
///
/// `beta_i` comes from zeroing the transformed diagonal entry when the last
/// row has a usable entry in column `i`; otherwise from an off-diagonal
/// condition against an already resolved row. The last-row scale is read off
/// the ratio. Every entry of the transformed matrix is then verified.
/// Returns `Ok(None)` when no certificate exists.
pub fn latent_skew_check(s: &Matrix, tol: f64) -> Result<Option<LSkewCert>, SkewError> {
    let dim = s.require_square()?;
    if dim < 2 {
        return Err(TableauError::DimensionTooSmall { dim, min: 2 }.into());
    }
    let last = dim - 1;
    if s[(last, last)].abs() > tol {
        return Ok(None);
    }

    let mut betas: Vec<Option<f64>> = vec![None; dim];
    for i in 0..last {
        let lr = s[(last, i)];
        if lr.abs() > tol {
            betas[i] = Some(-s[(i, i)] / lr);
        }
    }
    for i in 0..last {
        if betas[i].is_some() {
            continue;
        }
        if s[(i, i)].abs() > tol {
            // diagonal cannot be cleared by any multiple of a ~zero entry
            return Ok(None);
        }
        let anchor = (0..last)
            .filter(|&j| j != i)
            .filter_map(|j| betas[j].map(|bj| (j, bj)))
            .max_by(|a, b| s[(last, a.0)].abs().total_cmp(&s[(last, b.0)].abs()));
        betas[i] = Some(match anchor {
            Some((j, bj)) => -(s[(i, j)] + s[(j, i)] + bj * s[(last, i)]) / s[(last, j)],
            None => 0.0,
        });
    }

    let anchor = (0..last)
        .filter(|&i| s[(i, last)].abs() > tol)
        .max_by(|&a, &b| s[(a, last)].abs().total_cmp(&s[(b, last)].abs()));
    let Some(anchor) = anchor else {
        return Ok(None);
    };
    let ratio = s[(last, anchor)] / s[(anchor, last)];
    if ratio.abs() <= tol {
        return Ok(None);
    }
    betas[last] = Some(-1.0 / ratio - 1.0);

    let cert = LSkewCert {
        betas: betas.into_iter().map(|b| b.unwrap_or(0.0)).collect(),
        ratio,
    };
    for i in 0..last {
        let col = s[(i, last)];
        if col.abs() > tol && (s[(last, i)] - ratio * col).abs() > tol * ratio.abs().max(1.0) {
            return Ok(None);
        }
    }
    match skew_symmetrize(s, &cert, tol) {
        Ok(_) => Ok(Some(cert)),
        Err(SkewError::CertMismatch { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Applies a certificate's row operations; fails if the result is not
/// skew-symmetric within `tol`.
pub fn skew_symmetrize(s: &Matrix, cert: &LSkewCert, tol: f64) -> Result<Matrix, SkewError> {
    let dim = s.require_square()?;
    if cert.betas.len() != dim {
        return Err(TableauError::ShapeMismatch(format!(
            "{} betas for a {dim}x{dim} matrix",
            cert.betas.len()
        ))
        .into());
    }
    let last = dim - 1;
    let mut out = s.clone();
    for (i, &beta) in cert.betas.iter().enumerate().take(last) {
        out.add_row_multiple_in_place(last, i, beta);
    }
    out.add_row_multiple_in_place(last, last, cert.betas[last]);
    let residual = skew_residual(&out)?;
    if residual > tol {
        return Err(SkewError::CertMismatch { residual });
    }
    Ok(out)
}

/// Complementary Gauss-Jordan-plus pivot in column `j`.
pub fn gj_plus(s: &Matrix, j: usize, tol: f64) -> Result<Matrix, SkewError> {
    let dim = s.require_square()?;
    s.check_col(j)?;
    let mut unit = vec![0.0; dim];
    unit[j] = 1.0;
    let s1 = augment_column(s, &unit)?;
    let s2 = gj_pivot(&s1, PivotPos::new(j, j), tol)?;
    let swapped = swap_columns(&s2, j, dim)?;
    Ok(drop_column(&swapped, dim)?)
}

/// `GJ+_{j2}(GJ+_{j1}(S'))`, where `S'` is `s` with its last row added to
/// row `j1` if the `(j1, j1)` entry is unusable.
pub fn lemma1_transform(s: &Matrix, j1: usize, j2: usize, tol: f64) -> Result<Matrix, SkewError> {
    let dim = s.require_square()?;
    let last = dim - 1;
    for j in [j1, j2] {
        s.check_col(j)?;
        if j == last {
            return Err(SkewError::LastColumn { col: j });
        }
    }
    if latent_skew_check(s, tol)?.is_none() {
        return Err(SkewError::NotLatentSkew);
    }
    let mut start = s.clone();
    if start[(j1, j1)].abs() <= tol {
        start = add_row_multiple(&start, last, j1, 1.0)?;
        if start[(j1, j1)].abs() <= tol {
            return Err(SkewError::InfeasiblePivot { col: j1, last });
        }
    }
    let first = gj_plus(&start, j1, tol)?;
    if first[(j2, j2)].abs() <= tol {
        return Err(SkewError::InfeasiblePivot { col: j2, last });
    }
    gj_plus(&first, j2, tol)
}

/// Parameters of the general 4x4 skew-symmetric base case. The derived
/// quantities are computed once at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseCaseParams {
    s12: f64,
    s13: f64,
    s23: f64,
    q1: f64,
    q2: f64,
    q3: f64,
    pi1: f64,
    pi2: f64,
    phi: f64,
}

impl BaseCaseParams {
    pub fn new(s12: f64, s13: f64, s23: f64, q1: f64, q2: f64, q3: f64) -> Self {
        let pi1 = s13 + q1;
        let pi2 = s23 + q2;
        let phi = s13 * pi2 - s23 * pi1 - s12 * q3;
        Self {
            s12,
            s13,
            s23,
            q1,
            q2,
            q3,
            pi1,
            pi2,
            phi,
        }
    }

    pub fn s12(&self) -> f64 {
        self.s12
    }
    pub fn s13(&self) -> f64 {
        self.s13
    }
    pub fn s23(&self) -> f64 {
        self.s23
    }
    pub fn q1(&self) -> f64 {
        self.q1
    }
    pub fn q2(&self) -> f64 {
        self.q2
    }
    pub fn q3(&self) -> f64 {
        self.q3
    }
    pub fn pi1(&self) -> f64 {
        self.pi1
    }
    pub fn pi2(&self) -> f64 {
        self.pi2
    }
    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// The skew-symmetric matrix the base case starts from.
    pub fn skew_matrix(&self) -> Matrix {
        let (a, b, c) = (self.s12, self.s13, self.s23);
        let (q1, q2, q3) = (self.q1, self.q2, self.q3);
        Matrix::from_rows(&[
            [0.0, a, b, q1],
            [-a, 0.0, c, q2],
            [-b, -c, 0.0, q3],
            [-q1, -q2, -q3, 0.0],
        ])
        .expect("finite parameters")
    }

    /// Certificate for the closed form: row multiples `-S12/S23`, `1/S23`,
    /// `0`, and a last-row factor of `pi2/S23`.
    pub fn certificate(&self) -> LSkewCert {
        let scale = self.pi2 / self.s23;
        LSkewCert {
            betas: vec![-self.s12 / self.s23, 1.0 / self.s23, 0.0, scale - 1.0],
            ratio: -1.0 / scale,
        }
    }
}

fn nonzero(name: &'static str, value: f64, tol: f64) -> Result<f64, SkewError> {
    if value.abs() <= tol {
        Err(SkewError::DegenerateDenominator { name, value })
    } else {
        Ok(value)
    }
}

/// Closed form of `GJ+_2(GJ+_3(S))` for the 4x4 base case, where `S` is the
/// skew matrix with row 4 added to row 3.
pub fn base_case_closed_form(p: &BaseCaseParams, tol: f64) -> Result<Matrix, SkewError> {
    let pi2 = nonzero("pi2", p.pi2, tol)?;
    let s23 = nonzero("s23", p.s23, tol)?;
    let (s12, s13, q3, pi1, phi) = (p.s12, p.s13, p.q3, p.pi1, p.phi);
    let d = pi2 * s23;
    Ok(Matrix::from_rows(&[
        [
            phi * s12 / d,
            (q3 * s12 - pi2 * s13) / d,
            s12 / pi2,
            -phi / s23,
        ],
        [(q3 * s12 + pi1 * s23) / d, -q3 / d, -1.0 / pi2, -q3 / s23],
        [-s12 / s23, 1.0 / s23, 0.0, (pi2 - s23) / s23],
        [phi / pi2, q3 / pi2, (s23 - pi2) / pi2, 0.0],
    ])?)
}

/// The three matrices of the single-row initialization variant on a 3x3
/// skew-symmetric start.
#[derive(Debug, Clone, PartialEq)]
pub struct AppendixForms {
    /// Skew start with row 3 added to row 1 only.
    pub s1: Matrix,
    /// After GJ+ in column 1.
    pub s1_bar: Matrix,
    /// After GJ+ in column 2; latently skew-symmetric.
    pub s2: Matrix,
}

pub fn appendix_closed_forms(
    s12: f64,
    q1: f64,
    q2: f64,
    tol: f64,
) -> Result<AppendixForms, SkewError> {
    let q1 = nonzero("q1", q1, tol)?;
    let s12 = nonzero("s12", s12, tol)?;
    let g = nonzero("q2 - s12", q2 - s12, tol)?;
    let s1 = Matrix::from_rows(&[[-q1, s12 - q2, q1], [-s12, 0.0, q2], [-q1, -q2, 0.0]])?;
    let s1_bar = Matrix::from_rows(&[
        [-1.0 / q1, g / q1, -1.0],
        [-s12 / q1, s12 * g / q1, g],
        [-1.0, -s12, -q1],
    ])?;
    let s2 = Matrix::from_rows(&[
        [0.0, -1.0 / s12, -q2 / s12],
        [-1.0 / g, q1 / (s12 * g), q1 / s12],
        [-q2 / g, q1 / g, 0.0],
    ])?;
    Ok(AppendixForms { s1, s1_bar, s2 })
}

/// Certificate for the appendix `S2`: row multiples `0`, `-1/S12`, and a
/// last-row factor of `-(q2 - S12)/S12`.
pub fn appendix_certificate(s12: f64, q2: f64) -> LSkewCert {
    let scale = -(q2 - s12) / s12;
    LSkewCert {
        betas: vec![0.0, -1.0 / s12, scale - 1.0],
        ratio: -1.0 / scale,
    }
}

/// The 3x3 skew matrix `[[0, S12, q1], [-S12, 0, q2], [-q1, -q2, 0]]`.
pub fn skew3(s12: f64, q1: f64, q2: f64) -> Matrix {
    Matrix::from_rows(&[[0.0, s12, q1], [-s12, 0.0, q2], [-q1, -q2, 0.0]]).expect("finite")
}

/// Skew-symmetric matrix with above-diagonal entries uniform in
/// `[-range, range]`, deterministic per seed.
pub fn random_skew(dim: usize, seed: u64, range: f64) -> Matrix {
    assert!(dim >= 1, "dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i + 1..dim {
            let v = rng.gen_range(-range..=range);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    m
}
