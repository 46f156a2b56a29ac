//! Brute-force reference solver: enumerate every basis of `[A I](x, s) = b`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::SolveReport;
use crate::lpform::{LinearProgram, Solution, Status};

/// Largest `k + n` accepted by [`enumerate_vertices`].
pub const MAX_SIZE: usize = 24;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("k + n = {size} exceeds the enumeration limit {MAX_SIZE}")]
    TooLarge { size: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub x: Vec<f64>,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexReport {
    /// Distinct feasible vertices in discovery order.
    pub vertices: Vec<Vertex>,
    pub verdict: Verdict,
}

// lexicographic successor of a k-subset of 0..m
fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let k = idx.len();
    let Some(i) = (0..k).rev().find(|&i| idx[i] < m - k + i) else {
        return false;
    };
    idx[i] += 1;
    for j in i + 1..k {
        idx[j] = idx[j - 1] + 1;
    }
    true
}

pub fn enumerate_vertices(lp: &LinearProgram, tol: f64) -> Result<VertexReport, OracleError> {
    let (k, n) = (lp.k(), lp.n());
    if k + n > MAX_SIZE {
        return Err(OracleError::TooLarge { size: k + n });
    }
    let m = n + k;
    // columns 0..n are x, n..n+k the slacks
    let full = DMatrix::from_fn(k, m, |i, j| {
        if j < n {
            lp.a()[(i, j)]
        } else {
            f64::from(j - n == i)
        }
    });
    let b = DVector::from_column_slice(lp.b());
    let cost: Vec<f64> = (0..m)
        .map(|j| if j < n { lp.f()[j] } else { 0.0 })
        .collect();

    let mut vertices: Vec<Vertex> = Vec::new();
    let mut unbounded = false;
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let basis = DMatrix::from_fn(k, k, |i, c| full[(i, idx[c])]);
        let lu = basis.clone().lu();
        if lu.determinant().abs() > tol {
            if let Some(xb) = lu.solve(&b) {
                if xb.iter().all(|&v| v >= -tol) {
                    let mut point = vec![0.0; m];
                    for (c, &j) in idx.iter().enumerate() {
                        point[j] = xb[c];
                    }
                    let x = point[..n].to_vec();
                    if !vertices.iter().any(|v| close(&v.x, &x, tol)) {
                        vertices.push(Vertex {
                            objective: lp.objective(&x),
                            x,
                        });
                    }
                    if !unbounded {
                        unbounded = has_improving_ray(&lu, &full, &cost, &idx, tol);
                    }
                }
            }
        }
        if k == 0 || !next_combination(&mut idx, m) {
            break;
        }
    }

    let verdict = if vertices.is_empty() {
        Verdict::Infeasible
    } else if unbounded {
        Verdict::Unbounded
    } else {
        let best = vertices
            .iter()
            .max_by(|a, b| a.objective.total_cmp(&b.objective))
            .expect("nonempty");
        Verdict::Optimal {
            x: best.x.clone(),
            objective: best.objective,
        }
    };
    Ok(VertexReport { vertices, verdict })
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter()
        .zip(b)
        .all(|(u, v)| (u - v).abs() <= tol.max(1e-9) * (1.0 + u.abs()))
}

// an edge direction from this basis along nonbasic column j that stays
// feasible forever and improves the objective
fn has_improving_ray(
    lu: &nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    full: &DMatrix<f64>,
    cost: &[f64],
    basis: &[usize],
    tol: f64,
) -> bool {
    (0..full.ncols()).filter(|j| !basis.contains(j)).any(|j| {
        let Some(w) = lu.solve(&full.column(j).into_owned()) else {
            return false;
        };
        // direction: +1 on j, -w on the basis
        let reduced = cost[j]
            - basis
                .iter()
                .zip(w.iter())
                .map(|(&c, v)| cost[c] * v)
                .sum::<f64>();
        reduced > tol && w.iter().all(|&v| v <= tol)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum CrossCheck {
    Agree,
    Disagree {
        solver: Solution,
        oracle: Verdict,
    },
    /// The solver stopped at its iteration cap.
    Inconclusive,
}

/// Enumerates `lp` and compares the solve against it; see [`compare`].
pub fn cross_check(
    lp: &LinearProgram,
    report: &SolveReport,
    tol: f64,
) -> Result<CrossCheck, OracleError> {
    Ok(compare(report, &enumerate_vertices(lp, tol)?, tol))
}

/// Optimal answers agree when the objectives match within `tol` (relative
/// to their magnitude); a `NoSolution` agrees with an infeasible or
/// unbounded program.
pub fn compare(report: &SolveReport, oracle: &VertexReport, tol: f64) -> CrossCheck {
    let sol = &report.solution;
    let agree = match (sol.status, &oracle.verdict) {
        (Status::Stalled, _) => return CrossCheck::Inconclusive,
        (Status::Optimal, Verdict::Optimal { objective, .. }) => sol
            .objective
            .is_some_and(|o| (o - objective).abs() <= tol * (1.0 + objective.abs())),
        (Status::NoSolution, Verdict::Infeasible | Verdict::Unbounded) => true,
        _ => false,
    };
    if agree {
        CrossCheck::Agree
    } else {
        CrossCheck::Disagree {
            solver: sol.clone(),
            oracle: oracle.verdict.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{solve, SolveOptions};

    fn lp(f: &[f64], a: &[&[f64]], b: &[f64]) -> LinearProgram {
        LinearProgram::from_rows(f, a, b).unwrap()
    }

    fn example() -> LinearProgram {
        lp(&[2.0, 1.0], &[&[1.0, 1.0], &[1.0, 0.0]], &[5.0, 2.0])
    }

    #[test]
    fn example_vertices() {
        let report = enumerate_vertices(&example(), 1e-9).unwrap();
        assert_eq!(report.vertices.len(), 4);
        for v in [[0.0, 0.0], [2.0, 0.0], [0.0, 5.0], [2.0, 3.0]] {
            assert!(report.vertices.iter().any(|w| close(&w.x, &v, 1e-9)));
        }
        match report.verdict {
            Verdict::Optimal { x, objective } => {
                assert!(close(&x, &[2.0, 3.0], 1e-9));
                assert!((objective - 7.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let inf = enumerate_vertices(&lp(&[1.0], &[&[1.0]], &[-1.0]), 1e-9).unwrap();
        assert_eq!(inf.verdict, Verdict::Infeasible);
        let unb = enumerate_vertices(&lp(&[1.0], &[&[0.0]], &[1.0]), 1e-9).unwrap();
        assert_eq!(unb.verdict, Verdict::Unbounded);
    }

    #[test]
    fn size_guard() {
        let a = vec![vec![1.0; 13]; 12];
        let big = LinearProgram::from_rows(&[1.0; 13], &a, &[1.0; 12]).unwrap();
        assert_eq!(
            enumerate_vertices(&big, 1e-9),
            Err(OracleError::TooLarge { size: 25 })
        );
    }

    #[test]
    fn cross_check_verdicts() {
        let mut report = solve(&example(), &SolveOptions::default()).unwrap();
        assert_eq!(
            cross_check(&example(), &report, 1e-9),
            Ok(CrossCheck::Agree)
        );
        report.solution.objective = Some(6.0);
        assert!(matches!(
            cross_check(&example(), &report, 1e-9).unwrap(),
            CrossCheck::Disagree { .. }
        ));

        let infeasible = lp(&[1.0], &[&[1.0]], &[-1.0]);
        let mut report = solve(&infeasible, &SolveOptions::default()).unwrap();
        report.solution = Solution::without_point(Status::NoSolution);
        let oracle = enumerate_vertices(&infeasible, 1e-9).unwrap();
        assert_eq!(compare(&report, &oracle, 1e-9), CrossCheck::Agree);
        report.solution = Solution::without_point(Status::Stalled);
        assert_eq!(compare(&report, &oracle, 1e-9), CrossCheck::Inconclusive);
    }

    #[test]
    fn optimum_dominates_vertices() {
        for seed in 0..50 {
            let lp = crate::fuzz::random_lp(seed, 4, 4, 5);
            let report = enumerate_vertices(&lp, 1e-9).unwrap();
            if let Verdict::Optimal { objective, .. } = report.verdict {
                assert!(report
                    .vertices
                    .iter()
                    .all(|v| v.objective <= objective + 1e-9));
            }
        }
    }
}
