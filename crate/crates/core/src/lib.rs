//! Linear programming by complementary Gauss-Jordan pivoting.
//!
//! A program `maximize f'x, Ax <= b, x >= 0` is embedded in the homogeneous
//! system `Mz = q` with a skew-symmetric core (see [`lpform`]). The solver in
//! [`engine`] alternates two principal pivots per iteration until `q >= 0`,
//! and checks along the way that the last-row/`q` ratios stay equal.
//! [`skewsym`] holds the matrix algebra behind the method, [`oracle`] a
//! brute-force vertex enumerator for cross-checking, and [`fuzz`] the seeded
//! generators used by the test suites and the CLI.
//!
//! ```
//! use skewlp::{solve, LinearProgram, SolveOptions, Status};
//!
//! let lp = LinearProgram::from_rows(&[2.0, 1.0], &[[1.0, 1.0], [1.0, 0.0]], &[5.0, 2.0]).unwrap();
//! let report = solve(&lp, &SolveOptions::default()).unwrap();
//! assert_eq!(report.status(), Status::Optimal);
//! assert!((report.solution.objective.unwrap() - 7.0).abs() < 1e-9);
//! ```

pub mod engine;
pub mod fuzz;
pub mod lpform;
pub mod oracle;
pub mod skewsym;
pub mod tableau;

/// Default zero threshold for pivots and signs.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default relative tolerance for ratio comparisons.
pub const DEFAULT_RATIO_TOL: f64 = 1e-6;

pub use engine::{
    compact_solve, full_solve, solve, EngineError, InitPolicy, IterationRecord, MinorRule, Mode,
    SolveOptions, SolveReport,
};
pub use lpform::{LinearProgram, Solution, Status};
pub use oracle::{compare, cross_check, enumerate_vertices, CrossCheck, Verdict, VertexReport};
pub use skewsym::{gj_plus, latent_skew_check, LSkewCert};
pub use tableau::{Matrix, PivotPos};
