//! The iterative solver.
//!
//! Every iteration is a pair of principal pivots on `[M q]`:
//!
//! * **MinorP** picks a row `i` with `q_i < 0` whose partner column `c` has a
//!   positive last-row entry, and pivots at `(i, c)`. If `m_ic` is not
//!   positive the last row is added first (scaled so that `m_ic` becomes
//!   `m_last,c`), which leaves `q` untouched because `q_last = 0`. After the
//!   pivot `q_last > 0`.
//! * **MajorP** picks the first nonbasic column `j` with `m_last,j > 0` whose
//!   complementary row `r` satisfies `q_r / m_rj = q_last / m_last,j` with
//!   `m_rj > 0`, and pivots at `(r, j)`, which brings `q_last` back to zero.
//!
//! Whenever `q_last = 0` the ratios `m_last,corr(i) / q_i` agree across all
//! rows with `q_i != 0`; the solver monitors this and reports violations.
//!
//! The run stops with `Optimal` once `q >= 0`, with `NoSolution` when either
//! pivot has no candidate, and with `Stalled` at the iteration cap or when a
//! basis recurs. While `q_last = 0`, `q` is a function of the basis and the
//! pivot rules read only `q` and last-row signs, so a recurring basis (with
//! the same last-row sign) repeats forever.

mod compact;
mod instance;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use compact::{compact_state, CompactInstance};
pub use instance::{Instance, PivotState};

use crate::lpform::{
    build_homogeneous, extract_solution, initialize_instance, HomogeneousSystem, InitVariant,
    LinearProgram, LpError, Solution, Status,
};
use crate::skewsym::SkewError;
use crate::tableau::{Matrix, PivotPos, TableauError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error(transparent)]
    Skew(#[from] SkewError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(
        "no MinorP pivot: no row with q_i < 0 has a partner column with a positive last-row entry"
    )]
    NoEligiblePivot,
    #[error("ratio equality violated at iteration {}: spread {:e}", .0.iteration, .0.spread)]
    RatioViolation(Box<RatioViolation>),
}

/// Row choice among MinorP candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MinorRule {
    /// Largest (least negative) `q_i`, ties to the smallest row.
    #[default]
    LeastNegative,
    /// Smallest `q_i`, ties to the smallest row.
    MostNegative,
    /// Smallest eligible row index.
    FirstIndex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Mode {
    #[default]
    Full,
    Compact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum InitPolicy {
    #[default]
    AllRows,
    /// Add the last row only to the first MinorP row.
    SingleRow,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Zero threshold for pivots, signs and termination.
    pub tol: f64,
    /// Relative tolerance for ratio equality, and the `|q_i|` floor below
    /// which a row is left out of the ratio profile.
    pub ratio_tol: f64,
    /// Iteration cap; `None` means `50 (k + n)`.
    pub max_iters: Option<usize>,
    pub mode: Mode,
    pub minor_rule: MinorRule,
    pub init: InitPolicy,
    /// Keep a snapshot of the state after initialization and each iteration.
    pub trace: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: crate::DEFAULT_TOL,
            ratio_tol: crate::DEFAULT_RATIO_TOL,
            max_iters: None,
            mode: Mode::Full,
            minor_rule: MinorRule::LeastNegative,
            init: InitPolicy::AllRows,
            trace: false,
        }
    }
}

impl SolveOptions {
    pub fn iteration_cap(&self, size: usize) -> usize {
        self.max_iters.unwrap_or(50 * size).max(1)
    }
}

/// MinorP choice, with the last-row multiple to add to the pivot row first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinorChoice {
    pub pos: PivotPos,
    pub pre_add: Option<f64>,
}

/// One MinorP/MajorP pair. Pivot columns are `z` indices in both modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    /// 1-based.
    pub index: usize,
    pub minor: PivotPos,
    pub minor_pre_add: Option<f64>,
    pub q_last_after_minor: f64,
    pub major: Option<PivotPos>,
    pub ratio_before: Option<f64>,
    pub ratio_after: Option<f64>,
    pub profile_before: Vec<(usize, f64)>,
    pub profile_after: Vec<(usize, f64)>,
    /// `q` after the iteration, last entry included.
    pub q: Vec<f64>,
}

/// Ratio agreement at one `q_last = 0` state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioCheck {
    /// Iterations completed when the state was reached.
    pub iteration: usize,
    pub rows: usize,
    pub common: Option<f64>,
    pub spread: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioViolation {
    pub iteration: usize,
    pub spread: f64,
    pub profile: Vec<(usize, f64)>,
    pub record: IterationRecord,
    pub tableau: Matrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solution: Solution,
    pub iterations: Vec<IterationRecord>,
    pub ratio_checks: Vec<RatioCheck>,
    pub diagnostics: Vec<RatioViolation>,
    /// Populated when `SolveOptions::trace` is set.
    pub snapshots: Vec<Matrix>,
    pub mode: Mode,
    /// Iteration after which an earlier state recurred, if the run stopped
    /// for that reason.
    pub cycle_at: Option<usize>,
}

impl SolveReport {
    pub fn status(&self) -> Status {
        self.solution.status
    }

    pub fn pivot_sequence(&self) -> Vec<(PivotPos, Option<PivotPos>)> {
        self.iterations.iter().map(|r| (r.minor, r.major)).collect()
    }

    pub fn max_ratio_spread(&self) -> f64 {
        self.ratio_checks
            .iter()
            .fold(0.0, |acc, c| acc.max(c.spread))
    }
}

/// `(row, m_last,corr(row) / q_row)` for every row with `|q_row| > zero_tol`.
pub fn ratio_profile<S: PivotState>(inst: &S, zero_tol: f64) -> Vec<(usize, f64)> {
    let last = inst.size();
    inst.corr()
        .iter()
        .enumerate()
        .filter_map(|(i, &c)| {
            let q = inst.q(i);
            (q.abs() > zero_tol).then(|| (i, inst.entry(last, c) / q))
        })
        .collect()
}

fn q_scale<S: PivotState>(inst: &S) -> f64 {
    (0..inst.size()).fold(1.0f64, |acc, i| acc.max(inst.q(i).abs()))
}

/// Spread of a ratio profile, with the common value taken from the row of
/// largest `|q_i|`. Rows with `|q_i| <= ratio_tol * max(1, max |q|)` count
/// as zero.
pub fn check_ratios<S: PivotState>(inst: &S, iteration: usize, ratio_tol: f64) -> RatioCheck {
    let profile = ratio_profile(inst, ratio_tol * q_scale(inst));
    let common = profile
        .iter()
        .max_by(|a, b| inst.q(a.0).abs().total_cmp(&inst.q(b.0).abs()))
        .map(|&(_, r)| r);
    let (lo, hi) = profile
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, r)| {
            (lo.min(r), hi.max(r))
        });
    let spread = if profile.is_empty() { 0.0 } else { hi - lo };
    let ok = common.is_none_or(|c| spread <= ratio_tol * (1.0 + c.abs()));
    RatioCheck {
        iteration,
        rows: profile.len(),
        common,
        spread,
        ok,
    }
}

/// MinorP selection. `Ok(None)` means `q >= 0` already.
pub fn select_minor_pivot<S: PivotState>(
    inst: &S,
    rule: MinorRule,
    tol: f64,
) -> Result<Option<MinorChoice>, EngineError> {
    let size = inst.size();
    let negative: Vec<usize> = (0..size).filter(|&i| inst.q(i) < -tol).collect();
    if negative.is_empty() {
        return Ok(None);
    }
    let eligible = negative
        .into_iter()
        .filter(|&i| inst.entry(size, inst.corr()[i]) > tol);
    let row = match rule {
        MinorRule::LeastNegative => eligible.fold(None, |best: Option<usize>, i| match best {
            Some(b) if inst.q(b) >= inst.q(i) => Some(b),
            _ => Some(i),
        }),
        MinorRule::MostNegative => eligible.fold(None, |best: Option<usize>, i| match best {
            Some(b) if inst.q(b) <= inst.q(i) => Some(b),
            _ => Some(i),
        }),
        MinorRule::FirstIndex => eligible.min(),
    };
    let Some(row) = row else {
        return Err(EngineError::NoEligiblePivot);
    };
    let col = inst.corr()[row];
    let pivot = inst.entry(row, col);
    let pre_add = (pivot <= tol).then(|| 1.0 - pivot / inst.entry(size, col));
    Ok(Some(MinorChoice {
        pos: PivotPos::new(row, col),
        pre_add,
    }))
}

/// MajorP selection after a MinorP pivot (`q_last > 0`). `None` means no
/// nonbasic column can restore `q_last = 0`.
pub fn select_major_pivot<S: PivotState>(inst: &S, tol: f64, ratio_tol: f64) -> Option<PivotPos> {
    let size = inst.size();
    let q_last = inst.q(size);
    if q_last <= tol {
        return None;
    }
    (0..2 * size).filter(|&j| !inst.is_basic(j)).find_map(|j| {
        let lr = inst.entry(size, j);
        if lr <= tol {
            return None;
        }
        let r = j % size;
        let m = inst.entry(r, j);
        if m <= tol {
            return None;
        }
        let target = q_last / lr;
        let matches = (inst.q(r) / m - target).abs() <= ratio_tol * (1.0 + target.abs());
        matches.then_some(PivotPos::new(r, j))
    })
}

/// One MinorP/MajorP pair applied in place.
///
/// A record with `major: None` means MajorP found no column; the state is
/// left just after MinorP. A ratio mismatch after MajorP is returned as
/// `RatioViolation`, with the state already advanced.
pub fn iterate<S: PivotState>(
    inst: &mut S,
    index: usize,
    opts: &SolveOptions,
) -> Result<IterationRecord, EngineError> {
    let size = inst.size();
    let before = check_ratios(inst, index - 1, opts.ratio_tol);
    let profile_before = ratio_profile(inst, opts.ratio_tol * q_scale(inst));
    let minor =
        select_minor_pivot(inst, opts.minor_rule, opts.tol)?.ok_or(EngineError::NoEligiblePivot)?;
    if let Some(beta) = minor.pre_add {
        inst.add_last_row(minor.pos.row, beta);
    }
    inst.principal_pivot(minor.pos.row, opts.tol)?;
    let q_last_after_minor = inst.q(size);

    let mut record = IterationRecord {
        index,
        minor: minor.pos,
        minor_pre_add: minor.pre_add,
        q_last_after_minor,
        major: None,
        ratio_before: before.common,
        ratio_after: None,
        profile_before,
        profile_after: Vec::new(),
        q: Vec::new(),
    };
    let Some(major) = select_major_pivot(inst, opts.tol, opts.ratio_tol) else {
        record.q = inst.q_vector();
        return Ok(record);
    };
    inst.principal_pivot(major.row, opts.tol)?;
    let after = check_ratios(inst, index, opts.ratio_tol);
    record.major = Some(major);
    record.ratio_after = after.common;
    record.profile_after = ratio_profile(inst, opts.ratio_tol * q_scale(inst));
    record.q = inst.q_vector();
    if !after.ok {
        return Err(EngineError::RatioViolation(Box::new(RatioViolation {
            iteration: index,
            spread: after.spread,
            profile: record.profile_after.clone(),
            record,
            tableau: inst.snapshot(),
        })));
    }
    Ok(record)
}

fn is_terminal<S: PivotState>(inst: &S, tol: f64) -> bool {
    let size = inst.size();
    inst.q(size).abs() <= tol && (0..size).all(|i| inst.q(i) >= -tol)
}

/// Drives `iterate` to a terminal status.
pub fn run<S: PivotState>(mut inst: S, opts: &SolveOptions) -> Result<SolveReport, EngineError> {
    let cap = opts.iteration_cap(inst.size());
    let mut iterations = Vec::new();
    let mut diagnostics = Vec::new();
    let mut snapshots = Vec::new();
    let mut ratio_checks = vec![check_ratios(&inst, 0, opts.ratio_tol)];
    let mut seen = HashSet::from([cycle_key(&inst, opts.tol)]);
    let mut cycle_at = None;
    if opts.trace {
        snapshots.push(inst.snapshot());
    }
    let status = loop {
        if is_terminal(&inst, opts.tol) {
            break Status::Optimal;
        }
        if iterations.len() >= cap {
            break Status::Stalled;
        }
        let index = iterations.len() + 1;
        let record = match iterate(&mut inst, index, opts) {
            Ok(record) => record,
            Err(EngineError::NoEligiblePivot) => break Status::NoSolution,
            Err(EngineError::RatioViolation(v)) => {
                let record = v.record.clone();
                diagnostics.push(*v);
                record
            }
            Err(e) => return Err(e),
        };
        let finished_major = record.major.is_some();
        iterations.push(record);
        if opts.trace {
            snapshots.push(inst.snapshot());
        }
        if !finished_major {
            break Status::NoSolution;
        }
        ratio_checks.push(check_ratios(&inst, index, opts.ratio_tol));
        if !seen.insert(cycle_key(&inst, opts.tol)) && !is_terminal(&inst, opts.tol) {
            cycle_at = Some(index);
            break Status::Stalled;
        }
    };
    let solution = match status {
        Status::Optimal => extract_solution(&inst, opts.tol)?,
        other => Solution::without_point(other),
    };
    Ok(SolveReport {
        solution,
        iterations,
        ratio_checks,
        diagnostics,
        snapshots,
        mode: opts.mode,
        cycle_at,
    })
}

// basis plus the sign of the last row on the nonbasic columns
fn cycle_key<S: PivotState>(inst: &S, tol: f64) -> (Vec<usize>, bool) {
    let size = inst.size();
    let positive = inst
        .corr()
        .iter()
        .map(|&c| inst.entry(size, c))
        .find(|v| v.abs() > tol)
        .is_some_and(|v| v > 0.0);
    (inst.basis().to_vec(), positive)
}

/// First MinorP row on the raw `[M q]`, used by the single-row start.
fn first_minor_row(sys: &HomogeneousSystem, opts: &SolveOptions) -> Option<usize> {
    let size = sys.size();
    let raw = initialize_instance(sys, InitVariant::AllRows).ok()?;
    // q and the last row are identical for every initialization variant;
    // only the partner entries differ, and those do not affect the row choice
    match select_minor_pivot(&raw, opts.minor_rule, opts.tol) {
        Ok(Some(choice)) if choice.pos.row < size => Some(choice.pos.row),
        _ => None,
    }
}

/// The starting full instance for `opts.init`.
pub fn start_instance(lp: &LinearProgram, opts: &SolveOptions) -> Result<Instance, EngineError> {
    let sys = build_homogeneous(lp);
    let variant = match opts.init {
        InitPolicy::AllRows => InitVariant::AllRows,
        InitPolicy::SingleRow => match first_minor_row(&sys, opts) {
            Some(row) => InitVariant::SingleRow(row),
            None => InitVariant::AllRows,
        },
    };
    Ok(initialize_instance(&sys, variant)?)
}

/// Solves on the full `(k+n+1) x (2(k+n)+1)` tableau.
pub fn full_solve(lp: &LinearProgram, opts: &SolveOptions) -> Result<SolveReport, EngineError> {
    let opts = SolveOptions {
        mode: Mode::Full,
        ..opts.clone()
    };
    run(start_instance(lp, &opts)?, &opts)
}

/// Solves on the `(k+n+1) x (k+n+1)` compact matrix with GJ+ pivots.
pub fn compact_solve(lp: &LinearProgram, opts: &SolveOptions) -> Result<SolveReport, EngineError> {
    let opts = SolveOptions {
        mode: Mode::Compact,
        ..opts.clone()
    };
    let start = CompactInstance::from_full(&start_instance(lp, &opts)?);
    run(start, &opts)
}

/// Solves in the mode selected by `opts.mode`.
pub fn solve(lp: &LinearProgram, opts: &SolveOptions) -> Result<SolveReport, EngineError> {
    match opts.mode {
        Mode::Full => full_solve(lp, opts),
        Mode::Compact => compact_solve(lp, opts),
    }
}
