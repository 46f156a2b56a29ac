use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::time::Instant;

use serde::Serialize;
use skewlp::engine::{full_solve, IterationRecord, SolveReport};
use skewlp::tableau::{format_number, round_to};
use skewlp::{compact_solve, fuzz, solve, LinearProgram, Matrix, PivotPos, SolveOptions, Status};

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const NO_SOLUTION: u8 = 1;
    pub const STALLED: u8 = 2;
    pub const INPUT: u8 = 3;
    pub const VIOLATION: u8 = 4;
}

pub fn status_code(report: &SolveReport) -> u8 {
    if !report.diagnostics.is_empty() {
        return exit::VIOLATION;
    }
    match report.status() {
        Status::Optimal => exit::OK,
        Status::NoSolution => exit::NO_SOLUTION,
        Status::Stalled => exit::STALLED,
    }
}

fn vector(v: &[f64], precision: usize) -> String {
    let items: Vec<String> = v.iter().map(|&x| format_number(x, precision)).collect();
    format!("[{}]", items.join(","))
}

pub fn summary_line(report: &SolveReport, precision: usize) -> String {
    let sol = &report.solution;
    let iters = report.iterations.len();
    let mut line = match sol.objective {
        Some(obj) if sol.status == Status::Optimal => format!(
            "Optimal obj={} x={} y={} iters={iters}",
            format_number(obj, precision),
            vector(&sol.x, precision),
            vector(&sol.y, precision),
        ),
        _ => format!("{} iters={iters}", sol.status),
    };
    if let Some(at) = report.cycle_at {
        line += &format!(" cycle_at={at}");
    }
    if !report.diagnostics.is_empty() {
        line += &format!(" ratio_violations={}", report.diagnostics.len());
    }
    line
}

// 1-based (row, col) pair
fn pos(p: PivotPos) -> [usize; 2] {
    [p.row + 1, p.col + 1]
}

fn rounded(v: &[f64], precision: u32) -> Vec<f64> {
    v.iter().map(|&x| round_to(x, precision)).collect()
}

fn profile(p: &[(usize, f64)], precision: u32) -> Vec<(usize, f64)> {
    p.iter()
        .map(|&(i, r)| (i + 1, round_to(r, precision)))
        .collect()
}

fn matrix_rows(m: &Matrix, precision: u32) -> Vec<Vec<f64>> {
    m.to_rows().iter().map(|r| rounded(r, precision)).collect()
}

#[derive(Serialize)]
struct TraceRecord {
    iteration: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    minor: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    minor_pre_add: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q_last_after_minor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    major: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio_before: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio_after: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    profile_before: Option<Vec<(usize, f64)>>,
    profile: Vec<(usize, f64)>,
    q: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tableau: Option<Vec<Vec<f64>>>,
}

impl TraceRecord {
    fn from_iteration(r: &IterationRecord, precision: u32) -> Self {
        let p = |v: f64| round_to(v, precision);
        Self {
            iteration: r.index,
            minor: Some(pos(r.minor)),
            minor_pre_add: r.minor_pre_add.map(p),
            q_last_after_minor: Some(p(r.q_last_after_minor)),
            major: r.major.map(pos),
            ratio_before: r.ratio_before.map(p),
            ratio_after: r.ratio_after.map(p),
            profile_before: Some(profile(&r.profile_before, precision)),
            profile: profile(&r.profile_after, precision),
            q: rounded(&r.q, precision),
            tableau: None,
        }
    }
}

#[derive(Serialize)]
struct TraceEnd<'a> {
    status: String,
    iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    objective: Option<f64>,
    #[serde(skip_serializing_if = "<[f64]>::is_empty")]
    x: &'a [f64],
    #[serde(skip_serializing_if = "<[f64]>::is_empty")]
    y: &'a [f64],
    #[serde(skip_serializing_if = "Option::is_none")]
    cycle_at: Option<usize>,
    ratio_violations: usize,
}

/// One JSON object per line: the starting state (iteration 0), one record
/// per iteration, and a closing status line.
pub fn write_trace(
    out: &mut impl Write,
    report: &SolveReport,
    precision: u32,
    tableaus: bool,
) -> io::Result<()> {
    let start = report.ratio_checks.first();
    let first_q = report
        .snapshots
        .first()
        .map(|m| m.column(m.cols() - 1))
        .unwrap_or_default();
    let initial = TraceRecord {
        iteration: 0,
        minor: None,
        minor_pre_add: None,
        q_last_after_minor: None,
        major: None,
        ratio_before: None,
        ratio_after: start.and_then(|c| c.common).map(|v| round_to(v, precision)),
        profile_before: None,
        profile: report
            .iterations
            .first()
            .map(|r| profile(&r.profile_before, precision))
            .unwrap_or_default(),
        q: rounded(&first_q, precision),
        tableau: None,
    };
    let records = std::iter::once(initial).chain(
        report
            .iterations
            .iter()
            .map(|r| TraceRecord::from_iteration(r, precision)),
    );
    for (i, mut rec) in records.enumerate() {
        if tableaus {
            rec.tableau = report.snapshots.get(i).map(|m| matrix_rows(m, precision));
        }
        writeln!(out, "{}", serde_json::to_string(&rec).expect("plain data"))?;
    }
    let sol = &report.solution;
    let end = TraceEnd {
        status: sol.status.to_string(),
        iterations: report.iterations.len(),
        objective: sol.objective.map(|v| round_to(v, precision)),
        x: &rounded(&sol.x, precision),
        y: &rounded(&sol.y, precision),
        cycle_at: report.cycle_at,
        ratio_violations: report.diagnostics.len(),
    };
    writeln!(out, "{}", serde_json::to_string(&end).expect("plain data"))
}

pub fn run_solve(lp: &LinearProgram, opts: &SolveOptions) -> Result<SolveReport, String> {
    solve(lp, opts).map_err(|e| e.to_string())
}

pub fn cmd_solve(
    out: &mut impl Write,
    lp: &LinearProgram,
    opts: &SolveOptions,
    precision: u32,
) -> io::Result<u8> {
    let report = match run_solve(lp, opts) {
        Ok(r) => r,
        Err(e) => {
            writeln!(out, "error: {e}")?;
            return Ok(exit::VIOLATION);
        }
    };
    if opts.trace {
        write_trace(out, &report, precision, false)?;
    }
    writeln!(out, "{}", summary_line(&report, precision as usize))?;
    Ok(status_code(&report))
}

pub fn cmd_trace(
    out: &mut impl Write,
    lp: &LinearProgram,
    opts: &SolveOptions,
    precision: u32,
    tableaus: bool,
) -> io::Result<u8> {
    let opts = SolveOptions {
        trace: true,
        ..opts.clone()
    };
    let report = match run_solve(lp, &opts) {
        Ok(r) => r,
        Err(e) => {
            writeln!(out, "error: {e}")?;
            return Ok(exit::VIOLATION);
        }
    };
    write_trace(out, &report, precision, tableaus)?;
    Ok(status_code(&report))
}

pub fn cmd_verify_claim4(
    out: &mut impl Write,
    lp: &LinearProgram,
    opts: &SolveOptions,
    precision: u32,
) -> io::Result<u8> {
    let report = match run_solve(lp, opts) {
        Ok(r) => r,
        Err(e) => {
            writeln!(out, "error: {e}")?;
            return Ok(exit::VIOLATION);
        }
    };
    writeln!(out, "iteration\trows\tcommon\tspread\tok")?;
    for c in &report.ratio_checks {
        let common = c
            .common
            .map_or("-".to_string(), |v| format_number(v, precision as usize));
        writeln!(
            out,
            "{}\t{}\t{common}\t{:.3e}\t{}",
            c.iteration, c.rows, c.spread, c.ok
        )?;
    }
    let bad = report.ratio_checks.iter().filter(|c| !c.ok).count();
    writeln!(
        out,
        "max ratio spread {:.3e} across {} checked instances, {bad} violations; {}",
        report.max_ratio_spread(),
        report.ratio_checks.len(),
        summary_line(&report, precision as usize)
    )?;
    Ok(if bad > 0 || !report.diagnostics.is_empty() {
        exit::VIOLATION
    } else {
        exit::OK
    })
}

pub fn cmd_fuzz_lemma1(
    out: &mut impl Write,
    seed: u64,
    trials: usize,
    dims: RangeInclusive<usize>,
    tol: f64,
) -> io::Result<u8> {
    writeln!(
        out,
        "fuzz-lemma1 seed={seed} trials={trials} dims={}..{} tol={tol:e}",
        dims.start(),
        dims.end()
    )?;
    let summary = fuzz::lemma1_campaign(seed, trials, dims, tol);
    for t in &summary.failures {
        if let fuzz::TrialOutcome::Fail { reason } = &t.outcome {
            writeln!(
                out,
                "FAIL seed={} dim={} j1={} j2={} pre_added={}: {reason}",
                t.seed,
                t.dim,
                t.j1 + 1,
                t.j2 + 1,
                t.pre_added
            )?;
        }
    }
    writeln!(
        out,
        "{}/{} pass, {} skipped, {} failed, max residual {:.3e}",
        summary.passed,
        summary.trials,
        summary.skipped,
        summary.failures.len(),
        summary.max_residual
    )?;
    Ok(if summary.failures.is_empty() {
        exit::OK
    } else {
        exit::VIOLATION
    })
}

/// Times full against compact mode on `trials` random feasible programs per
/// size `d` in `dims` (k and n drawn up to `d`). Timings vary between runs;
/// every other column is deterministic.
pub fn cmd_bench(
    out: &mut impl Write,
    seed: u64,
    trials: usize,
    dims: RangeInclusive<usize>,
    opts: &SolveOptions,
) -> io::Result<u8> {
    writeln!(
        out,
        "size\tinstances\toptimal\tagree\tfull_us\tcompact_us\tratio"
    )?;
    let mut code = exit::OK;
    for d in dims {
        let (mut full_t, mut compact_t) = (0.0, 0.0);
        let (mut optimal, mut agree) = (0, 0);
        for i in 0..trials as u64 {
            let lp = fuzz::random_feasible_lp(seed.wrapping_add(i), d, d, 5);
            let clock = Instant::now();
            let full = full_solve(&lp, opts);
            full_t += clock.elapsed().as_secs_f64();
            let clock = Instant::now();
            let compact = compact_solve(&lp, opts);
            compact_t += clock.elapsed().as_secs_f64();
            let (Ok(full), Ok(compact)) = (full, compact) else {
                code = exit::VIOLATION;
                continue;
            };
            if full.status() == Status::Optimal {
                optimal += 1;
            }
            let same = full.pivot_sequence() == compact.pivot_sequence()
                && full.solution.objective == compact.solution.objective;
            if same {
                agree += 1;
            } else {
                code = exit::VIOLATION;
            }
        }
        let n = trials.max(1) as f64;
        let (f_us, c_us) = (full_t * 1e6 / n, compact_t * 1e6 / n);
        writeln!(
            out,
            "{d}\t{trials}\t{optimal}\t{agree}\t{f_us:.1}\t{c_us:.1}\t{:.2}",
            if c_us > 0.0 { f_us / c_us } else { 0.0 }
        )?;
    }
    Ok(code)
}
