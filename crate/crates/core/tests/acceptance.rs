//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p skewlp --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skewlp::engine::{check_ratios, compact_state, iterate, ratio_profile, Instance, SolveOptions};
use skewlp::lpform::{build_homogeneous, initialize_instance, InitVariant};
use skewlp::oracle::{compare, enumerate_vertices, CrossCheck, Verdict};
use skewlp::skewsym::{
    appendix_certificate, appendix_closed_forms, base_case_closed_form, gj_plus, skew3,
    skew_symmetrize, BaseCaseParams,
};
use skewlp::tableau::add_row_multiple;
use skewlp::{compact_solve, fuzz, solve, LinearProgram, Matrix, SolveReport, Status};

const PRINTED: f64 = 0.005;

const P0: [[f64; 9]; 5] = [
    [-5.0, -2.0, 3.0, 2.0, 1.0, 0.0, 0.0, 0.0, 5.0],
    [-5.0, -2.0, 3.0, 1.0, 0.0, 1.0, 0.0, 0.0, 2.0],
    [-6.0, -3.0, 2.0, 1.0, 0.0, 0.0, 1.0, 0.0, -2.0],
    [-6.0, -2.0, 2.0, 1.0, 0.0, 0.0, 0.0, 1.0, -1.0],
    [-5.0, -2.0, 2.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
];

const P1: [[f64; 9]; 5] = [
    [1.0, 0.29, -0.14, 0.0, 0.14, 0.0, 0.0, -0.29, 1.0],
    [0.0, -0.29, 1.14, 0.0, -0.14, 1.0, 0.0, -0.71, 2.0],
    [0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0, -1.0, -1.0],
    [0.0, -0.29, 1.14, 1.0, 0.86, 0.0, 0.0, -0.71, 5.0],
    [0.0, -0.29, 0.14, 0.0, -0.14, 0.0, 0.0, -0.71, 0.0],
];

const P2: [[f64; 9]; 5] = [
    [1.0, 0.0, 0.0, 0.0, 0.1, 0.1, 0.2, -0.7, 1.0],
    [0.0, 1.0, 0.0, 0.0, 0.1, 0.1, -0.8, 1.3, 1.0],
    [0.0, 0.0, 1.0, 0.0, -0.1, 0.9, -0.2, -0.3, 2.0],
    [0.0, 0.0, 0.0, 1.0, 1.0, -1.0, 0.0, 0.0, 3.0],
    [0.0, 0.0, 0.0, 0.0, -1.0, -1.0, -2.0, -3.0, 0.0],
];

const C0: [[f64; 5]; 5] = [
    [-5.0, -2.0, 3.0, 2.0, 5.0],
    [-5.0, -2.0, 3.0, 1.0, 2.0],
    [-6.0, -3.0, 2.0, 1.0, -2.0],
    [-6.0, -2.0, 2.0, 1.0, -1.0],
    [-5.0, -2.0, 2.0, 1.0, 0.0],
];

const C1: [[f64; 5]; 5] = [
    [0.14, 0.29, -0.14, -0.29, 1.0],
    [-0.14, -0.29, 1.14, -0.71, 2.0],
    [0.0, -1.0, 0.0, -1.0, -1.0],
    [0.86, -0.29, 1.14, -0.71, 5.0],
    [-0.14, -0.29, 0.14, -0.71, 0.0],
];

const C2: [[f64; 5]; 5] = [
    [0.1, 0.1, 0.2, -0.7, 1.0],
    [0.1, 0.1, -0.8, 1.3, 1.0],
    [-0.1, 0.9, -0.2, -0.3, 2.0],
    [1.0, -1.0, 0.0, 0.0, 3.0],
    [-1.0, -1.0, -2.0, -3.0, 0.0],
];

const RANDOM_SOLVES: u64 = 200;
const EQUIV_SOLVES: u64 = 100;

struct Gate {
    failed: usize,
}

impl Gate {
    fn report(&mut self, id: u32, name: &str, ok: bool, detail: String) {
        if !ok {
            self.failed += 1;
        }
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("[{tag}] {id:>2} {name}: {detail}");
    }
}

fn example() -> LinearProgram {
    LinearProgram::from_rows(&[2.0, 1.0], &[[1.0, 1.0], [1.0, 0.0]], &[5.0, 2.0]).unwrap()
}

fn p0() -> Instance {
    initialize_instance(&build_homogeneous(&example()), InitVariant::AllRows).unwrap()
}

fn mat<const C: usize>(rows: &[[f64; C]]) -> Matrix {
    Matrix::from_rows(rows).unwrap()
}

fn rows(m: &Matrix, range: std::ops::Range<usize>) -> Matrix {
    Matrix::from_fn(range.len(), m.cols(), |i, j| m[(range.start + i, j)])
}

fn trace_states() -> ([Instance; 3], Duration) {
    let opts = SolveOptions::default();
    let start = p0();
    let clock = Instant::now();
    let mut one = start.clone();
    iterate(&mut one, 1, &opts).unwrap();
    let mut two = one.clone();
    iterate(&mut two, 2, &opts).unwrap();
    let elapsed = clock.elapsed();
    ([start, one, two], elapsed)
}

fn fmt_row(m: &Matrix, i: usize) -> String {
    let cells: Vec<String> = m.row(i).iter().map(|v| format!("{v:.4}")).collect();
    format!("({})", cells.join(", "))
}

fn criterion_1(g: &mut Gate) {
    let ok = *p0().tableau() == mat(&P0);
    g.report(1, "golden trace P0", ok, format!("exact match = {ok}"));
}

fn criterion_2(g: &mut Gate) {
    let ([_, one, two], elapsed) = trace_states();
    let d1 = one.tableau().max_abs_diff(&mat(&P1));
    let top = rows(two.tableau(), 0..4).max_abs_diff(&rows(&mat(&P2), 0..4));
    let last = rows(two.tableau(), 4..5).max_abs_diff(&rows(&mat(&P2), 4..5));
    let fast = elapsed < Duration::from_millis(1);
    let ok = d1 <= PRINTED && top <= PRINTED && last <= PRINTED && fast;
    let mut detail =
        format!("P1 dev {d1:.4}; P2 rows 1-4 dev {top:.4}; P2 row 5 dev {last:.4}; {elapsed:?}");
    if last > PRINTED {
        detail += &format!(
            "; P2 row 5 computed {} vs printed {}",
            fmt_row(two.tableau(), 4),
            fmt_row(&mat(&P2), 4)
        );
    }
    g.report(2, "golden trace P1/P2", ok, detail);
}

fn criterion_3(g: &mut Gate) {
    let report = solve(&example(), &SolveOptions::default()).unwrap();
    let sol = &report.solution;
    let close = |v: &[f64], w: &[f64]| {
        v.len() == w.len() && v.iter().zip(w).all(|(a, b)| (a - b).abs() <= 1e-9)
    };
    let obj = sol.objective.unwrap_or(f64::NAN);
    let ok = sol.status == Status::Optimal
        && close(&sol.x, &[2.0, 3.0])
        && close(&sol.y, &[1.0, 1.0])
        && (obj - 7.0).abs() <= 1e-9
        && report.iterations.len() == 2;
    g.report(
        3,
        "example solution",
        ok,
        format!(
            "{} x={:?} y={:?} obj={obj} iters={}",
            sol.status,
            sol.x,
            sol.y,
            report.iterations.len()
        ),
    );
}

fn criterion_4(g: &mut Gate) {
    let ([a, b, c], _) = trace_states();
    let expected = [-1.0, -1.0 / 7.0, -1.0];
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, (inst, want)) in ["P0", "P1", "P2"]
        .iter()
        .zip([a, b, c].iter().zip(expected))
    {
        let check = check_ratios(inst, 0, 1e-9);
        let common = check.common.unwrap_or(f64::NAN);
        let good = check.spread <= 1e-9
            && ratio_profile(inst, 1e-9).len() == 4
            && (common - want).abs() <= 1e-9;
        ok &= good;
        parts.push(format!(
            "{name} spread {:.1e} common {common:.4} (want {want:.4})",
            check.spread
        ));
    }

    let mut states = 0usize;
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    for seed in 0..RANDOM_SOLVES {
        let report = solve(&fuzz::random_lp(seed, 6, 6, 5), &SolveOptions::default()).unwrap();
        states += report.ratio_checks.len();
        worst = worst.max(
            report
                .ratio_checks
                .iter()
                .map(|c| c.spread / (1.0 + c.common.unwrap_or(0.0).abs()))
                .fold(0.0, f64::max),
        );
        if report.ratio_checks.iter().any(|c| !c.ok) || !report.diagnostics.is_empty() {
            bad.push(seed);
        }
    }
    ok &= bad.is_empty();
    parts.push(format!(
        "{RANDOM_SOLVES} random solves: {states} q_last=0 states, max relative spread {worst:.1e}, violating seeds {bad:?}"
    ));
    g.report(4, "ratio equality", ok, parts.join("; "));
}

fn criterion_5(g: &mut Gate) {
    let clock = Instant::now();
    let summary = fuzz::lemma1_campaign(42, 500, 3..=10, 1e-6);
    let elapsed = clock.elapsed();
    let seeds: Vec<u64> = summary.failures.iter().map(|t| t.seed).collect();
    let ok = seeds.is_empty() && summary.skipped == 0 && elapsed < Duration::from_secs(5);
    g.report(
        5,
        "major-step closure",
        ok,
        format!(
            "base seed 42: {}/{} pass, {} skipped, max residual {:.1e}, {elapsed:?}; failing seeds {seeds:?}",
            summary.passed, summary.trials, summary.skipped, summary.max_residual
        ),
    );
}

fn draw_nonzero(rng: &mut ChaCha8Rng) -> f64 {
    let v: f64 = rng.gen_range(0.5..5.0);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

fn criterion_6(g: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut base, mut appendix, mut worst) = (0usize, 0usize, 0.0f64);
    let mut errors = Vec::new();
    while base < 100 {
        let v: Vec<f64> = (0..6).map(|_| draw_nonzero(&mut rng)).collect();
        let p = BaseCaseParams::new(v[0], v[1], v[2], v[3], v[4], v[5]);
        let start = add_row_multiple(&p.skew_matrix(), 3, 2, 1.0).unwrap();
        if p.pi2().abs() < 0.5 || start[(2, 2)].abs() < 0.1 {
            continue;
        }
        let mid = gj_plus(&start, 2, 1e-9).unwrap();
        if mid[(1, 1)].abs() < 0.1 {
            continue;
        }
        base += 1;
        let path = gj_plus(&mid, 1, 1e-9).unwrap();
        let closed = base_case_closed_form(&p, 1e-9).unwrap();
        let dev = closed.max_abs_diff(&path);
        worst = worst.max(dev);
        if dev > 1e-9 || skew_symmetrize(&closed, &p.certificate(), 1e-8).is_err() {
            errors.push(format!("base {v:?}"));
        }
    }
    while appendix < 100 {
        let (s12, q1, q2) = (
            draw_nonzero(&mut rng),
            draw_nonzero(&mut rng),
            draw_nonzero(&mut rng),
        );
        if (q2 - s12).abs() < 0.5 {
            continue;
        }
        appendix += 1;
        let forms = appendix_closed_forms(s12, q1, q2, 1e-9).unwrap();
        let s1 = add_row_multiple(&skew3(s12, q1, q2), 2, 0, 1.0).unwrap();
        let s1_bar = gj_plus(&s1, 0, 1e-9).unwrap();
        let s2 = gj_plus(&s1_bar, 1, 1e-9).unwrap();
        let dev = s1
            .max_abs_diff(&forms.s1)
            .max(s1_bar.max_abs_diff(&forms.s1_bar))
            .max(s2.max_abs_diff(&forms.s2));
        worst = worst.max(dev);
        let cert = appendix_certificate(s12, q2);
        if dev > 1e-9 || skew_symmetrize(&forms.s2, &cert, 1e-8).is_err() {
            errors.push(format!("appendix ({s12}, {q1}, {q2})"));
        }
    }
    g.report(
        6,
        "closed forms",
        errors.is_empty(),
        format!("{base} base-case + {appendix} appendix draws, max dev {worst:.1e}; failures {errors:?}"),
    );
}

fn criterion_7(g: &mut Gate) {
    let illustration = mat(&[[2.0, -8.0, 1.0], [4.0, -6.0, -3.0], [-2.0, 6.0, 0.0]]);
    let mut cases = vec![(illustration, 1usize)];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    while cases.len() < 201 {
        let d = rng.gen_range(2..=8);
        let m = Matrix::from_fn(d, d, |_, _| rng.gen_range(-5.0..5.0));
        let j = rng.gen_range(0..d);
        if m[(j, j)].abs() > 0.1 {
            cases.push((m, j));
        }
    }
    let mut worst: f64 = 0.0;
    for (m, j) in &cases {
        let back = gj_plus(&gj_plus(m, *j, 1e-9).unwrap(), *j, 1e-9).unwrap();
        worst = worst.max(back.max_abs_diff(m));
    }
    g.report(
        7,
        "GJ+ involution",
        worst <= 1e-9,
        format!(
            "{} matrices (illustration included), max dev {worst:.1e}",
            cases.len()
        ),
    );
}

fn equivalence_set() -> Vec<(u64, LinearProgram)> {
    (0..EQUIV_SOLVES)
        .map(|seed| (seed, fuzz::random_feasible_lp(seed, 6, 6, 5)))
        .collect()
}

fn criterion_8(g: &mut Gate, runs: &[(u64, LinearProgram, SolveReport)]) {
    let mut mismatched = Vec::new();
    for (seed, lp, full) in runs {
        let compact = compact_solve(lp, &SolveOptions::default()).unwrap();
        let same_obj = match (full.solution.objective, compact.solution.objective) {
            (Some(a), Some(b)) => (a - b).abs() <= 1e-9,
            (None, None) => true,
            _ => false,
        };
        if full.pivot_sequence() != compact.pivot_sequence() || !same_obj {
            mismatched.push(*seed);
        }
    }
    let ([a, b, c], _) = trace_states();
    let (m0, _) = compact_state(&a);
    let (m1, _) = compact_state(&b);
    let (m2, _) = compact_state(&c);
    let d0 = m0.max_abs_diff(&mat(&C0));
    let d1 = m1.max_abs_diff(&mat(&C1));
    let d2_top = rows(&m2, 0..4).max_abs_diff(&rows(&mat(&C2), 0..4));
    let d2_last = rows(&m2, 4..5).max_abs_diff(&rows(&mat(&C2), 4..5));
    let ok = mismatched.is_empty()
        && d0 <= PRINTED
        && d1 <= PRINTED
        && d2_top <= PRINTED
        && d2_last <= PRINTED;
    let mut detail = format!(
        "{} feasible LPs, mismatching seeds {mismatched:?}; compact P0 dev {d0:.4}, P1 dev {d1:.4}, P2 rows 1-4 dev {d2_top:.4}, P2 row 5 dev {d2_last:.4}",
        runs.len()
    );
    if d2_last > PRINTED {
        detail += &format!(
            " (computed {} vs printed {})",
            fmt_row(&m2, 4),
            fmt_row(&mat(&C2), 4)
        );
    }
    g.report(8, "compact equivalence", ok, detail);
}

fn criterion_9(g: &mut Gate, runs: &[(u64, LinearProgram, SolveReport)]) {
    let (mut optimal, mut oracle_optimal) = (0, 0);
    let mut wrong = Vec::new();
    for (seed, lp, report) in runs {
        let oracle = enumerate_vertices(lp, 1e-9).unwrap();
        if matches!(oracle.verdict, Verdict::Optimal { .. }) {
            oracle_optimal += 1;
        }
        if report.status() != Status::Optimal {
            continue;
        }
        optimal += 1;
        if !matches!(compare(report, &oracle, 1e-6), CrossCheck::Agree) {
            wrong.push(*seed);
        }
    }
    let hand: [(&str, LinearProgram); 4] = [
        (
            "x <= -1",
            LinearProgram::from_rows(&[1.0], &[[1.0]], &[-1.0]).unwrap(),
        ),
        (
            "x1 + x2 <= -2, x1 <= 3",
            LinearProgram::from_rows(&[1.0, 1.0], &[[1.0, 1.0], [1.0, 0.0]], &[-2.0, 3.0]).unwrap(),
        ),
        (
            "0x <= 1",
            LinearProgram::from_rows(&[1.0], &[[0.0]], &[1.0]).unwrap(),
        ),
        (
            "x1 - x2 <= 1",
            LinearProgram::from_rows(&[1.0, 1.0], &[[1.0, -1.0]], &[1.0]).unwrap(),
        ),
    ];
    let mut hand_bad = Vec::new();
    for (name, lp) in &hand {
        for compact in [false, true] {
            let opts = SolveOptions::default();
            let report = if compact {
                compact_solve(lp, &opts)
            } else {
                solve(lp, &opts)
            }
            .unwrap();
            if report.status() == Status::Optimal {
                hand_bad.push(*name);
            }
        }
    }
    g.report(
        9,
        "oracle agreement",
        wrong.is_empty() && hand_bad.is_empty(),
        format!(
            "solver Optimal on {optimal}/{} (oracle: {oracle_optimal} optimal), disagreeing seeds {wrong:?}; hand-built infeasible/unbounded reported Optimal: {hand_bad:?}",
            runs.len()
        ),
    );
}

fn criterion_10(g: &mut Gate, runs: &[(u64, LinearProgram, SolveReport)]) {
    let mut counts = [0usize; 3];
    let mut stalled = Vec::new();
    for seed in 0..RANDOM_SOLVES {
        let report = solve(&fuzz::random_lp(seed, 6, 6, 5), &SolveOptions::default()).unwrap();
        match report.status() {
            Status::Optimal => counts[0] += 1,
            Status::NoSolution => counts[1] += 1,
            Status::Stalled => {
                counts[2] += 1;
                stalled.push(format!("random_lp({seed})"));
            }
        }
    }
    for (seed, _, report) in runs {
        if report.status() == Status::Stalled {
            stalled.push(format!("random_feasible_lp({seed})"));
        }
    }
    g.report(
        10,
        "stall reporting",
        true,
        format!(
            "{RANDOM_SOLVES} random LPs: {} Optimal, {} NoSolution, {} Stalled; no iteration bound asserted; stalled reproducers {stalled:?}",
            counts[0], counts[1], counts[2]
        ),
    );
}

fn main() -> ExitCode {
    let mut gate = Gate { failed: 0 };
    criterion_1(&mut gate);
    criterion_2(&mut gate);
    criterion_3(&mut gate);
    criterion_4(&mut gate);
    criterion_5(&mut gate);
    criterion_6(&mut gate);
    criterion_7(&mut gate);

    let runs: Vec<(u64, LinearProgram, SolveReport)> = equivalence_set()
        .into_iter()
        .map(|(seed, lp)| {
            let report = solve(&lp, &SolveOptions::default()).unwrap();
            (seed, lp, report)
        })
        .collect();
    criterion_8(&mut gate, &runs);
    criterion_9(&mut gate, &runs);
    criterion_10(&mut gate, &runs);

    println!("acceptance: {} of 10 criteria failed", gate.failed);
    if gate.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
