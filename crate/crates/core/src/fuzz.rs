//! Seeded instance generators and the major-step closure trial.
//!
//! Every generator is a pure function of its seed (ChaCha8), so a failing
//! case is reproduced by its seed alone.

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::lpform::LinearProgram;
use crate::skewsym::{gj_plus, latent_skew_check, skew_symmetrize, SkewError};
use crate::tableau::Matrix;

/// LP with `k` in `1..=max_k`, `n` in `1..=max_n` and integer data in
/// `[-range, range]`.
pub fn random_lp(seed: u64, max_k: usize, max_n: usize, range: i32) -> LinearProgram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=max_k.max(1));
    let n = rng.gen_range(1..=max_n.max(1));
    let mut draw = |len: usize| -> Vec<f64> {
        (0..len)
            .map(|_| f64::from(rng.gen_range(-range..=range)))
            .collect()
    };
    let f = draw(n);
    let a: Vec<Vec<f64>> = (0..k).map(|_| draw(n)).collect();
    let b = draw(k);
    LinearProgram::from_rows(&f, &a, &b).expect("generated dimensions agree")
}

/// Like [`random_lp`] but with `b >= 0`, so `x = 0` is feasible.
pub fn random_feasible_lp(seed: u64, max_k: usize, max_n: usize, range: i32) -> LinearProgram {
    let lp = random_lp(seed, max_k, max_n, range);
    let b: Vec<f64> = lp.b().iter().map(|v| v.abs()).collect();
    LinearProgram::new(lp.f().to_vec(), lp.a().clone(), b).expect("same shape")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TrialOutcome {
    Pass {
        residual: f64,
    },
    Fail {
        reason: String,
    },
    /// The second pivot was unusable for the drawn pair.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Trial {
    pub seed: u64,
    pub dim: usize,
    pub j1: usize,
    pub j2: usize,
    pub pre_added: bool,
    pub outcome: TrialOutcome,
}

/// The starting matrix of a trial: a skew matrix of dimension `dim` with a
/// positive last column (entries in `[0.5, 5]`, the rest in `[-5, 5]`),
/// with its last row added to every other row.
pub fn lemma1_start(rng: &mut ChaCha8Rng, dim: usize) -> Matrix {
    let last = dim - 1;
    let mut m = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i + 1..dim {
            let v = if j == last {
                rng.gen_range(0.5..=5.0)
            } else {
                rng.gen_range(-5.0..=5.0)
            };
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    for i in 0..last {
        m.add_row_multiple_in_place(last, i, 1.0);
    }
    m
}

/// One closure trial: draw a start matrix and a pair `j1 != j2` of non-last
/// columns, pre-add the last row to `j1` when its diagonal is unusable, apply
/// GJ+ at `j1` then `j2`, and test the result with `latent_skew_check`.
pub fn lemma1_trial(seed: u64, dims: RangeInclusive<usize>, tol: f64) -> Lemma1Trial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = rng.gen_range(dims).max(3);
    let last = dim - 1;
    let mut start = lemma1_start(&mut rng, dim);
    let cols: Vec<usize> = (0..last).collect();
    let pair: Vec<usize> = cols.choose_multiple(&mut rng, 2).copied().collect();
    let (j1, j2) = (pair[0], pair[1]);
    let mut trial = Lemma1Trial {
        seed,
        dim,
        j1,
        j2,
        pre_added: false,
        outcome: TrialOutcome::Skipped,
    };
    if start[(j1, j1)].abs() <= crate::DEFAULT_TOL {
        start.add_row_multiple_in_place(last, j1, 1.0);
        trial.pre_added = true;
    }
    let result = gj_plus(&start, j1, crate::DEFAULT_TOL).and_then(|s1| {
        if s1[(j2, j2)].abs() <= crate::DEFAULT_TOL {
            return Ok(None);
        }
        gj_plus(&s1, j2, crate::DEFAULT_TOL).map(Some)
    });
    trial.outcome = match result {
        Ok(None) => TrialOutcome::Skipped,
        Ok(Some(out)) => check(&out, tol),
        Err(e) => TrialOutcome::Fail {
            reason: e.to_string(),
        },
    };
    trial
}

fn check(m: &Matrix, tol: f64) -> TrialOutcome {
    match latent_skew_check(m, tol) {
        Ok(Some(cert)) => match skew_symmetrize(m, &cert, tol) {
            Ok(s) => TrialOutcome::Pass {
                residual: crate::skewsym::skew_residual(&s).unwrap_or(f64::NAN),
            },
            Err(e) => TrialOutcome::Fail {
                reason: e.to_string(),
            },
        },
        Ok(None) => TrialOutcome::Fail {
            reason: SkewError::NotLatentSkew.to_string(),
        },
        Err(e) => TrialOutcome::Fail {
            reason: e.to_string(),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Summary {
    pub base_seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub skipped: usize,
    pub failures: Vec<Lemma1Trial>,
    pub max_residual: f64,
}

/// Runs `trials` trials with seeds `base_seed, base_seed + 1, ...`.
pub fn lemma1_campaign(
    base_seed: u64,
    trials: usize,
    dims: RangeInclusive<usize>,
    tol: f64,
) -> Lemma1Summary {
    let mut summary = Lemma1Summary {
        base_seed,
        trials,
        passed: 0,
        skipped: 0,
        failures: Vec::new(),
        max_residual: 0.0,
    };
    for i in 0..trials as u64 {
        let trial = lemma1_trial(base_seed.wrapping_add(i), dims.clone(), tol);
        match trial.outcome {
            TrialOutcome::Pass { residual } => {
                summary.passed += 1;
                summary.max_residual = summary.max_residual.max(residual);
            }
            TrialOutcome::Skipped => summary.skipped += 1,
            TrialOutcome::Fail { .. } => summary.failures.push(trial),
        }
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_lp_is_deterministic() {
        assert_eq!(random_lp(7, 6, 6, 5), random_lp(7, 6, 6, 5));
        let lp = random_lp(7, 6, 6, 5);
        assert!((1..=6).contains(&lp.k()) && (1..=6).contains(&lp.n()));
        let rows = lp.a().to_rows();
        let entries = lp.f().iter().chain(lp.b()).chain(rows.iter().flatten());
        for v in entries {
            assert!(v.fract() == 0.0 && v.abs() <= 5.0);
        }
    }

    #[test]
    fn feasible_lp_has_nonnegative_rhs() {
        for seed in 0..20 {
            assert!(random_feasible_lp(seed, 6, 6, 5)
                .b()
                .iter()
                .all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn start_is_latent_skew() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = lemma1_start(&mut rng, 6);
        let cert = latent_skew_check(&m, 1e-9).unwrap().unwrap();
        assert!((cert.ratio + 1.0).abs() < 1e-12);
    }

    #[test]
    fn campaign_passes() {
        let summary = lemma1_campaign(42, 100, 3..=10, 1e-6);
        assert!(summary.failures.is_empty(), "{:?}", summary.failures);
        assert_eq!(summary.passed + summary.skipped, 100);
    }

    #[test]
    fn trial_is_reproducible() {
        assert_eq!(lemma1_trial(9, 3..=10, 1e-6), lemma1_trial(9, 3..=10, 1e-6));
    }
}
