//! `skewlp`: solve and inspect small linear programs `max fᵀx, Ax <= b, x >= 0`
//! with the principal-pivoting engine.

mod commands;
mod problem;

use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use skewlp::{
    InitPolicy, LinearProgram, MinorRule, Mode, SolveOptions, DEFAULT_RATIO_TOL, DEFAULT_TOL,
};

use commands::exit;

#[derive(Parser, Debug)]
#[command(name = "skewlp", version, about = "Principal-pivoting LP solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a problem file and print it in normalized form.
    Check {
        /// Problem file, `-` for stdin.
        file: PathBuf,
    },
    /// Solve a problem file and print a one-line summary.
    Solve {
        #[command(flatten)]
        run: RunArgs,
        /// Also print the JSON trace before the summary.
        #[arg(long)]
        trace: bool,
    },
    /// Print the pivot trace as JSON lines.
    Trace {
        #[command(flatten)]
        run: RunArgs,
        /// Include the full tableau in each record.
        #[arg(long)]
        tableaus: bool,
    },
    /// Check the ratio invariant at every state of a solve.
    #[command(name = "verify-claim4")]
    VerifyClaim4 {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Randomized check that one major-pivot step keeps latent skew symmetry.
    #[command(name = "fuzz-lemma1")]
    FuzzLemma1 {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        /// Inclusive dimension range, `lo..hi`.
        #[arg(long, default_value = "3..10", value_parser = parse_dims)]
        dims: RangeInclusive<usize>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Time full against compact mode on random feasible programs.
    Bench {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Instances per size.
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value = "2..8", value_parser = parse_dims)]
        dims: RangeInclusive<usize>,
        #[command(flatten)]
        engine: EngineArgs,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Problem file, `-` for stdin.
    file: PathBuf,
    #[command(flatten)]
    engine: EngineArgs,
    /// Decimal places in printed numbers.
    #[arg(long, default_value_t = 2)]
    precision: u32,
}

#[derive(Args, Debug)]
struct EngineArgs {
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_RATIO_TOL)]
    ratio_tol: f64,
    /// Defaults to 50 (k + n).
    #[arg(long)]
    max_iters: Option<usize>,
    /// Pivot on the reduced (N+1)x(N+1) form.
    #[arg(long)]
    compact: bool,
    #[arg(long, value_enum, default_value_t = InitArg::AllRows)]
    init: InitArg,
    #[arg(long, value_enum, default_value_t = RuleArg::LeastNegative)]
    minor_rule: RuleArg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum InitArg {
    AllRows,
    SingleRow,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum RuleArg {
    LeastNegative,
    MostNegative,
    FirstIndex,
}

impl EngineArgs {
    fn options(&self) -> Result<SolveOptions, String> {
        for (name, v) in [("tol", self.tol), ("ratio-tol", self.ratio_tol)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("--{name} must be a positive number, got {v}"));
            }
        }
        Ok(SolveOptions {
            tol: self.tol,
            ratio_tol: self.ratio_tol,
            max_iters: self.max_iters,
            mode: if self.compact {
                Mode::Compact
            } else {
                Mode::Full
            },
            minor_rule: match self.minor_rule {
                RuleArg::LeastNegative => MinorRule::LeastNegative,
                RuleArg::MostNegative => MinorRule::MostNegative,
                RuleArg::FirstIndex => MinorRule::FirstIndex,
            },
            init: match self.init {
                InitArg::AllRows => InitPolicy::AllRows,
                InitArg::SingleRow => InitPolicy::SingleRow,
            },
            trace: false,
        })
    }
}

fn parse_dims(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected lo..hi, got '{s}'"))?;
    let lo: usize = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad lower bound '{lo}'"))?;
    let hi: usize = hi
        .trim()
        .trim_start_matches('=')
        .parse()
        .map_err(|_| format!("bad upper bound '{hi}'"))?;
    if lo == 0 || hi < lo {
        return Err(format!("need 1 <= lo <= hi, got {lo}..{hi}"));
    }
    Ok(lo..=hi)
}

fn load(path: &PathBuf) -> Result<LinearProgram, String> {
    let text = if path.as_os_str() == "-" {
        io::read_to_string(io::stdin()).map_err(|e| format!("stdin: {e}"))?
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?
    };
    problem::parse_problem(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn prepare(run: &RunArgs) -> Result<(LinearProgram, SolveOptions), String> {
    Ok((load(&run.file)?, run.engine.options()?))
}

fn dispatch(cli: Cli, out: &mut impl Write) -> io::Result<u8> {
    let input_error = |msg: String| {
        eprintln!("error: {msg}");
        Ok(exit::INPUT)
    };
    match cli.command {
        Command::Check { file } => match load(&file) {
            Ok(lp) => {
                write!(out, "{}", problem::render(&lp))?;
                Ok(exit::OK)
            }
            Err(e) => input_error(e),
        },
        Command::Solve { run, trace } => match prepare(&run) {
            Ok((lp, opts)) => {
                let opts = SolveOptions { trace, ..opts };
                commands::cmd_solve(out, &lp, &opts, run.precision)
            }
            Err(e) => input_error(e),
        },
        Command::Trace { run, tableaus } => match prepare(&run) {
            Ok((lp, opts)) => commands::cmd_trace(out, &lp, &opts, run.precision, tableaus),
            Err(e) => input_error(e),
        },
        Command::VerifyClaim4 { run } => match prepare(&run) {
            Ok((lp, opts)) => commands::cmd_verify_claim4(out, &lp, &opts, run.precision),
            Err(e) => input_error(e),
        },
        Command::FuzzLemma1 {
            seed,
            trials,
            dims,
            tol,
        } => {
            if !(tol.is_finite() && tol > 0.0) {
                return input_error(format!("--tol must be a positive number, got {tol}"));
            }
            if *dims.start() < 3 {
                return input_error("--dims must start at 3 or more".to_string());
            }
            commands::cmd_fuzz_lemma1(out, seed, trials, dims, tol)
        }
        Command::Bench {
            seed,
            trials,
            dims,
            engine,
        } => match engine.options() {
            Ok(opts) => commands::cmd_bench(out, seed, trials, dims, &opts),
            Err(e) => input_error(e),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::INPUT
            } else {
                exit::OK
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = match dispatch(cli, &mut out).and_then(|c| out.flush().map(|_| c)) {
        Ok(code) => code,
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => exit::OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit::INPUT
        }
    };
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_parse() {
        assert_eq!(parse_dims("3..10").unwrap(), 3..=10);
        assert_eq!(parse_dims("4..=4").unwrap(), 4..=4);
        assert_eq!(parse_dims("2..5").unwrap(), 2..=5);
        assert!(parse_dims("0..5").is_err());
        assert!(parse_dims("6..5").is_err());
        assert!(parse_dims("5").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
