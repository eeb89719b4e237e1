//! The `bipareto` command line.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage, parse or
//! I/O error, 3 state budget exceeded.

pub mod formats;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{
    aggregate, preset_families, run_suite_with, write_aggregate, write_records, GenSpec, GroupBy,
    Preset, Range, SuiteConfig,
};
use crate::dp::{solve_exact_with, SolveOptions, DEFAULT_STATE_BUDGET};
use crate::error::Error;
use crate::fptas::{check_layer_bounds, coverage_witness, grid_params, solve_fptas_with, Epsilon, GridParams};
use crate::model::{Front, Instance, ParetoPoint};
use crate::oracle::{self, DEFAULT_ORACLE_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable overriding the default state budget.
pub const BUDGET_ENV: &str = "BIPARETO_STATE_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "bipareto", version, about = "Makespan / maximum lateness Pareto fronts on two parallel machines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a seeded random instance file.
    Gen(GenArgs),
    /// Compute an exact or approximate Pareto front.
    Solve(SolveArgs),
    /// Cross-check the oracle, the exact DP and the FPTAS on one instance.
    Verify(VerifyArgs),
    /// Run a benchmark preset and write CSV reports.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Job count, `N` or `LO:HI`.
    #[arg(long)]
    n: Range,
    /// Processing time range.
    #[arg(long, default_value = "1:20", conflicts_with_all = ["p_lo", "p_hi"])]
    p: Range,
    #[arg(long, requires = "p_hi")]
    p_lo: Option<i64>,
    #[arg(long, requires = "p_lo")]
    p_hi: Option<i64>,
    /// Delivery time range.
    #[arg(long, default_value = "1:20", conflicts_with_all = ["q_lo", "q_hi"])]
    q: Range,
    #[arg(long, requires = "q_hi")]
    q_lo: Option<i64>,
    #[arg(long, requires = "q_lo")]
    q_hi: Option<i64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instance index within the seeded stream.
    #[arg(long, default_value_t = 0)]
    index: usize,
    /// Output path; the instance goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Dp,
    Fptas,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    algo: Algo,
    /// Accuracy, e.g. `0.3` or `3/10`; required with `--algo fptas`.
    #[arg(long, required_if_eq("algo", "fptas"))]
    epsilon: Option<Epsilon>,
    /// Front CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the realizing schedules to this CSV.
    #[arg(long)]
    schedules: Option<PathBuf>,
    /// Maximum number of live DP states.
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "0.3")]
    epsilon: Epsilon,
    /// Largest instance the brute-force oracle will enumerate.
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    cap: usize,
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// `paper`, `paper-500` or `desk`.
    #[arg(long, default_value = "desk")]
    preset: Preset,
    #[arg(long)]
    out_dir: PathBuf,
    /// Comma-separated accuracies.
    #[arg(long, value_delimiter = ',', default_value = "0.3,0.9")]
    epsilons: Vec<Epsilon>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Timed runs per solver (the median is reported).
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    /// Solve instances in parallel.
    #[arg(long)]
    parallel: bool,
    #[arg(long)]
    budget: Option<usize>,
}

/// A failed command: message for stderr and the process exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        Self::usage(format!("{}: {err}", path.display()))
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::StateBudgetExceeded { .. } => EXIT_BUDGET,
            Error::Internal(_) => EXIT_CHECK_FAILED,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

pub fn main() -> i32 {
    run(std::env::args_os())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn resolve_budget(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{BUDGET_ENV}={v:?} is not a state count"))),
        Err(_) => Ok(DEFAULT_STATE_BUDGET),
    }
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    formats::parse_instance(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::io(path, e))
}

fn cmd_gen(a: GenArgs) -> Result<i32, Failure> {
    let p = match (a.p_lo, a.p_hi) {
        (Some(lo), Some(hi)) => Range::new(lo, hi),
        _ => a.p,
    };
    let q = match (a.q_lo, a.q_hi) {
        (Some(lo), Some(hi)) => Range::new(lo, hi),
        _ => a.q,
    };
    let spec = GenSpec {
        family: String::new(),
        n_range: a.n,
        p_range: p,
        q_range: q,
        seed: a.seed,
        count: a.index + 1,
    };
    let inst = crate::bench::generate_instance(&spec, a.index)?;
    let text = format!(
        "# generated: seed={} index={} n={}:{} p={}:{} q={}:{}\n{}",
        a.seed,
        a.index,
        a.n.lo,
        a.n.hi,
        p.lo,
        p.hi,
        q.lo,
        q.hi,
        formats::serialize_instance(&inst)
    );
    let summary = format!(
        "n={} P={} q_max={}",
        inst.n(),
        inst.total_processing(),
        inst.q_max()
    );
    match a.out {
        Some(path) => {
            write_file(&path, text.as_bytes())?;
            println!("{} ({summary})", path.display());
        }
        None => {
            print!("{text}");
            eprintln!("{summary}");
        }
    }
    Ok(EXIT_OK)
}

fn cmd_solve(a: SolveArgs) -> Result<i32, Failure> {
    let inst = load_instance(&a.input)?;
    let opts = SolveOptions::default().with_budget(resolve_budget(a.budget)?);
    let start = Instant::now();
    let solution = match a.algo {
        Algo::Dp => solve_exact_with(&inst, &opts)?,
        Algo::Fptas => {
            let eps = a
                .epsilon
                .ok_or_else(|| Failure::usage("--epsilon is required with --algo fptas"))?;
            solve_fptas_with(&inst, eps, &opts)?
        }
    };
    let elapsed = start.elapsed();

    let front = formats::front_to_string(&solution.front);
    match &a.out {
        Some(path) => write_file(path, front.as_bytes())?,
        None => print!("{front}"),
    }
    if let Some(path) = &a.schedules {
        let mut buf = Vec::new();
        formats::write_schedules(&mut buf, &solution.schedules)
            .map_err(|e| Failure::io(path, e))?;
        write_file(path, &buf)?;
    }
    eprintln!(
        "front size {} ({} states in largest layer), wall time {:.3} ms",
        solution.front.len(),
        solution.layer_sizes.iter().max().copied().unwrap_or(0),
        elapsed.as_secs_f64() * 1e3
    );
    Ok(EXIT_OK)
}

/// Outcome of one verification check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail(String),
    Skip(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
}

impl Check {
    pub fn passed(&self) -> bool {
        !matches!(self.status, CheckStatus::Fail(_))
    }

    pub fn line(&self) -> String {
        match &self.status {
            CheckStatus::Pass => format!("PASS {}", self.name),
            CheckStatus::Fail(why) => format!("FAIL {}: {why}", self.name),
            CheckStatus::Skip(why) => format!("SKIP {}: {why}", self.name),
        }
    }
}

/// Oracle and DP fronts must be identical.
pub fn check_oracle_equality(oracle: &Front, dp: &Front) -> Check {
    let missing = oracle.iter().find(|p| !dp.points().contains(p));
    let extra = dp.iter().find(|p| !oracle.points().contains(p));
    let status = match (missing, extra) {
        (None, None) => CheckStatus::Pass,
        (Some(p), _) => CheckStatus::Fail(format!("oracle point {p} missing from dp front")),
        (None, Some(p)) => CheckStatus::Fail(format!("dp point {p} not on oracle front")),
    };
    Check {
        name: "oracle-equality",
        status,
    }
}

pub fn check_coverage(exact: &Front, approx: &Front, eps: Epsilon) -> Check {
    let status = match coverage_witness(exact, approx, eps) {
        None => CheckStatus::Pass,
        Some(p) => CheckStatus::Fail(format!(
            "violated C# <= (1+{eps})*C and L# <= (1+{eps})*L: no approximate point covers exact point {p}"
        )),
    };
    Check {
        name: "fptas-coverage",
        status,
    }
}

pub fn check_layers(
    exact_layers: &[Vec<ParetoPoint>],
    approx_layers: &[Vec<ParetoPoint>],
    grid: &GridParams,
) -> Check {
    let status = match check_layer_bounds(exact_layers, approx_layers, grid) {
        Ok(()) => CheckStatus::Pass,
        Err(v) => CheckStatus::Fail(v.to_string()),
    };
    Check {
        name: "layer-bounds",
        status,
    }
}

/// Runs all three checks on one instance.
pub fn verify_instance(
    inst: &Instance,
    eps: Epsilon,
    cap: usize,
    opts: &SolveOptions,
) -> Result<Vec<Check>, Error> {
    let opts = opts.clone().retaining_layers();
    let exact = solve_exact_with(inst, &opts)?;
    let approx = solve_fptas_with(inst, eps, &opts)?;

    let oracle_check = match oracle::enumerate(inst, cap) {
        Ok(front) => check_oracle_equality(&front, &exact.front),
        Err(Error::OracleTooLarge { n, cap }) => Check {
            name: "oracle-equality",
            status: CheckStatus::Skip(format!("n = {n} exceeds oracle cap {cap}")),
        },
        Err(e) => return Err(e),
    };
    let grid = grid_params(inst, eps);
    Ok(vec![
        oracle_check,
        check_coverage(&exact.front, &approx.front, eps),
        check_layers(
            &exact.layer_points().unwrap_or_default(),
            &approx.layer_points().unwrap_or_default(),
            &grid,
        ),
    ])
}

fn cmd_verify(a: VerifyArgs) -> Result<i32, Failure> {
    let inst = load_instance(&a.input)?;
    let opts = SolveOptions::default().with_budget(resolve_budget(a.budget)?);
    let checks = verify_instance(&inst, a.epsilon, a.cap, &opts)?;
    for c in &checks {
        if let CheckStatus::Skip(why) = &c.status {
            eprintln!("notice: {} skipped: {why}", c.name);
        }
        println!("{}", c.line());
    }
    Ok(if checks.iter().all(Check::passed) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

fn cmd_bench(a: BenchArgs) -> Result<i32, Failure> {
    if a.epsilons.is_empty() {
        return Err(Failure::usage("--epsilons needs at least one value"));
    }
    fs::create_dir_all(&a.out_dir).map_err(|e| Failure::io(&a.out_dir, e))?;
    let families = preset_families(a.preset, a.seed);
    let mut cfg = SuiteConfig::new(a.epsilons.clone());
    cfg.repeats = a.repeats.max(1);
    cfg.parallel = a.parallel;
    cfg.options = SolveOptions::default().with_budget(resolve_budget(a.budget)?);

    let records = run_suite_with(&families, &cfg);
    let failed = records.iter().filter(|r| r.outcome.is_err()).count();
    for r in &records {
        if let Err(msg) = &r.outcome {
            eprintln!(
                "warning: family {} seed {} index {}: {msg}",
                r.family, r.seed, r.index
            );
        }
    }

    let path = a.out_dir.join("records.csv");
    let mut buf = Vec::new();
    write_records(&mut buf, &records, &a.epsilons).map_err(|e| Failure::io(&path, e))?;
    write_file(&path, &buf)?;
    for (by, name) in [
        (GroupBy::Family, "by_family.csv"),
        (GroupBy::ProcessingRange, "by_p_range.csv"),
        (GroupBy::DeliveryRange, "by_q_range.csv"),
    ] {
        let path = a.out_dir.join(name);
        let rows = aggregate(&records, &a.epsilons, by);
        let mut buf = Vec::new();
        write_aggregate(&mut buf, &rows, by).map_err(|e| Failure::io(&path, e))?;
        write_file(&path, &buf)?;
    }
    eprintln!(
        "{} instances, {} failed; reports in {}",
        records.len(),
        failed,
        a.out_dir.display()
    );
    if !records.is_empty() && failed == records.len() {
        return Ok(EXIT_CHECK_FAILED);
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::pareto_filter;

    #[test]
    fn verify_worked_instance_passes() {
        let inst = Instance::normalize(&[(2, 5), (3, 4), (4, 1)]).unwrap();
        let eps = Epsilon::new(3, 10).unwrap();
        let checks = verify_instance(&inst, eps, 20, &SolveOptions::default()).unwrap();
        assert_eq!(checks.len(), 3);
        assert!(checks.iter().all(|c| c.status == CheckStatus::Pass), "{checks:?}");
    }

    #[test]
    fn oracle_stage_skipped_over_cap() {
        let raw: Vec<(i64, i64)> = (1..=25).map(|i| (i % 7 + 1, i % 5 + 1)).collect();
        let inst = Instance::normalize(&raw).unwrap();
        let eps = Epsilon::new(3, 10).unwrap();
        let checks = verify_instance(&inst, eps, 20, &SolveOptions::default()).unwrap();
        assert!(matches!(checks[0].status, CheckStatus::Skip(_)));
        assert_eq!(checks[1].status, CheckStatus::Pass);
        assert_eq!(checks[2].status, CheckStatus::Pass);
    }

    #[test]
    fn corrupted_fronts_fail_with_witness() {
        let exact = pareto_filter([(5, 9).into(), (6, 7).into()]);
        let bad = pareto_filter([(5, 9).into(), (6, 10).into()]);
        let c = check_oracle_equality(&exact, &bad);
        assert!(!c.passed());
        assert!(c.line().contains("(6, 7)"), "{}", c.line());

        let eps = Epsilon::new(3, 10).unwrap();
        let far = pareto_filter([(9, 12).into()]);
        let c = check_coverage(&exact, &far, eps);
        assert!(c.line().starts_with("FAIL fptas-coverage"));
        assert!(c.line().contains("(5, 9)"));
    }

    #[test]
    fn budget_resolution_prefers_flag() {
        assert_eq!(resolve_budget(Some(12)).unwrap(), 12);
    }
}
