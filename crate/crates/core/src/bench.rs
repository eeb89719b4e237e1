//! Seeded instance families, FPTAS quality ratios and timing reports.
//!
//! Instances are drawn from a counter-based SplitMix64 stream keyed by
//! `(seed, index)`, so any single instance can be regenerated without
//! replaying the ones before it, in any language that implements the same
//! few lines of 64-bit arithmetic:
//!
//! ```text
//! mix(z)  = z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//!           z ^= z >> 27; z *= 0x94D049BB133111EB; z ^ (z >> 31)
//! key     = mix(seed ^ mix((index + 1) * 0x9E3779B97F4A7C15))
//! word(c) = mix(key + c * 0x9E3779B97F4A7C15)        for c = 1, 2, ...
//! ```
//!
//! Bounded draws use rejection sampling on `word % span` (all arithmetic
//! wrapping, modulo 2^64).

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::dp::{solve_exact_with, Solution, SolveOptions};
use crate::error::{Error, Result};
use crate::fptas::{coverage_check, solve_fptas_with, Epsilon};
use crate::model::{Front, Instance};
use crate::rational::{to_decimal, to_fraction, Rational};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic word stream for one `(seed, index)` pair.
#[derive(Debug, Clone)]
pub struct InstanceStream {
    key: u64,
    counter: u64,
}

impl InstanceStream {
    pub fn new(seed: u64, index: u64) -> Self {
        let key = mix64(seed ^ mix64(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)));
        Self { key, counter: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN_GAMMA)))
    }

    /// Uniform draw from the inclusive range.
    pub fn uniform(&mut self, range: Range) -> i64 {
        let span = (range.hi as i128 - range.lo as i128 + 1) as u128;
        if span > u64::MAX as u128 {
            return self.next_u64() as i64;
        }
        let span = span as u64;
        let threshold = span.wrapping_neg() % span;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return (range.lo as i128 + (x % span) as i128) as i64;
            }
        }
    }
}

/// Inclusive integer interval, written `lo:hi` on the command line and
/// `lo-hi` in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Range {
    pub lo: i64,
    pub hi: i64,
}

impl Range {
    pub const fn new(lo: i64, hi: i64) -> Self {
        Self { lo, hi }
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

impl FromStr for Range {
    type Err = Error;

    /// `7` or `lo:hi`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("invalid range {s:?}, expected LO:HI"));
        let (lo, hi) = match s.split_once(':') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s.trim(), s.trim()),
        };
        let lo: i64 = lo.parse().map_err(|_| bad())?;
        let hi: i64 = hi.parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        Ok(Range { lo, hi })
    }
}

/// One cell of a benchmark: `count` instances sharing ranges and seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    /// Label used to group results by job count.
    pub family: String,
    pub n_range: Range,
    pub p_range: Range,
    pub q_range: Range,
    pub seed: u64,
    pub count: usize,
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, r: Range| {
            if r.lo < 1 || r.lo > r.hi {
                Err(Error::InvalidArgument(format!(
                    "{name} range {r} must satisfy 1 <= lo <= hi"
                )))
            } else {
                Ok(())
            }
        };
        check("n", self.n_range)?;
        check("p", self.p_range)?;
        check("q", self.q_range)?;
        if self.n_range.hi > 1_000_000 {
            return Err(Error::InvalidArgument(format!(
                "n range {} is too large",
                self.n_range
            )));
        }
        Ok(())
    }
}

/// Draws instance `index` of `spec`: first `n`, then `(p, q)` per job.
pub fn generate_instance(spec: &GenSpec, index: usize) -> Result<Instance> {
    spec.validate()?;
    let mut stream = InstanceStream::new(spec.seed, index as u64);
    let n = stream.uniform(spec.n_range) as usize;
    let raw: Vec<(i64, i64)> = (0..n)
        .map(|_| {
            let p = stream.uniform(spec.p_range);
            let q = stream.uniform(spec.q_range);
            (p, q)
        })
        .collect();
    Instance::normalize(&raw)
}

/// Best approximate over best exact value, per objective.
pub fn quality_metrics(exact: &Front, approx: &Front) -> Result<(Rational, Rational)> {
    let (Some(ec), Some(el)) = (exact.min_cmax(), exact.min_lmax()) else {
        return Err(Error::EmptyFront);
    };
    let (Some(ac), Some(al)) = (approx.min_cmax(), approx.min_lmax()) else {
        return Err(Error::EmptyFront);
    };
    Ok((
        Rational::new(ac.cmax as i128, ec.cmax as i128),
        Rational::new(al.lmax as i128, el.lmax as i128),
    ))
}

/// Benchmark presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Five job-count families crossed with three `p` and three `q` ranges
    /// up to 1000, 15 instances per cell (135 per family).
    Paper,
    /// As `Paper`, with the largest range capped at 500.
    Paper500,
    /// Three smaller families, 5 instances per cell (135 in total).
    Desk,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Preset::Paper),
            "paper-500" => Ok(Preset::Paper500),
            "desk" => Ok(Preset::Desk),
            other => Err(Error::InvalidArgument(format!("unknown preset {other:?}"))),
        }
    }
}

/// Derives independent cell seeds from one suite seed.
pub fn cell_seed(seed: u64, ordinal: u64) -> u64 {
    mix64(seed.wrapping_add(ordinal.wrapping_mul(GOLDEN_GAMMA)))
}

pub fn preset_families(preset: Preset, seed: u64) -> Vec<GenSpec> {
    let (jobs, top, per_cell): (&[(i64, i64)], i64, usize) = match preset {
        Preset::Paper => (&[(5, 25), (26, 50), (51, 75), (76, 100), (100, 200)], 1000, 15),
        Preset::Paper500 => (&[(5, 25), (26, 50), (51, 75), (76, 100), (100, 200)], 500, 15),
        Preset::Desk => (&[(5, 25), (26, 50), (51, 75)], 1000, 5),
    };
    let ranges = [Range::new(1, 20), Range::new(1, 100), Range::new(1, top)];
    let mut specs = Vec::new();
    for &(lo, hi) in jobs {
        for p_range in ranges {
            for q_range in ranges {
                let ordinal = specs.len() as u64;
                specs.push(GenSpec {
                    family: format!("{lo}-{hi}"),
                    n_range: Range::new(lo, hi),
                    p_range,
                    q_range,
                    seed: cell_seed(seed, ordinal),
                    count: per_cell,
                });
            }
        }
    }
    specs
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub epsilons: Vec<Epsilon>,
    /// Timed runs per solver; the median is reported.
    pub repeats: usize,
    pub options: SolveOptions,
    /// Solve instances on the rayon pool.
    pub parallel: bool,
}

impl SuiteConfig {
    pub fn new(epsilons: Vec<Epsilon>) -> Self {
        Self {
            epsilons,
            repeats: 3,
            options: SolveOptions::default(),
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsRun {
    pub eps: Epsilon,
    pub fptas_front: usize,
    pub fptas_time: Duration,
    pub ratio_c: Rational,
    pub ratio_l: Rational,
    /// Every exact point is covered within `1 + ε`.
    pub covered: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub dp_front: usize,
    pub dp_time: Duration,
    pub runs: Vec<EpsRun>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub family: String,
    pub seed: u64,
    pub index: usize,
    pub n: usize,
    pub p_range: Range,
    pub q_range: Range,
    pub outcome: std::result::Result<RunOutcome, String>,
}

fn timed<F>(repeats: usize, mut solve: F) -> Result<(Solution, Duration)>
where
    F: FnMut() -> Result<Solution>,
{
    let mut times = Vec::with_capacity(repeats.max(1));
    let mut first = None;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        let sol = solve()?;
        times.push(start.elapsed());
        first.get_or_insert(sol);
    }
    times.sort_unstable();
    let median = times[times.len() / 2];
    Ok((first.expect("at least one run"), median))
}

fn run_one(inst: &Instance, cfg: &SuiteConfig) -> Result<RunOutcome> {
    let (exact, dp_time) = timed(cfg.repeats, || solve_exact_with(inst, &cfg.options))?;
    let mut runs = Vec::with_capacity(cfg.epsilons.len());
    for &eps in &cfg.epsilons {
        let (approx, fptas_time) =
            timed(cfg.repeats, || solve_fptas_with(inst, eps, &cfg.options))?;
        let (ratio_c, ratio_l) = quality_metrics(&exact.front, &approx.front)?;
        runs.push(EpsRun {
            eps,
            fptas_front: approx.front.len(),
            fptas_time,
            ratio_c,
            ratio_l,
            covered: coverage_check(&exact.front, &approx.front, eps),
        });
    }
    Ok(RunOutcome {
        dp_front: exact.front.len(),
        dp_time,
        runs,
    })
}

/// Solves every instance of every cell; failures are recorded, not raised.
pub fn run_suite(families: &[GenSpec], eps_list: &[Epsilon], repeats: usize) -> Vec<RunRecord> {
    let mut cfg = SuiteConfig::new(eps_list.to_vec());
    cfg.repeats = repeats;
    run_suite_with(families, &cfg)
}

pub fn run_suite_with(families: &[GenSpec], cfg: &SuiteConfig) -> Vec<RunRecord> {
    let jobs: Vec<(&GenSpec, usize)> = families
        .iter()
        .flat_map(|spec| (0..spec.count).map(move |i| (spec, i)))
        .collect();
    let run = |&(spec, index): &(&GenSpec, usize)| {
        let (n, outcome) = match generate_instance(spec, index) {
            Ok(inst) => (inst.n(), run_one(&inst, cfg).map_err(|e| e.to_string())),
            Err(e) => (0, Err(e.to_string())),
        };
        RunRecord {
            family: spec.family.clone(),
            seed: spec.seed,
            index,
            n,
            p_range: spec.p_range,
            q_range: spec.q_range,
            outcome,
        }
    };
    if cfg.parallel {
        jobs.par_iter().map(run).collect()
    } else {
        jobs.iter().map(run).collect()
    }
}

fn millis(d: Duration) -> String {
    format!("{:.3}", d.as_secs_f64() * 1e3)
}

/// Per-record CSV header. Timing columns are `dp_ms` and `fptas_ms`.
pub const RECORD_HEADER: [&str; 19] = [
    "family",
    "seed",
    "index",
    "n",
    "p_lo",
    "p_hi",
    "q_lo",
    "q_hi",
    "dp_front",
    "dp_ms",
    "eps",
    "fptas_front",
    "fptas_ms",
    "ratio_c",
    "ratio_l",
    "ratio_c_exact",
    "ratio_l_exact",
    "covered",
    "status",
];

/// One row per `(instance, ε)` pair; a failed instance yields one row per
/// configured `ε` with empty result columns.
pub fn write_records<W: std::io::Write>(
    out: W,
    records: &[RunRecord],
    epsilons: &[Epsilon],
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RECORD_HEADER)?;
    for r in records {
        let prefix = [
            r.family.clone(),
            r.seed.to_string(),
            r.index.to_string(),
            r.n.to_string(),
            r.p_range.lo.to_string(),
            r.p_range.hi.to_string(),
            r.q_range.lo.to_string(),
            r.q_range.hi.to_string(),
        ];
        match &r.outcome {
            Ok(o) => {
                for run in &o.runs {
                    let mut row = prefix.to_vec();
                    row.extend([
                        o.dp_front.to_string(),
                        millis(o.dp_time),
                        run.eps.to_decimal_string(),
                        run.fptas_front.to_string(),
                        millis(run.fptas_time),
                        to_decimal(&run.ratio_c, 6),
                        to_decimal(&run.ratio_l, 6),
                        to_fraction(&run.ratio_c),
                        to_fraction(&run.ratio_l),
                        run.covered.to_string(),
                        "ok".to_string(),
                    ]);
                    w.write_record(&row)?;
                }
            }
            Err(msg) => {
                for eps in epsilons {
                    let mut row = prefix.to_vec();
                    row.extend([String::new(), String::new(), eps.to_decimal_string()]);
                    row.extend(std::iter::repeat(String::new()).take(7));
                    row.push(format!("error: {msg}"));
                    w.write_record(&row)?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupBy {
    Family,
    ProcessingRange,
    DeliveryRange,
}

impl GroupBy {
    fn label(self) -> &'static str {
        match self {
            GroupBy::Family => "jobs",
            GroupBy::ProcessingRange => "p_range",
            GroupBy::DeliveryRange => "q_range",
        }
    }

    fn key(self, r: &RunRecord) -> String {
        match self {
            GroupBy::Family => r.family.clone(),
            GroupBy::ProcessingRange => r.p_range.to_string(),
            GroupBy::DeliveryRange => r.q_range.to_string(),
        }
    }
}

/// Averages over the successful records of one group and one `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub group: String,
    pub eps: Epsilon,
    pub instances: usize,
    pub dp_front_mean: f64,
    pub fptas_front_mean: f64,
    pub ratio_c_mean: f64,
    pub ratio_l_mean: f64,
    pub dp_ms_mean: f64,
    pub fptas_ms_mean: f64,
}

fn ratio_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Groups in first-seen order, then `ε` in configuration order.
pub fn aggregate(records: &[RunRecord], epsilons: &[Epsilon], by: GroupBy) -> Vec<AggregateRow> {
    let mut groups: Vec<String> = Vec::new();
    for r in records {
        let key = by.key(r);
        if !groups.contains(&key) {
            groups.push(key);
        }
    }
    let mut rows = Vec::new();
    for group in groups {
        for &eps in epsilons {
            let mut acc = AggregateRow {
                group: group.clone(),
                eps,
                instances: 0,
                dp_front_mean: 0.0,
                fptas_front_mean: 0.0,
                ratio_c_mean: 0.0,
                ratio_l_mean: 0.0,
                dp_ms_mean: 0.0,
                fptas_ms_mean: 0.0,
            };
            for r in records.iter().filter(|r| by.key(r) == group) {
                let Ok(o) = &r.outcome else { continue };
                let Some(run) = o.runs.iter().find(|run| run.eps == eps) else {
                    continue;
                };
                acc.instances += 1;
                acc.dp_front_mean += o.dp_front as f64;
                acc.fptas_front_mean += run.fptas_front as f64;
                acc.ratio_c_mean += ratio_f64(&run.ratio_c);
                acc.ratio_l_mean += ratio_f64(&run.ratio_l);
                acc.dp_ms_mean += o.dp_time.as_secs_f64() * 1e3;
                acc.fptas_ms_mean += run.fptas_time.as_secs_f64() * 1e3;
            }
            if acc.instances > 0 {
                let k = acc.instances as f64;
                acc.dp_front_mean /= k;
                acc.fptas_front_mean /= k;
                acc.ratio_c_mean /= k;
                acc.ratio_l_mean /= k;
                acc.dp_ms_mean /= k;
                acc.fptas_ms_mean /= k;
            }
            rows.push(acc);
        }
    }
    rows
}

/// Aggregate CSV; timing columns are `dp_ms` and `fptas_ms`.
pub fn write_aggregate<W: std::io::Write>(
    out: W,
    rows: &[AggregateRow],
    by: GroupBy,
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        by.label(),
        "eps",
        "instances",
        "dp_front",
        "fptas_front",
        "ratio_c",
        "ratio_l",
        "dp_ms",
        "fptas_ms",
    ])?;
    for r in rows {
        w.write_record([
            r.group.clone(),
            r.eps.to_decimal_string(),
            r.instances.to_string(),
            format!("{:.6}", r.dp_front_mean),
            format!("{:.6}", r.fptas_front_mean),
            format!("{:.6}", r.ratio_c_mean),
            format!("{:.6}", r.ratio_l_mean),
            format!("{:.3}", r.dp_ms_mean),
            format!("{:.3}", r.fptas_ms_mean),
        ])?;
    }
    w.flush()?;
    Ok(())
}
