//! Acceptance criteria, one PASS/FAIL line each. Runs as a plain binary so
//! the report is always printed by `cargo test`.

use std::collections::BTreeMap;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use bipareto::bench::{generate_instance, preset_families, run_suite_with, GenSpec, Preset, Range, SuiteConfig};
use bipareto::dp::{solve_exact_with, Solution, SolveOptions};
use bipareto::fptas::{check_layer_bounds, coverage_witness, grid_params, solve_fptas_with, Epsilon};
use bipareto::model::Instance;
use bipareto::oracle;
use bipareto::rational::Rational;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SEED: u64 = 20_240_601;

fn eps_pair() -> [Epsilon; 2] {
    [Epsilon::new(3, 10).unwrap(), Epsilon::new(9, 10).unwrap()]
}

fn family(n: (i64, i64), p: (i64, i64), q: (i64, i64), seed: u64, count: usize) -> Vec<Instance> {
    let spec = GenSpec {
        family: String::new(),
        n_range: Range::new(n.0, n.1),
        p_range: Range::new(p.0, p.1),
        q_range: Range::new(q.0, q.1),
        seed,
        count,
    };
    (0..count).map(|i| generate_instance(&spec, i).unwrap()).collect()
}

/// The 500 small instances of criterion 1.
fn small_instances() -> Vec<Instance> {
    family((2, 12), (1, 20), (1, 20), SEED, 500)
}

/// The 100 medium instances added in criterion 2.
fn medium_instances() -> Vec<Instance> {
    family((13, 40), (1, 20), (1, 20), SEED + 1, 100)
}

fn exact(inst: &Instance) -> Solution {
    solve_exact_with(inst, &SolveOptions::default()).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let insts = small_instances();
    for (i, inst) in insts.iter().enumerate() {
        let dp = exact(inst).front;
        let brute = oracle::enumerate(inst, 20).map_err(|e| e.to_string())?;
        ensure(dp == brute, || {
            format!("instance {i}: dp {:?} != oracle {:?}", dp.points(), brute.points())
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{} instances, exact set equality, {:.2?}", insts.len(), elapsed))
}

fn coverage_guarantee() -> Outcome {
    let start = Instant::now();
    let mut insts = small_instances();
    insts.extend(medium_instances());
    let mut checked = 0;
    for (i, inst) in insts.iter().enumerate() {
        let dp = exact(inst).front;
        for eps in eps_pair() {
            let approx = solve_fptas_with(inst, eps, &SolveOptions::default()).unwrap();
            if let Some(w) = coverage_witness(&dp, &approx.front, eps) {
                return Err(format!("instance {i}, eps {eps}: exact point {w} uncovered"));
            }
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!("{checked} (instance, eps) pairs covered within 1+eps, {elapsed:.2?}"))
}

fn layer_bounds() -> Outcome {
    let insts = family((2, 10), (1, 20), (1, 20), SEED + 2, 50);
    let opts = SolveOptions::default().retaining_layers();
    let mut layers_checked = 0;
    for (i, inst) in insts.iter().enumerate() {
        let ex = solve_exact_with(inst, &opts).unwrap().layer_points().unwrap();
        for eps in eps_pair() {
            let ap = solve_fptas_with(inst, eps, &opts).unwrap().layer_points().unwrap();
            check_layer_bounds(&ex, &ap, &grid_params(inst, eps))
                .map_err(|v| format!("instance {i}, eps {eps}: {v}"))?;
            layers_checked += ex.len();
        }
    }
    Ok(format!("{} instances, {layers_checked} layers, both inequalities hold", insts.len()))
}

fn feasibility() -> Outcome {
    let mut insts = small_instances();
    insts.extend(medium_instances());
    let mut points = 0;
    for (i, inst) in insts.iter().enumerate() {
        let mut sols = vec![exact(inst)];
        for eps in eps_pair() {
            sols.push(solve_fptas_with(inst, eps, &SolveOptions::default()).unwrap());
        }
        for sol in &sols {
            ensure(sol.schedules.len() == sol.front.len(), || format!("instance {i}: schedule count"))?;
            for (pt, s) in sol.front.iter().zip(&sol.schedules) {
                let got = s.evaluate(inst);
                ensure(got == *pt, || format!("instance {i}: schedule gives {got}, front says {pt}"))?;
                points += 1;
            }
        }
    }
    Ok(format!("{points} front points re-evaluated exactly"))
}

fn upper_bounds() -> Outcome {
    let insts = small_instances();
    for (i, inst) in insts.iter().enumerate() {
        let front = exact(inst).front;
        let c_star = front.min_cmax().unwrap().cmax;
        let l_star = front.min_lmax().unwrap().lmax;
        let p = inst.total_processing();
        ensure(p + inst.q_max() <= 3 * l_star, || format!("instance {i}: P+q_max > 3 L*"))?;
        ensure(p <= 2 * c_star, || format!("instance {i}: P > 2 C*"))?;
    }
    Ok(format!("{} instances: P+q_max <= 3 L*, P <= 2 C*", insts.len()))
}

fn median_time<F: FnMut()>(runs: usize, mut f: F) -> Duration {
    let mut times: Vec<Duration> = (0..runs)
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed()
        })
        .collect();
    times.sort_unstable();
    times[runs / 2]
}

fn complexity() -> Outcome {
    // layer sizes never exceed the box count
    let mut insts = small_instances();
    insts.extend(medium_instances());
    let mut layers = 0;
    for (i, inst) in insts.iter().enumerate() {
        for eps in eps_pair() {
            let bound = grid_params(inst, eps).box_count();
            let sol = solve_fptas_with(inst, eps, &SolveOptions::default()).unwrap();
            for (l, &size) in sol.layer_sizes.iter().enumerate() {
                ensure(size as u128 <= bound, || {
                    format!("instance {i}, eps {eps}, layer {}: {size} > {bound}", l + 1)
                })?;
                layers += 1;
            }
        }
    }

    // large instance: FPTAS fast, exact DP measurably slower
    let big = family((200, 200), (1, 1000), (1, 1000), SEED + 3, 1).remove(0);
    let eps = Epsilon::new(3, 10).unwrap();
    let grid = grid_params(&big, eps);
    let opts = SolveOptions::default();
    let mut fptas_max_layer = 0;
    let fptas_time = median_time(3, || {
        let sol = solve_fptas_with(&big, eps, &opts).unwrap();
        fptas_max_layer = *sol.layer_sizes.iter().max().unwrap();
    });
    let dp_time = median_time(3, || {
        solve_exact_with(&big, &opts).unwrap();
    });
    ensure(fptas_max_layer as u128 <= grid.box_count(), || "big instance box bound".into())?;
    ensure(fptas_time < Duration::from_secs(10), || format!("fptas took {fptas_time:?}"))?;
    ensure(dp_time > fptas_time, || format!("dp {dp_time:?} not slower than fptas {fptas_time:?}"))?;

    // DP time grows with the processing-time range
    let mut dp_by_range = Vec::new();
    for (k, hi) in [20, 100, 1000].into_iter().enumerate() {
        let insts = family((100, 100), (1, hi), (1, 100), SEED + 10 + k as u64, 3);
        let t = median_time(3, || {
            for inst in &insts {
                solve_exact_with(inst, &opts).unwrap();
            }
        });
        dp_by_range.push(t);
    }
    ensure(dp_by_range.windows(2).all(|w| w[0] < w[1]), || {
        format!("dp times not increasing with p range: {dp_by_range:?}")
    })?;
    Ok(format!(
        "{layers} layers within box bound; n=200: fptas {fptas_time:.2?} vs dp {dp_time:.2?}; dp by p-range 1-20/1-100/1-1000: {:.2?}/{:.2?}/{:.2?}",
        dp_by_range[0], dp_by_range[1], dp_by_range[2]
    ))
}

/// Drops the timing columns (`dp_ms`, `fptas_ms`) from a records CSV.
fn non_timing(csv: &str) -> Vec<String> {
    let header: Vec<&str> = csv.lines().next().unwrap_or("").split(',').collect();
    let timing: Vec<usize> = header
        .iter()
        .enumerate()
        .filter(|(_, h)| h.ends_with("_ms"))
        .map(|(i, _)| i)
        .collect();
    csv.lines()
        .map(|l| {
            l.split(',')
                .enumerate()
                .filter(|(i, _)| !timing.contains(i))
                .map(|(_, f)| f)
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect()
}

fn bench_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let status = Command::new(env!("CARGO_BIN_EXE_bipareto"))
            .args(["bench", "--preset", "desk", "--seed", "1", "--out-dir"])
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || String::from_utf8_lossy(&status.stderr).into_owned())?;
        let mut files = BTreeMap::new();
        for name in ["records.csv", "by_family.csv", "by_p_range.csv", "by_q_range.csv"] {
            let text = fs::read_to_string(out.join(name)).map_err(|e| e.to_string())?;
            files.insert(name, non_timing(&text));
        }
        outputs.push(files);
    }
    for (name, rows) in &outputs[0] {
        let other = &outputs[1][name];
        ensure(rows == other, || {
            let diff = rows.iter().zip(other).position(|(a, b)| a != b);
            format!("{name} differs at row {diff:?}")
        })?;
    }
    let rows = outputs[0]["records.csv"].len() - 1;
    Ok(format!("desk preset twice: identical non-timing columns over {rows} record rows"))
}

fn quality_trend() -> Outcome {
    let families = preset_families(Preset::Desk, 1);
    let [low, high] = eps_pair();
    let mut cfg = SuiteConfig::new(vec![low, high]);
    cfg.repeats = 1;
    cfg.parallel = true;
    let records = run_suite_with(&families, &cfg);
    let as_f64 = |r: &Rational| *r.numer() as f64 / *r.denom() as f64;
    let mut sums = [(0.0f64, 0.0f64); 2];
    let mut count = 0usize;
    for r in &records {
        let o = r.outcome.as_ref().map_err(|e| format!("instance failed: {e}"))?;
        count += 1;
        for (slot, run) in o.runs.iter().enumerate() {
            ensure(run.ratio_c <= run.eps.one_plus() && run.ratio_l <= run.eps.one_plus(), || {
                format!("{} #{}: ratio above 1+eps", r.family, r.index)
            })?;
            sums[slot].0 += as_f64(&run.ratio_c);
            sums[slot].1 += as_f64(&run.ratio_l);
        }
    }
    ensure(count >= 100, || format!("only {count} instances"))?;
    let k = count as f64;
    let (c03, l03) = (sums[0].0 / k, sums[0].1 / k);
    let (c09, l09) = (sums[1].0 / k, sums[1].1 / k);
    ensure(c03 <= c09 && l03 <= l09, || {
        format!("eps=0.3 means ({c03:.6}, {l03:.6}) exceed eps=0.9 means ({c09:.6}, {l09:.6})")
    })?;
    Ok(format!(
        "{count} instances, all ratios <= 1+eps: mean ratio_c {c03:.6} <= {c09:.6}, mean ratio_l {l03:.6} <= {l09:.6}"
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 oracle equivalence", oracle_equivalence),
        ("2 fptas coverage", coverage_guarantee),
        ("3 per-layer error bounds", layer_bounds),
        ("4 feasibility round-trip", feasibility),
        ("5 upper-bound sanity", upper_bounds),
        ("6 complexity behaviour", complexity),
        ("7 benchmark determinism", bench_determinism),
        ("8 quality trend", quality_trend),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS [{name}] {detail} ({:.2?})", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL [{name}] {why}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
