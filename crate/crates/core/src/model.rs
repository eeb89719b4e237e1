//! Problem data, objective evaluation and Pareto dominance.
//!
//! Jobs run on two identical machines. On each machine jobs are processed
//! back to back from time 0 in non-increasing order of delivery time, which
//! is optimal for maximum lateness on a single machine. The lateness of a job
//! is its completion time plus its delivery time.

use std::fmt;

use crate::error::{Error, Result};

/// A single job: processing time `p` and delivery time `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Job {
    /// 1-based position of the job in the caller's input.
    pub id: usize,
    pub p: i64,
    pub q: i64,
}

/// A normalized instance: jobs sorted by non-increasing `q`, ties kept in
/// input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    jobs: Vec<Job>,
    prefix: Vec<i64>,
    q_max: i64,
}

impl Instance {
    /// Validates raw `(p, q)` pairs and sorts them into delivery-time order.
    pub fn normalize(raw: &[(i64, i64)]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyInstance);
        }
        let mut jobs = Vec::with_capacity(raw.len());
        for (index, &(p, q)) in raw.iter().enumerate() {
            if p < 1 {
                return Err(Error::InvalidJob {
                    index: index + 1,
                    reason: format!("processing time must be >= 1, got {p}"),
                });
            }
            if q < 0 {
                return Err(Error::InvalidJob {
                    index: index + 1,
                    reason: format!("delivery time must be >= 0, got {q}"),
                });
            }
            jobs.push(Job { id: index + 1, p, q });
        }
        // stable sort: equal delivery times keep ascending ids
        jobs.sort_by_key(|j| std::cmp::Reverse(j.q));

        let mut prefix = Vec::with_capacity(jobs.len() + 1);
        prefix.push(0i64);
        let mut total = 0i64;
        for job in &jobs {
            total = total
                .checked_add(job.p)
                .ok_or_else(|| Error::Overflow("sum of processing times".into()))?;
            prefix.push(total);
        }
        let q_max = jobs[0].q;
        total
            .checked_add(q_max)
            .ok_or_else(|| Error::Overflow("P + q_max".into()))?;

        Ok(Self {
            jobs,
            prefix,
            q_max,
        })
    }

    /// Jobs in sorted order; `jobs()[0]` is job 1 of the recurrence.
    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn n(&self) -> usize {
        self.jobs.len()
    }

    /// Sum of all processing times.
    pub fn total_processing(&self) -> i64 {
        self.prefix[self.jobs.len()]
    }

    pub fn q_max(&self) -> i64 {
        self.q_max
    }

    /// `prefix()[i]` is the processing time of the first `i` sorted jobs.
    pub fn prefix(&self) -> &[i64] {
        &self.prefix
    }

    /// The raw `(p, q)` pairs in sorted order.
    pub fn pairs(&self) -> Vec<(i64, i64)> {
        self.jobs.iter().map(|j| (j.p, j.q)).collect()
    }
}

/// One of the two machines, reported externally as 1 and 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Machine {
    First,
    Second,
}

impl Machine {
    /// External 1-based number.
    pub fn number(self) -> u8 {
        match self {
            Machine::First => 1,
            Machine::Second => 2,
        }
    }

    /// Decodes a DP machine flag. Flag 1 is the machine that receives job 1.
    pub fn from_flag(flag: u8) -> Self {
        if flag == 1 {
            Machine::First
        } else {
            Machine::Second
        }
    }

    fn slot(self) -> usize {
        match self {
            Machine::First => 0,
            Machine::Second => 1,
        }
    }
}

impl fmt::Display for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Objective pair `(C_max, L_max)`, both minimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParetoPoint {
    pub cmax: i64,
    pub lmax: i64,
}

impl ParetoPoint {
    pub const fn new(cmax: i64, lmax: i64) -> Self {
        Self { cmax, lmax }
    }

    pub fn dominates(&self, other: &ParetoPoint) -> bool {
        dominates(*self, *other)
    }
}

impl fmt::Display for ParetoPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.cmax, self.lmax)
    }
}

impl From<(i64, i64)> for ParetoPoint {
    fn from((cmax, lmax): (i64, i64)) -> Self {
        Self { cmax, lmax }
    }
}

/// `a` dominates `b` when it is no worse in both objectives and strictly
/// better in one.
pub fn dominates(a: ParetoPoint, b: ParetoPoint) -> bool {
    a.cmax <= b.cmax && a.lmax <= b.lmax && (a.cmax < b.cmax || a.lmax < b.lmax)
}

/// A set of mutually non-dominated points sorted by increasing makespan
/// (and therefore strictly decreasing lateness).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Front {
    points: Vec<ParetoPoint>,
}

impl Front {
    pub fn points(&self) -> &[ParetoPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ParetoPoint> {
        self.points.iter()
    }

    /// Point with the smallest makespan.
    pub fn min_cmax(&self) -> Option<ParetoPoint> {
        self.points.first().copied()
    }

    /// Point with the smallest lateness.
    pub fn min_lmax(&self) -> Option<ParetoPoint> {
        self.points.last().copied()
    }

    /// Builds a front from points that are already non-dominated and sorted.
    /// Fails if the ordering invariant does not hold.
    pub fn from_sorted(points: Vec<ParetoPoint>) -> Result<Self> {
        for w in points.windows(2) {
            if !(w[0].cmax < w[1].cmax && w[0].lmax > w[1].lmax) {
                return Err(Error::InvalidArgument(format!(
                    "front points {} and {} are not strictly ordered",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { points })
    }
}

impl<'a> IntoIterator for &'a Front {
    type Item = &'a ParetoPoint;
    type IntoIter = std::slice::Iter<'a, ParetoPoint>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// Keeps the non-dominated points, deduplicated and sorted by makespan.
pub fn pareto_filter<I>(points: I) -> Front
where
    I: IntoIterator<Item = ParetoPoint>,
{
    let mut all: Vec<ParetoPoint> = points.into_iter().collect();
    all.sort_unstable();
    let mut kept: Vec<ParetoPoint> = Vec::new();
    for p in all {
        // Sorted by (C, L): p survives iff its L beats every L seen so far.
        match kept.last() {
            Some(last) if p.lmax >= last.lmax => {}
            _ => kept.push(p),
        }
    }
    Front { points: kept }
}

/// Objective values of an assignment given in sorted job order.
pub fn evaluate_schedule(inst: &Instance, assignment: &[Machine]) -> ParetoPoint {
    assert_eq!(
        assignment.len(),
        inst.n(),
        "assignment must cover every job"
    );
    evaluate_with(inst, |i| assignment[i])
}

pub(crate) fn evaluate_with<F>(inst: &Instance, machine_of: F) -> ParetoPoint
where
    F: Fn(usize) -> Machine,
{
    let mut loads = [0i64; 2];
    let mut lmax = i64::MIN;
    for (i, job) in inst.jobs().iter().enumerate() {
        let slot = machine_of(i).slot();
        loads[slot] += job.p;
        lmax = lmax.max(loads[slot] + job.q);
    }
    ParetoPoint::new(loads[0].max(loads[1]), lmax)
}

/// Which machine a job was sent to, relative to the state it extends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Choice {
    /// Job 1, fixed on machine 1.
    Initial,
    /// Appended to the currently most loaded machine.
    MostLoaded,
    /// Appended to the other machine.
    Other,
}

/// Index of a retained state in a solver's state arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u32);

/// A partial schedule of the first `i` jobs summarized by the flag of the
/// most loaded machine, the current maximum lateness and the load of the
/// most loaded machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpState {
    /// Most loaded machine, `0` or `1`.
    pub k: u8,
    pub lmax: i64,
    pub cmax: i64,
    pub parent: Option<StateId>,
    pub choice: Choice,
}

impl DpState {
    pub fn point(&self) -> ParetoPoint {
        ParetoPoint::new(self.cmax, self.lmax)
    }
}

/// A complete assignment realizing one front point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    /// `assignment[id - 1]` is the machine of the job with original id `id`.
    pub assignment: Vec<Machine>,
    /// Original job ids per machine (`[machine 1, machine 2]`) in processing
    /// order.
    pub machine_sequences: [Vec<usize>; 2],
    /// The objective values this schedule evaluates to.
    pub point: ParetoPoint,
}

impl Schedule {
    /// Builds a schedule from machines given in sorted job order.
    pub fn from_sorted_assignment(inst: &Instance, sorted: &[Machine]) -> Self {
        let point = evaluate_schedule(inst, sorted);
        let mut assignment = vec![Machine::First; inst.n()];
        let mut machine_sequences = [Vec::new(), Vec::new()];
        for (job, &m) in inst.jobs().iter().zip(sorted) {
            assignment[job.id - 1] = m;
            machine_sequences[m.slot()].push(job.id);
        }
        Self {
            assignment,
            machine_sequences,
            point,
        }
    }

    /// Machines in the instance's sorted job order.
    pub fn sorted_assignment(&self, inst: &Instance) -> Vec<Machine> {
        inst.jobs()
            .iter()
            .map(|j| self.assignment[j.id - 1])
            .collect()
    }

    /// Re-evaluates the assignment against `inst`.
    pub fn evaluate(&self, inst: &Instance) -> ParetoPoint {
        evaluate_with(inst, |i| self.assignment[inst.jobs()[i].id - 1])
    }
}
