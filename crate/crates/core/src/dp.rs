//! Exact layered dynamic program.
//!
//! Layer `i` holds one state per reachable `(k, C)` pair after the first `i`
//! sorted jobs, each with the smallest maximum lateness seen for that pair.
//! Retained states are appended to an arena of `(parent, choice)` links so any
//! final state can be turned back into a full schedule.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{
    evaluate_schedule, pareto_filter, Choice, DpState, Front, Instance, Machine, ParetoPoint,
    Schedule, StateId,
};

/// Default ceiling on the number of live states (arena plus candidates).
pub const DEFAULT_STATE_BUDGET: usize = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOptions {
    pub state_budget: usize,
    /// Keep the objective values of every layer in [`Solution::layers`].
    pub retain_layers: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            state_budget: DEFAULT_STATE_BUDGET,
            retain_layers: false,
        }
    }
}

impl SolveOptions {
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.state_budget = budget;
        self
    }

    pub fn retaining_layers(mut self) -> Self {
        self.retain_layers = true;
        self
    }
}

/// States after job `job` (1-based) has been scheduled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    pub job: usize,
    /// Arena id of `states[0]`; ids of a layer are consecutive.
    pub first_id: StateId,
    pub states: Vec<DpState>,
}

impl Layer {
    pub fn points(&self) -> Vec<ParetoPoint> {
        self.states.iter().map(DpState::point).collect()
    }

    /// The state with arena id `id`, if it belongs to this layer.
    pub fn get(&self, id: StateId) -> Option<&DpState> {
        let offset = id.0.checked_sub(self.first_id.0)?;
        self.states.get(offset as usize)
    }
}

#[derive(Debug, Clone, Copy)]
struct Link {
    parent: u32,
    choice: Choice,
}

const NO_PARENT: u32 = u32::MAX;

/// Parent links of every retained state across all layers.
#[derive(Debug, Default, Clone)]
pub struct StateArena {
    links: Vec<Link>,
}

impl StateArena {
    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    /// Appends a layer's states and returns the id of the first one.
    fn push_layer(&mut self, states: &[DpState]) -> u32 {
        let base = self.links.len() as u32;
        self.links.extend(states.iter().map(|s| Link {
            parent: s.parent.map_or(NO_PARENT, |p| p.0),
            choice: s.choice,
        }));
        base
    }

    /// Choices from job 1 to the job of `state`.
    fn choice_chain(&self, state: &DpState) -> Result<Vec<Choice>> {
        let mut chain = vec![state.choice];
        let mut cursor = state.parent;
        while let Some(StateId(id)) = cursor {
            let link = self
                .links
                .get(id as usize)
                .ok_or_else(|| Error::Internal(format!("dangling parent link {id}")))?;
            chain.push(link.choice);
            if chain.len() > self.links.len() + 1 {
                return Err(Error::Internal("cyclic parent chain".into()));
            }
            cursor = (link.parent != NO_PARENT).then_some(StateId(link.parent));
        }
        chain.reverse();
        Ok(chain)
    }
}

/// Result of a layered solve.
#[derive(Debug, Clone)]
pub struct Solution {
    pub front: Front,
    /// `schedules[j]` realizes `front.points()[j]`.
    pub schedules: Vec<Schedule>,
    /// Retained state count per layer, layer 1 first.
    pub layer_sizes: Vec<usize>,
    /// Every retained layer, when requested.
    pub layers: Option<Vec<Layer>>,
}

impl Solution {
    /// Objective values of every retained layer, when layers were kept.
    pub fn layer_points(&self) -> Option<Vec<Vec<ParetoPoint>>> {
        self.layers
            .as_ref()
            .map(|layers| layers.iter().map(Layer::points).collect())
    }
}

/// Layer 1: job 1 on the machine with flag 1.
pub fn initial_layer(inst: &Instance) -> Layer {
    let first = inst.jobs()[0];
    Layer {
        job: 1,
        first_id: StateId(0),
        states: vec![DpState {
            k: 1,
            lmax: first.p + first.q,
            cmax: first.p,
            parent: None,
            choice: Choice::Initial,
        }],
    }
}

/// Both extensions of `state` by a job with processing time `p` and delivery
/// time `q`; `prefix` is the processing time of all jobs up to and including
/// this one.
pub fn successors(state: &DpState, id: StateId, p: i64, q: i64, prefix: i64) -> [DpState; 2] {
    let same = DpState {
        k: state.k,
        lmax: state.lmax.max(state.cmax + p + q),
        cmax: state.cmax + p,
        parent: Some(id),
        choice: Choice::MostLoaded,
    };
    let other_load = prefix - state.cmax;
    let lmax = state.lmax.max(other_load + q);
    let other = if state.cmax >= other_load {
        DpState {
            k: state.k,
            lmax,
            cmax: state.cmax,
            parent: Some(id),
            choice: Choice::Other,
        }
    } else {
        DpState {
            k: 1 - state.k,
            lmax,
            cmax: other_load,
            parent: Some(id),
            choice: Choice::Other,
        }
    };
    [same, other]
}

/// Keeps, for every `(k, C)`, the first generated state of minimal lateness.
/// The result is ordered by `(C, k)`.
pub fn prune(states: Vec<DpState>) -> Vec<DpState> {
    let Some(lo) = states.iter().map(|s| s.cmax).min() else {
        return states;
    };
    let hi = states.iter().map(|s| s.cmax).max().unwrap_or(lo);
    let span = (hi - lo) as u128 + 1;
    if span <= 4 * states.len() as u128 + 16 {
        prune_dense(states, lo, span as usize)
    } else {
        prune_sparse(states)
    }
}

fn prune_dense(states: Vec<DpState>, lo: i64, span: usize) -> Vec<DpState> {
    let mut slots: Vec<Option<DpState>> = vec![None; 2 * span];
    for s in states {
        let slot = 2 * (s.cmax - lo) as usize + s.k as usize;
        match &slots[slot] {
            Some(kept) if kept.lmax <= s.lmax => {}
            _ => slots[slot] = Some(s),
        }
    }
    slots.into_iter().flatten().collect()
}

fn prune_sparse(states: Vec<DpState>) -> Vec<DpState> {
    let mut best: HashMap<(i64, u8), DpState> = HashMap::with_capacity(states.len());
    for s in states {
        best.entry((s.cmax, s.k))
            .and_modify(|kept| {
                if s.lmax < kept.lmax {
                    *kept = s;
                }
            })
            .or_insert(s);
    }
    let mut out: Vec<DpState> = best.into_values().collect();
    out.sort_unstable_by_key(|s| (s.cmax, s.k));
    out
}

/// Runs the layer recurrence with a caller-supplied reduction step.
pub(crate) fn run_layers<R>(inst: &Instance, opts: &SolveOptions, mut reduce: R) -> Result<Solution>
where
    R: FnMut(usize, Vec<DpState>) -> Vec<DpState>,
{
    let budget = opts.state_budget.min(NO_PARENT as usize);
    let mut arena = StateArena::default();
    let mut current = initial_layer(inst).states;
    let mut base = arena.push_layer(&current);
    let mut layer_sizes = vec![current.len()];
    let mut layers = opts.retain_layers.then(|| {
        vec![Layer {
            job: 1,
            first_id: StateId(base),
            states: current.clone(),
        }]
    });

    for (idx, job) in inst.jobs().iter().enumerate().skip(1) {
        let live = arena.len() + 2 * current.len();
        if live > budget {
            return Err(Error::StateBudgetExceeded { live, budget });
        }
        let prefix = inst.prefix()[idx + 1];
        let mut candidates = Vec::with_capacity(2 * current.len());
        for (offset, s) in current.iter().enumerate() {
            let id = StateId(base + offset as u32);
            candidates.extend(successors(s, id, job.p, job.q, prefix));
        }
        current = reduce(idx + 1, candidates);
        base = arena.push_layer(&current);
        layer_sizes.push(current.len());
        if let Some(layers) = layers.as_mut() {
            layers.push(Layer {
                job: idx + 1,
                first_id: StateId(base),
                states: current.clone(),
            });
        }
    }

    let front = pareto_filter(current.iter().map(DpState::point));
    let schedules = front
        .iter()
        .map(|pt| {
            let state = current
                .iter()
                .find(|s| s.point() == *pt)
                .ok_or_else(|| Error::Internal(format!("no final state for {pt}")))?;
            reconstruct(&arena, state, inst)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(Solution {
        front,
        schedules,
        layer_sizes,
        layers,
    })
}

/// Exact Pareto front with the default options.
pub fn solve_exact(inst: &Instance) -> Result<Solution> {
    solve_exact_with(inst, &SolveOptions::default())
}

pub fn solve_exact_with(inst: &Instance, opts: &SolveOptions) -> Result<Solution> {
    run_layers(inst, opts, |_, candidates| prune(candidates))
}

/// Rebuilds the schedule of a final-layer state by replaying its choice
/// chain from job 1.
pub fn reconstruct(arena: &StateArena, state: &DpState, inst: &Instance) -> Result<Schedule> {
    let chain = arena.choice_chain(state)?;
    if chain.len() != inst.n() || chain[0] != Choice::Initial {
        return Err(Error::Internal(format!(
            "parent chain covers {} of {} jobs",
            chain.len(),
            inst.n()
        )));
    }
    let mut machines = Vec::with_capacity(inst.n());
    let first = inst.jobs()[0];
    let (mut k, mut cmax) = (1u8, first.p);
    machines.push(Machine::from_flag(1));
    for (idx, choice) in chain.iter().enumerate().skip(1) {
        let job = inst.jobs()[idx];
        match choice {
            Choice::MostLoaded => {
                machines.push(Machine::from_flag(k));
                cmax += job.p;
            }
            Choice::Other => {
                machines.push(Machine::from_flag(1 - k));
                let other = inst.prefix()[idx + 1] - cmax;
                if other > cmax {
                    k = 1 - k;
                    cmax = other;
                }
            }
            Choice::Initial => {
                return Err(Error::Internal(format!("initial choice at job {}", idx + 1)));
            }
        }
    }
    let schedule = Schedule::from_sorted_assignment(inst, &machines);
    debug_assert_eq!(evaluate_schedule(inst, &machines), schedule.point);
    if schedule.point != state.point() {
        return Err(Error::Internal(format!(
            "replayed schedule evaluates to {} but state is {}",
            schedule.point,
            state.point()
        )));
    }
    Ok(schedule)
}
