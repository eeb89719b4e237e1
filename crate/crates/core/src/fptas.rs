//! Trimmed dynamic program giving a `(1 + ε)`-approximate Pareto front.
//!
//! The ranges `[0, P]` of the makespan and `[0, P + q_max]` of the lateness
//! are cut into boxes of width `δ1 = εP/(2n)` and `δ2 = ε(P + q_max)/(3n)`.
//! After each layer only one state per box survives, which bounds every
//! layer by a number of states polynomial in `n` and `1/ε`. All grid
//! arithmetic is exact.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::dp::{run_layers, Solution, SolveOptions};
use crate::error::{Error, Result};
use crate::model::{DpState, Front, Instance, ParetoPoint};
use crate::rational::{to_decimal, Rational};

/// Positive rational accuracy parameter, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Epsilon {
    num: u64,
    den: u64,
}

impl Epsilon {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidEpsilon(format!("{num}/{den}")));
        }
        let g = num.gcd(&den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn ratio(&self) -> Rational {
        Rational::new(self.num as i128, self.den as i128)
    }

    /// `1 + ε`.
    pub fn one_plus(&self) -> Rational {
        Rational::one() + self.ratio()
    }

    /// Shortest decimal rendering when the denominator allows it, otherwise
    /// six fractional digits.
    pub fn to_decimal_string(&self) -> String {
        let mut den = self.den;
        let mut digits = 0u32;
        while den % 10 == 0 {
            den /= 10;
            digits += 1;
        }
        while den % 2 == 0 || den % 5 == 0 {
            if den % 2 == 0 {
                den /= 2;
            } else {
                den /= 5;
            }
            digits += 1;
        }
        if den == 1 && digits <= 18 {
            to_decimal(&self.ratio(), digits)
        } else {
            to_decimal(&self.ratio(), 6)
        }
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Epsilon {
    type Err = Error;

    /// Accepts `a/b`, plain integers and decimals such as `0.3` or `.25`.
    /// Decimals are converted digit by digit, never through floating point.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidEpsilon(s.to_string());
        let t = s.trim();
        if let Some((a, b)) = t.split_once('/') {
            let num: u64 = parse_digits(a.trim()).ok_or_else(bad)?;
            let den: u64 = parse_digits(b.trim()).ok_or_else(bad)?;
            return Epsilon::new(num, den).map_err(|_| bad());
        }
        let (int_part, frac_part) = t.split_once('.').unwrap_or((t, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        let int: u64 = if int_part.is_empty() {
            0
        } else {
            parse_digits(int_part).ok_or_else(bad)?
        };
        let frac_part = frac_part.trim_end_matches('0');
        if frac_part.len() > 18 {
            return Err(bad());
        }
        let frac: u64 = if frac_part.is_empty() {
            0
        } else {
            parse_digits(frac_part).ok_or_else(bad)?
        };
        let den = 10u64.pow(frac_part.len() as u32);
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(bad)?;
        Epsilon::new(num, den).map_err(|_| bad())
    }
}

fn parse_digits(s: &str) -> Option<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Box widths and range bounds of the trimming grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridParams {
    /// Makespan box width, `εP/(2n)`.
    pub delta1: Rational,
    /// Lateness box width, `ε(P + q_max)/(3n)`.
    pub delta2: Rational,
    /// Upper bound on any makespan, `P`.
    pub cmax_bound: i64,
    /// Upper bound on any lateness, `P + q_max`.
    pub lmax_bound: i64,
    pub n: usize,
    pub total_processing: i64,
    pub q_max: i64,
}

impl GridParams {
    /// Upper bound on the number of states one trimmed layer can hold.
    pub fn box_count(&self) -> u128 {
        let c = box_index(self.cmax_bound, &self.delta1) as u128 + 1;
        let l = box_index(self.lmax_bound, &self.delta2) as u128 + 1;
        c * l
    }

    /// `(lateness box, makespan box)` of an objective pair.
    pub fn box_of(&self, cmax: i64, lmax: i64) -> (i64, i64) {
        (box_index(lmax, &self.delta2), box_index(cmax, &self.delta1))
    }
}

pub fn grid_params(inst: &Instance, eps: Epsilon) -> GridParams {
    let n = inst.n() as i128;
    let total = inst.total_processing();
    let q_max = inst.q_max();
    let e = eps.ratio();
    GridParams {
        delta1: e * Rational::new(total as i128, 2 * n),
        delta2: e * Rational::new(total as i128 + q_max as i128, 3 * n),
        cmax_bound: total,
        lmax_bound: total + q_max,
        n: inst.n(),
        total_processing: total,
        q_max,
    }
}

/// `floor(value / delta)` for `value >= 0` and `delta > 0`.
pub fn box_index(value: i64, delta: &Rational) -> i64 {
    debug_assert!(value >= 0 && *delta > Rational::zero());
    let scaled = value as i128 * delta.denom();
    (scaled / delta.numer()) as i64
}

/// Keeps one state per `(lateness box, makespan box)`: the one with the
/// smallest lateness, then smallest makespan, then generated first. The
/// machine flag is not part of the key. Output is ordered by box.
pub fn trim(states: Vec<DpState>, grid: &GridParams) -> Vec<DpState> {
    let mut keyed: Vec<((i64, i64), i64, i64, usize)> = states
        .iter()
        .enumerate()
        .map(|(i, s)| (grid.box_of(s.cmax, s.lmax), s.lmax, s.cmax, i))
        .collect();
    keyed.sort_unstable();
    keyed.dedup_by_key(|k| k.0);
    keyed.into_iter().map(|(_, _, _, i)| states[i]).collect()
}

pub fn solve_fptas(inst: &Instance, eps: Epsilon) -> Result<Solution> {
    solve_fptas_with(inst, eps, &SolveOptions::default())
}

pub fn solve_fptas_with(inst: &Instance, eps: Epsilon, opts: &SolveOptions) -> Result<Solution> {
    let grid = grid_params(inst, eps);
    run_layers(inst, opts, |_, candidates| trim(candidates, &grid))
}

/// First exact point with no approximate point within a factor `1 + ε` in
/// both objectives.
pub fn coverage_witness(exact: &Front, approx: &Front, eps: Epsilon) -> Option<ParetoPoint> {
    let (num, den) = (eps.num as i128, eps.den as i128);
    let within = |a: i64, e: i64| (a as i128) * den <= (num + den) * e as i128;
    exact
        .iter()
        .find(|e| {
            !approx
                .iter()
                .any(|a| within(a.cmax, e.cmax) && within(a.lmax, e.lmax))
        })
        .copied()
}

/// True iff every exact point is covered within a factor `1 + ε`.
pub fn coverage_check(exact: &Front, approx: &Front, eps: Epsilon) -> bool {
    coverage_witness(exact, approx, eps).is_none()
}

/// An exact state for which no approximate state of the same layer stays
/// within the per-layer error bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerBoundViolation {
    /// 1-based layer (job) index.
    pub layer: usize,
    pub exact: ParetoPoint,
    /// Largest admissible approximate lateness, `L + i·max(δ1, δ2)`.
    pub lmax_bound: Rational,
    /// Admissible approximate makespans, `C ± i·δ1`.
    pub cmax_window: (Rational, Rational),
    /// Approximate state in the makespan window with the smallest lateness.
    pub closest: Option<ParetoPoint>,
}

impl fmt::Display for LayerBoundViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "layer {}: exact state {} has no approximate state with L# <= {} and {} <= C# <= {}",
            self.layer,
            self.exact,
            self.lmax_bound,
            self.cmax_window.0,
            self.cmax_window.1
        )?;
        match self.closest {
            Some(p) => write!(f, " (closest in window: {p})"),
            None => write!(f, " (window empty)"),
        }
    }
}

/// Checks the per-layer error bounds of the trimmed recurrence: for each
/// layer `i` and each exact state `(C, L)` some approximate state `(C#, L#)`
/// of layer `i` must satisfy `L# <= L + i·max(δ1, δ2)` and
/// `C - i·δ1 <= C# <= C + i·δ1`.
pub fn check_layer_bounds(
    exact_layers: &[Vec<ParetoPoint>],
    approx_layers: &[Vec<ParetoPoint>],
    grid: &GridParams,
) -> std::result::Result<(), Box<LayerBoundViolation>> {
    let widest = grid.delta1.max(grid.delta2);
    for (idx, exact) in exact_layers.iter().enumerate() {
        let layer = idx + 1;
        let mut approx: Vec<ParetoPoint> =
            approx_layers.get(idx).cloned().unwrap_or_default();
        approx.sort_unstable();
        let i = Rational::from(layer as i128);
        let l_slack = i * widest;
        let c_slack = i * grid.delta1;
        for e in exact {
            let lmax_bound = Rational::from(e.lmax as i128) + l_slack;
            let lo = Rational::from(e.cmax as i128) - c_slack;
            let hi = Rational::from(e.cmax as i128) + c_slack;
            let (lo_int, hi_int) = (lo.ceil().to_integer(), hi.floor().to_integer());
            let start = approx.partition_point(|a| (a.cmax as i128) < lo_int);
            let end = approx.partition_point(|a| (a.cmax as i128) <= hi_int);
            let closest = approx[start..end].iter().min_by_key(|a| a.lmax).copied();
            let ok = closest.is_some_and(|c| Rational::from(c.lmax as i128) <= lmax_bound);
            if !ok {
                return Err(Box::new(LayerBoundViolation {
                    layer,
                    exact: *e,
                    lmax_bound,
                    cmax_window: (lo, hi),
                    closest,
                }));
            }
        }
    }
    Ok(())
}

pub fn verify_layer_bounds(
    exact_layers: &[Vec<ParetoPoint>],
    approx_layers: &[Vec<ParetoPoint>],
    grid: &GridParams,
) -> bool {
    check_layer_bounds(exact_layers, approx_layers, grid).is_ok()
}
