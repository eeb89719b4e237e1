//! Brute-force reference front for small instances.
//!
//! Job 1 stays on machine 1 (the machines are identical, so mirroring an
//! assignment never changes its objectives) and every assignment of the
//! remaining `n - 1` jobs is evaluated directly.

use crate::error::{Error, Result};
use crate::model::{evaluate_with, pareto_filter, Front, Instance, Machine};

pub const DEFAULT_ORACLE_CAP: usize = 20;

pub fn enumerate(inst: &Instance, cap: usize) -> Result<Front> {
    let n = inst.n();
    // 2^63 assignments is out of reach long before the shift overflows
    if n > cap || n > 63 {
        return Err(Error::OracleTooLarge { n, cap });
    }
    let points = (0u64..1u64 << (n - 1)).map(|mask| {
        evaluate_with(inst, |i| {
            if i > 0 && (mask >> (i - 1)) & 1 == 1 {
                Machine::Second
            } else {
                Machine::First
            }
        })
    });
    Ok(pareto_filter(points))
}
