//! C ABI over the `bipareto` solvers.
//!
//! Instances and solutions are opaque heap handles owned by the caller and
//! released with the matching `*_free` function. Every entry point returns a
//! [`BpStatus`]; on failure a description is kept per thread and can be read
//! with [`bipareto_last_error`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bipareto::cli::formats::parse_instance;
use bipareto::dp::{solve_exact_with, Solution, SolveOptions};
use bipareto::fptas::{coverage_check, solve_fptas_with, Epsilon};
use bipareto::{Error, Instance};

/// Result codes shared by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    BudgetExceeded = 3,
    OutOfRange = 4,
    Internal = 5,
    Panic = 6,
}

/// A validated, normalized instance.
pub struct BpInstance {
    inner: Instance,
}

/// A Pareto front together with one schedule per point.
pub struct BpSolution {
    inner: Solution,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: BpStatus, msg: impl Into<String>) -> BpStatus {
    set_error(msg);
    status
}

fn from_error(err: Error) -> BpStatus {
    let status = match err {
        Error::StateBudgetExceeded { .. } => BpStatus::BudgetExceeded,
        Error::Internal(_) => BpStatus::Internal,
        _ => BpStatus::InvalidInput,
    };
    fail(status, err.to_string())
}

/// Runs `body`, mapping panics to [`BpStatus::Panic`] and clearing the
/// per-thread error on success.
fn guard(body: impl FnOnce() -> BpStatus) -> BpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(BpStatus::Ok) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            BpStatus::Ok
        }
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(BpStatus::Panic, format!("panic: {msg}"))
        }
    }
}

fn options(budget: u64) -> SolveOptions {
    if budget == 0 {
        SolveOptions::default()
    } else {
        SolveOptions::default().with_budget(usize::try_from(budget).unwrap_or(usize::MAX))
    }
}

unsafe fn store<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Builds an instance from `n` pairs `(p[i], q[i])`; job `i` gets id `i + 1`.
///
/// # Safety
/// `p` and `q` must point to `n` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bipareto_instance_new(
    p: *const i64,
    q: *const i64,
    n: usize,
    out: *mut *mut BpInstance,
) -> BpStatus {
    guard(|| {
        if out.is_null() || (n > 0 && (p.is_null() || q.is_null())) {
            return fail(BpStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let raw: Vec<(i64, i64)> = if n == 0 {
            Vec::new()
        } else {
            let (p, q) = (std::slice::from_raw_parts(p, n), std::slice::from_raw_parts(q, n));
            p.iter().copied().zip(q.iter().copied()).collect()
        };
        match Instance::normalize(&raw) {
            Ok(inner) => {
                store(out, BpInstance { inner });
                BpStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Parses the text instance format: a job count followed by `p q` lines,
/// `#` starting a comment.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bipareto_instance_parse(
    text: *const c_char,
    out: *mut *mut BpInstance,
) -> BpStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(BpStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            return fail(BpStatus::InvalidInput, "instance text is not UTF-8");
        };
        match parse_instance(text) {
            Ok(inner) => {
                store(out, BpInstance { inner });
                BpStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Number of jobs, or 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bipareto_instance_len(inst: *const BpInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.inner.n())
}

/// # Safety
/// `inst` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bipareto_instance_free(inst: *mut BpInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

fn solve_into(result: bipareto::Result<Solution>, out: *mut *mut BpSolution) -> BpStatus {
    match result {
        Ok(inner) => {
            unsafe { store(out, BpSolution { inner }) };
            BpStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Exact Pareto front. `budget` caps stored states; 0 selects the default.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bipareto_solve_exact(
    inst: *const BpInstance,
    budget: u64,
    out: *mut *mut BpSolution,
) -> BpStatus {
    guard(|| {
        let (Some(inst), false) = (inst.as_ref(), out.is_null()) else {
            return fail(BpStatus::NullPointer, "null argument");
        };
        *out = ptr::null_mut();
        solve_into(solve_exact_with(&inst.inner, &options(budget)), out)
    })
}

/// Approximate front for `eps = eps_num / eps_den`. `budget` as for
/// [`bipareto_solve_exact`].
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bipareto_solve_fptas(
    inst: *const BpInstance,
    eps_num: u64,
    eps_den: u64,
    budget: u64,
    out: *mut *mut BpSolution,
) -> BpStatus {
    guard(|| {
        let (Some(inst), false) = (inst.as_ref(), out.is_null()) else {
            return fail(BpStatus::NullPointer, "null argument");
        };
        *out = ptr::null_mut();
        let eps = match Epsilon::new(eps_num, eps_den) {
            Ok(e) => e,
            Err(e) => return from_error(e),
        };
        solve_into(solve_fptas_with(&inst.inner, eps, &options(budget)), out)
    })
}

/// Number of front points, or 0 for a null handle.
///
/// # Safety
/// `sol` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bipareto_solution_len(sol: *const BpSolution) -> usize {
    sol.as_ref().map_or(0, |s| s.inner.front.len())
}

/// Objective values of point `index`; points are ordered by increasing makespan.
///
/// # Safety
/// `sol` must be a live handle; `cmax` and `lmax` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bipareto_solution_point(
    sol: *const BpSolution,
    index: usize,
    cmax: *mut i64,
    lmax: *mut i64,
) -> BpStatus {
    guard(|| {
        let Some(sol) = sol.as_ref() else {
            return fail(BpStatus::NullPointer, "null argument");
        };
        if cmax.is_null() || lmax.is_null() {
            return fail(BpStatus::NullPointer, "null argument");
        }
        let Some(pt) = sol.inner.front.points().get(index) else {
            return fail(BpStatus::OutOfRange, format!("point index {index} out of range"));
        };
        *cmax = pt.cmax;
        *lmax = pt.lmax;
        BpStatus::Ok
    })
}

/// Machine (1 or 2) running job `job_id` (1-based, input order) in the
/// schedule of point `index`.
///
/// # Safety
/// `sol` must be a live handle; `machine` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bipareto_solution_machine(
    sol: *const BpSolution,
    index: usize,
    job_id: usize,
    machine: *mut u8,
) -> BpStatus {
    guard(|| {
        let Some(sol) = sol.as_ref() else {
            return fail(BpStatus::NullPointer, "null argument");
        };
        if machine.is_null() {
            return fail(BpStatus::NullPointer, "null argument");
        }
        let Some(schedule) = sol.inner.schedules.get(index) else {
            return fail(BpStatus::OutOfRange, format!("point index {index} out of range"));
        };
        let Some(m) = job_id.checked_sub(1).and_then(|j| schedule.assignment.get(j)) else {
            return fail(BpStatus::OutOfRange, format!("job id {job_id} out of range"));
        };
        *machine = m.number();
        BpStatus::Ok
    })
}

/// # Safety
/// `sol` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bipareto_solution_free(sol: *mut BpSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Sets `covered` to whether every point of `exact` has a point of `approx`
/// within a factor `1 + eps_num / eps_den` in both objectives.
///
/// # Safety
/// `exact` and `approx` must be live handles; `covered` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bipareto_coverage_check(
    exact: *const BpSolution,
    approx: *const BpSolution,
    eps_num: u64,
    eps_den: u64,
    covered: *mut bool,
) -> BpStatus {
    guard(|| {
        let (Some(exact), Some(approx)) = (exact.as_ref(), approx.as_ref()) else {
            return fail(BpStatus::NullPointer, "null argument");
        };
        if covered.is_null() {
            return fail(BpStatus::NullPointer, "null argument");
        }
        let eps = match Epsilon::new(eps_num, eps_den) {
            Ok(e) => e,
            Err(e) => return from_error(e),
        };
        *covered = coverage_check(&exact.inner.front, &approx.inner.front, eps);
        BpStatus::Ok
    })
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn bipareto_status_message(status: BpStatus) -> *const c_char {
    let s: &'static str = match status {
        BpStatus::Ok => "ok\0",
        BpStatus::NullPointer => "null pointer argument\0",
        BpStatus::InvalidInput => "invalid input\0",
        BpStatus::BudgetExceeded => "state budget exceeded\0",
        BpStatus::OutOfRange => "index out of range\0",
        BpStatus::Internal => "internal error\0",
        BpStatus::Panic => "panic inside library\0",
    };
    s.as_ptr().cast()
}

/// Detail of the last failure on this thread, or null after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn bipareto_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn bipareto_version() -> *const c_char {
    const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}
