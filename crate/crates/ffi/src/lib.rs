//! C ABI over the `uvp` solvers.
//!
//! Instances and outcomes are opaque heap handles released with their `_free`
//! functions. Every fallible call returns a [`UvpStatus`]; the message of the
//! most recent failure on the calling thread is available from
//! [`uvp_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use uvp::baselines::BaselineParams;
use uvp::instances::{HardInstanceSpec, HardVariant, LandscapeKind, LoadOptions};
use uvp::runner::{run_algorithm, Algorithm, Instance, Sampling};
use uvp::solvers::{Predictor, SolverParams};
use uvp::{SearchOutcome, UvpError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UvpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidBudget = 3,
    BudgetExhausted = 4,
    InsufficientCandidates = 5,
    Parse = 6,
    Schema = 7,
    Io = 8,
    OutOfRange = 9,
    Internal = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UvpPredictor {
    TwoPoint = 0,
    TailFit = 1,
}

/// Solver and baseline parameters. Obtain defaults from
/// [`uvp_solver_config_default`] and override fields as needed.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct UvpSolverConfig {
    pub budget: usize,
    pub horizon: usize,
    pub p: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub theta: f64,
    pub predictor: UvpPredictor,
    pub eta: usize,
    pub iterations: usize,
    pub seed: u64,
}

/// Opaque candidate set with its value oracle.
pub struct UvpInstance(Instance);

/// Opaque result of one solver run.
pub struct UvpOutcome(SearchOutcome);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &UvpError) -> UvpStatus {
    match e {
        UvpError::BudgetExhausted { .. } => UvpStatus::BudgetExhausted,
        UvpError::InvalidBudget(_) => UvpStatus::InvalidBudget,
        UvpError::InsufficientCandidates { .. } => UvpStatus::InsufficientCandidates,
        UvpError::Parse { .. } => UvpStatus::Parse,
        UvpError::Schema(_) => UvpStatus::Schema,
        UvpError::OutOfDomain { .. } | UvpError::SizeOverflow { .. } | UvpError::TooLarge { .. } => {
            UvpStatus::OutOfRange
        }
        e if e.is_io() => UvpStatus::Io,
        _ => UvpStatus::InvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard<F: FnOnce() -> Result<(), UvpStatus>>(f: F) -> UvpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UvpStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            UvpStatus::Internal
        }
    }
}

fn fail(e: UvpError) -> UvpStatus {
    set_error(e.to_string());
    status_of(&e)
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, UvpStatus> {
    if p.is_null() {
        set_error(format!("{what} is null"));
        return Err(UvpStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{what} is not valid UTF-8"));
        UvpStatus::InvalidArgument
    })
}

fn parse<T: std::str::FromStr<Err = UvpError>>(s: &str) -> Result<T, UvpStatus> {
    s.parse().map_err(fail)
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), UvpStatus> {
    if out.is_null() {
        set_error("output pointer is null");
        return Err(UvpStatus::NullPointer);
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, UvpStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("handle is null");
        UvpStatus::NullPointer
    })
}

/// Loads a long-format CSV table (`id,x0,...,b,value`).
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uvp_instance_from_tabular(
    path: *const c_char,
    normalize: bool,
    out: *mut *mut UvpInstance,
) -> UvpStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let inst = Instance::tabular(Path::new(path), LoadOptions { normalize }).map_err(fail)?;
        store(out, UvpInstance(inst))
    })
}

/// Samples `n` uniform points over a named landscape's domain.
///
/// # Safety
/// `kind` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uvp_instance_landscape(
    kind: *const c_char,
    n: usize,
    seed: u64,
    horizon: usize,
    out: *mut *mut UvpInstance,
) -> UvpStatus {
    guard(|| {
        let kind: LandscapeKind = parse(str_arg(kind, "kind")?)?;
        let inst = Instance::landscape(kind, Sampling::Uniform { n, seed }, seed, horizon).map_err(fail)?;
        store(out, UvpInstance(inst))
    })
}

/// Builds an adversarial clustered instance (`variant` is "fc" or "ac").
///
/// # Safety
/// `variant` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uvp_instance_hard(
    variant: *const c_char,
    epsilon: f64,
    beta: f64,
    theta: f64,
    k: usize,
    n_per_cluster: usize,
    r: f64,
    horizon: usize,
    seed: u64,
    out: *mut *mut UvpInstance,
) -> UvpStatus {
    guard(|| {
        let variant: HardVariant = parse(str_arg(variant, "variant")?)?;
        let spec = HardInstanceSpec {
            variant,
            epsilon,
            beta,
            theta_frac: theta,
            k,
            n_per_cluster,
            r,
            horizon,
            seed,
        };
        let inst = Instance::hard(&spec).map_err(fail)?;
        store(out, UvpInstance(inst))
    })
}

/// Number of candidate configurations; 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn uvp_instance_len(inst: *const UvpInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.points.len())
}

/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn uvp_instance_horizon(inst: *const UvpInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.horizon())
}

/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn uvp_instance_dimension(inst: *const UvpInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.oracle.dimension())
}

/// # Safety
/// `inst` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn uvp_instance_free(inst: *mut UvpInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Defaults for horizon `T`: budget `20 T`, `p = 25`, `epsilon = 0.2`,
/// `delta = 0.1`, `theta = 0.3`, tail-fit prediction, `eta = 3` and 6 brackets.
#[no_mangle]
pub extern "C" fn uvp_solver_config_default(horizon: usize) -> UvpSolverConfig {
    let s = SolverParams::new(horizon);
    let b = BaselineParams::default();
    UvpSolverConfig {
        budget: s.budget,
        horizon,
        p: s.p,
        epsilon: s.epsilon,
        delta: s.delta,
        theta: s.theta,
        predictor: UvpPredictor::TailFit,
        eta: b.eta,
        iterations: b.iterations,
        seed: b.seed,
    }
}

/// Runs the named algorithm ("full-cent", "e-full-cent", "ada-cent",
/// "e-ada-cent", "random", "sha" or "hyperband").
///
/// # Safety
/// `inst` must be a live handle, `algo` a NUL-terminated string, `config` a
/// valid pointer and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uvp_solve(
    inst: *const UvpInstance,
    algo: *const c_char,
    config: *const UvpSolverConfig,
    out: *mut *mut UvpOutcome,
) -> UvpStatus {
    guard(|| {
        if out.is_null() {
            set_error("output pointer is null");
            return Err(UvpStatus::NullPointer);
        }
        let inst = &borrow(inst)?.0;
        let algo: Algorithm = parse(str_arg(algo, "algo")?)?;
        let c = *borrow(config)?;
        let params = SolverParams {
            budget: c.budget,
            horizon: c.horizon,
            p: c.p,
            epsilon: c.epsilon,
            delta: c.delta,
            theta: c.theta,
            predictor: match c.predictor {
                UvpPredictor::TwoPoint => Predictor::TwoPoint,
                UvpPredictor::TailFit => Predictor::TailFit,
            },
            eta_cap: uvp::clustering::DEFAULT_ETA_CAP,
        };
        let baseline = BaselineParams {
            eta: c.eta,
            seed: c.seed,
            iterations: c.iterations,
        };
        let outcome = run_algorithm(algo, &params, &baseline, &inst.points, inst.oracle.as_ref()).map_err(fail)?;
        store(out, UvpOutcome(outcome))
    })
}

/// # Safety
/// `outcome` must be a live handle; `id` and `value` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn uvp_outcome_best(outcome: *const UvpOutcome, id: *mut usize, value: *mut f64) -> UvpStatus {
    guard(|| {
        let o = &borrow(outcome)?.0;
        if id.is_null() || value.is_null() {
            set_error("output pointer is null");
            return Err(UvpStatus::NullPointer);
        }
        *id = o.best;
        *value = o.best_value;
        Ok(())
    })
}

/// Units spent by the run; 0 for a null handle.
///
/// # Safety
/// `outcome` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn uvp_outcome_spent(outcome: *const UvpOutcome) -> usize {
    outcome.as_ref().map_or(0, |o| o.0.spent)
}

/// # Safety
/// `outcome` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn uvp_outcome_trace_len(outcome: *const UvpOutcome) -> usize {
    outcome.as_ref().map_or(0, |o| o.0.trace.len())
}

/// Copies up to `len` trace points into the caller's arrays. Fails with
/// `UVP_STATUS_OUT_OF_RANGE` when `len` is smaller than the trace.
///
/// # Safety
/// `outcome` must be a live handle; `spent` and `incumbent` must each point to
/// at least `len` writable elements.
#[no_mangle]
pub unsafe extern "C" fn uvp_outcome_trace(
    outcome: *const UvpOutcome,
    spent: *mut usize,
    incumbent: *mut f64,
    len: usize,
) -> UvpStatus {
    guard(|| {
        let o = &borrow(outcome)?.0;
        if o.trace.len() > len {
            set_error(format!("trace has {} points but the buffer holds {len}", o.trace.len()));
            return Err(UvpStatus::OutOfRange);
        }
        if o.trace.is_empty() {
            return Ok(());
        }
        if spent.is_null() || incumbent.is_null() {
            set_error("output buffer is null");
            return Err(UvpStatus::NullPointer);
        }
        for (i, p) in o.trace.iter().enumerate() {
            *spent.add(i) = p.spent;
            *incumbent.add(i) = p.incumbent;
        }
        Ok(())
    })
}

/// # Safety
/// `outcome` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn uvp_outcome_free(outcome: *mut UvpOutcome) {
    if !outcome.is_null() {
        drop(Box::from_raw(outcome));
    }
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn uvp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static description of a status code; unknown codes map to "unknown status".
#[no_mangle]
pub extern "C" fn uvp_status_str(status: i32) -> *const c_char {
    let s: &'static CStr = match status {
        0 => c"ok",
        1 => c"null pointer",
        2 => c"invalid argument",
        3 => c"invalid budget",
        4 => c"budget exhausted",
        5 => c"insufficient candidates",
        6 => c"parse error",
        7 => c"schema error",
        8 => c"i/o error",
        9 => c"out of range",
        10 => c"internal error",
        _ => c"unknown status",
    };
    s.as_ptr()
}
