//! C ABI for the maintcost engine.
//!
//! Chains and homogenized chains are opaque handles created by the
//! constructors below and released with the matching `*_free`. Every fallible call
//! returns an [`McStatus`]; on failure a message is available from
//! [`mc_last_error`] on the same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use maintcost::critical::{CriticalQuery, StrategyPair};
use maintcost::homogenize::{homogenize, homogenized_unit_cost, rescale, HomogenizedChain};
use maintcost::solver::{critical_value, CurveMethod, SolveSettings};
use maintcost::{cost_breakdown, ref50, Chain, ChainConfig, Error, Strategy};

/// Result code of every fallible call.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    InvalidParameter = 4,
    DegenerateChain = 5,
    NoThreshold = 6,
    ConditionViolated = 7,
    SolverFailure = 8,
    Unsupported = 9,
    Panic = 10,
}

pub const MC_STRATEGY_ZERO: i32 = 0;
pub const MC_STRATEGY_INSPECTION: i32 = 1;
pub const MC_STRATEGY_MONITORING: i32 = 2;
pub const MC_STRATEGY_GENERAL: i32 = 3;

pub const MC_METHOD_CLOSED_NN: i32 = 0;
pub const MC_METHOD_CLOSED_N1_RESCALED: i32 = 1;
pub const MC_METHOD_NUMERIC: i32 = 2;

/// Opaque chain handle.
pub struct McChain(Chain);

/// Opaque homogenized chain handle.
pub struct McHomogenized(HomogenizedChain);

/// Totals and unit cost of one strategy.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct McCostBreakdown {
    pub fixed: f64,
    pub variable: f64,
    pub warranty: f64,
    pub total: f64,
    pub sold_volume: f64,
    pub defective_sold_volume: f64,
    pub survival: f64,
    pub unit_cost: f64,
}

/// Per-virtual-stage parameters of a homogenized chain.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct McHomogenizedParams {
    pub stages: f64,
    pub defect_rate: f64,
    pub monitoring_effectiveness: f64,
    pub inspection_effectiveness: f64,
    pub fixed_production: f64,
    pub fixed_monitoring: f64,
    pub fixed_inspection: f64,
    pub variable_production: f64,
    pub variable_monitoring: f64,
    pub variable_inspection: f64,
    pub initial_volume: f64,
    pub return_rate: f64,
    pub premium: f64,
    pub source_stages: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> McStatus {
    match e {
        Error::InvalidParameter { .. } => McStatus::InvalidParameter,
        Error::DegenerateChain { .. } => McStatus::DegenerateChain,
        Error::NoThreshold(_) => McStatus::NoThreshold,
        Error::ConditionViolated(_) => McStatus::ConditionViolated,
        Error::NoRoot { .. } | Error::NoConvergence { .. } | Error::DegenerateBracket { .. } => {
            McStatus::SolverFailure
        }
        Error::Overflow { .. } | Error::Unsupported(_) => McStatus::Unsupported,
        Error::Config(_) => McStatus::Config,
    }
}

struct Fail(McStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `f`, records any error or panic, and maps it to a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> McStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => McStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            McStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, name: &str) -> Result<&'a T, Fail> {
    // SAFETY: the caller passes either null or a valid pointer.
    unsafe { p.as_ref() }.ok_or_else(|| Fail(McStatus::NullPointer, format!("`{name}` is null")))
}

fn writable<T>(p: *mut T, name: &str) -> Result<*mut T, Fail> {
    if p.is_null() {
        Err(Fail(McStatus::NullPointer, format!("`{name}` is null")))
    } else {
        Ok(p)
    }
}

fn parse_strategy(code: i32) -> Result<Strategy, Fail> {
    match code {
        MC_STRATEGY_ZERO => Ok(Strategy::Zero),
        MC_STRATEGY_INSPECTION => Ok(Strategy::Inspection),
        MC_STRATEGY_MONITORING => Ok(Strategy::Monitoring),
        MC_STRATEGY_GENERAL => Ok(Strategy::General),
        other => Err(Fail(McStatus::InvalidParameter, format!("unknown strategy code {other}"))),
    }
}

fn parse_method(code: i32) -> Result<CurveMethod, Fail> {
    match code {
        MC_METHOD_CLOSED_NN => Ok(CurveMethod::ClosedForm),
        MC_METHOD_CLOSED_N1_RESCALED => Ok(CurveMethod::N1Rescale),
        MC_METHOD_NUMERIC => Ok(CurveMethod::DirectNn),
        other => Err(Fail(McStatus::InvalidParameter, format!("unknown method code {other}"))),
    }
}

/// Message of the last failed call on this thread, or null if none failed.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a JSON chain configuration.
///
/// # Safety
/// `json` must be null or a NUL-terminated string; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mc_chain_from_json(json: *const c_char, out: *mut *mut McChain) -> McStatus {
    guard(|| {
        let out = writable(out, "out")?;
        let json = unsafe { get(json, "json")? };
        // SAFETY: non-null and NUL-terminated per contract.
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|e| Fail(McStatus::InvalidUtf8, e.to_string()))?;
        let chain = ChainConfig::from_json(text)?.to_chain()?;
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(McChain(chain))) };
        Ok(())
    })
}

/// The bundled 50-stage reference chain.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mc_chain_ref50(out: *mut *mut McChain) -> McStatus {
    guard(|| {
        let out = writable(out, "out")?;
        unsafe { *out = Box::into_raw(Box::new(McChain(ref50()))) };
        Ok(())
    })
}

/// # Safety
/// `chain` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mc_chain_free(chain: *mut McChain) {
    if !chain.is_null() {
        // SAFETY: allocated by Box::into_raw in this crate.
        drop(unsafe { Box::from_raw(chain) });
    }
}

/// Number of stages, or 0 for a null handle.
///
/// # Safety
/// `chain` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mc_chain_len(chain: *const McChain) -> usize {
    unsafe { chain.as_ref() }.map_or(0, |c| c.0.len())
}

/// Unit cost of `strategy` (an `MC_STRATEGY_*` code).
///
/// # Safety
/// `chain` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mc_unit_cost(chain: *const McChain, strategy: i32, out: *mut f64) -> McStatus {
    guard(|| {
        let out = writable(out, "out")?;
        let chain = unsafe { get(chain, "chain")? };
        let b = cost_breakdown(&chain.0, parse_strategy(strategy)?)?;
        unsafe { *out = b.unit_cost };
        Ok(())
    })
}

/// # Safety
/// `chain` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mc_cost_breakdown(
    chain: *const McChain,
    strategy: i32,
    out: *mut McCostBreakdown,
) -> McStatus {
    guard(|| {
        let out = writable(out, "out")?;
        let chain = unsafe { get(chain, "chain")? };
        let b = cost_breakdown(&chain.0, parse_strategy(strategy)?)?;
        unsafe {
            *out = McCostBreakdown {
                fixed: b.fixed,
                variable: b.variable,
                warranty: b.warranty,
                total: b.total,
                sold_volume: b.sold_volume,
                defective_sold_volume: b.defective_sold_volume,
                survival: b.survival,
                unit_cost: b.unit_cost,
            }
        };
        Ok(())
    })
}

/// Homogenizes the chain under `strategy` onto `stages` virtual stages.
///
/// # Safety
/// `chain` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mc_homogenize(
    chain: *const McChain,
    strategy: i32,
    stages: f64,
    out: *mut *mut McHomogenized,
) -> McStatus {
    guard(|| {
        let out = writable(out, "out")?;
        let chain = unsafe { get(chain, "chain")? };
        let h = homogenize(&chain.0, parse_strategy(strategy)?, stages)?;
        unsafe { *out = Box::into_raw(Box::new(McHomogenized(h))) };
        Ok(())
    })
}

/// Moves a homogenized chain to `stages` virtual stages; the result is a new handle.
///
/// # Safety
/// `h` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mc_rescale(h: *const McHomogenized, stages: f64, out: *mut *mut McHomogenized) -> McStatus {
    guard(|| {
        let out = writable(out, "out")?;
        let h = unsafe { get(h, "h")? };
        let r = rescale(&h.0, stages)?;
        unsafe { *out = Box::into_raw(Box::new(McHomogenized(r))) };
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mc_homogenized_free(h: *mut McHomogenized) {
    if !h.is_null() {
        drop(unsafe { Box::from_raw(h) });
    }
}

/// # Safety
/// `h` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mc_homogenized_params(h: *const McHomogenized, out: *mut McHomogenizedParams) -> McStatus {
    guard(|| {
        let out = writable(out, "out")?;
        let h = unsafe { get(h, "h")? }.0;
        unsafe {
            *out = McHomogenizedParams {
                stages: h.stages,
                defect_rate: h.defect_rate,
                monitoring_effectiveness: h.monitoring_effectiveness,
                inspection_effectiveness: h.inspection_effectiveness,
                fixed_production: h.fixed.production,
                fixed_monitoring: h.fixed.monitoring,
                fixed_inspection: h.fixed.inspection,
                variable_production: h.variable.production,
                variable_monitoring: h.variable.monitoring,
                variable_inspection: h.variable.inspection,
                initial_volume: h.initial_volume,
                return_rate: h.reputation.return_rate,
                premium: h.reputation.premium,
                source_stages: h.source_stages as u64,
            }
        };
        Ok(())
    })
}

/// Unit cost of `strategy` from homogenized parameters.
///
/// # Safety
/// `h` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mc_homogenized_unit_cost(h: *const McHomogenized, strategy: i32, out: *mut f64) -> McStatus {
    guard(|| {
        let out = writable(out, "out")?;
        let h = unsafe { get(h, "h")? };
        let c = homogenized_unit_cost(&h.0, parse_strategy(strategy)?)?;
        unsafe { *out = c };
        Ok(())
    })
}

/// Critical monitoring effectiveness against zero maintenance at the chain's
/// defect rate, on `stages` virtual stages, by `method` (an `MC_METHOD_*` code).
///
/// The value is not clamped: below 0 monitoring always wins, above 1 it never does.
///
/// # Safety
/// `chain` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mc_em_crit_vs_zero(
    chain: *const McChain,
    stages: f64,
    method: i32,
    out: *mut f64,
) -> McStatus {
    guard(|| {
        let out = writable(out, "out")?;
        let chain = unsafe { get(chain, "chain")? };
        let q = CriticalQuery::new(StrategyPair::MonitoringVsZero, &chain.0, stages)?;
        let v = critical_value(&q, parse_method(method)?, &SolveSettings::default())?;
        unsafe { *out = v.value };
        Ok(())
    })
}

/// Critical monitoring effectiveness against inspection, as [`mc_em_crit_vs_zero`].
///
/// # Safety
/// `chain` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mc_em_crit_vs_inspection(
    chain: *const McChain,
    stages: f64,
    method: i32,
    out: *mut f64,
) -> McStatus {
    guard(|| {
        let out = writable(out, "out")?;
        let chain = unsafe { get(chain, "chain")? };
        let q = CriticalQuery::new(StrategyPair::MonitoringVsInspection, &chain.0, stages)?;
        let v = critical_value(&q, parse_method(method)?, &SolveSettings::default())?;
        unsafe { *out = v.value };
        Ok(())
    })
}
