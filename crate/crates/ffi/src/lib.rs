//! C ABI over the pipeline. Handles are opaque; every call returns a `PmStatus`
//! and leaves a message retrievable with `pm_last_error` on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pencil_monodromy::alexander::{closed_form_generic_linear, closed_form_tame_maximal, LaurentPoly};
use pencil_monodromy::error::Error;
use pencil_monodromy::pipeline::{run_pipeline, RunConfig, RunReport};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    NumericFailure = 3,
    ExactArithmetic = 4,
    BudgetExceeded = 5,
    CheckFailed = 6,
    BufferTooSmall = 7,
    Internal = 8,
    Panic = 9,
}

/// Curve parameters and tracker settings.
pub struct PmCurve {
    config: RunConfig,
}

/// Finished pipeline run.
pub struct PmReport {
    report: RunReport,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> PmStatus {
    match e.root() {
        Error::Invalid(_) | Error::DegenerateSpec(_) => PmStatus::InvalidInput,
        Error::NumericFailure { .. }
        | Error::RootCollision { .. }
        | Error::MatchFailure(_)
        | Error::PathClearanceFailure { .. }
        | Error::InconsistentEvents(_)
        | Error::OrderViolation(_) => PmStatus::NumericFailure,
        Error::ExactArithmeticOverflow(_) | Error::InexactDivision(_) => PmStatus::ExactArithmetic,
        Error::BudgetExceeded(_) => PmStatus::BudgetExceeded,
        Error::CheckFailed(_) | Error::ReductionMismatch(_) | Error::InconsistentWeights(_) | Error::ZeroIdeal => {
            PmStatus::CheckFailed
        }
        _ => PmStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), PmStatus>) -> PmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PmStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside pencil-monodromy");
            PmStatus::Panic
        }
    }
}

fn fail(e: Error) -> PmStatus {
    set_error(&e.to_string());
    status_of(&e)
}

fn null(what: &str) -> PmStatus {
    set_error(&format!("null pointer: {what}"));
    PmStatus::NullPointer
}

/// Creates a curve of type `(p, q)`. `alphas` may be null for the default
/// parameters, otherwise it must point to `n_alphas == q` values.
///
/// # Safety
/// `alphas` must be null or valid for `n_alphas` reads; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pm_curve_new(
    p: usize,
    q: usize,
    alphas: *const f64,
    n_alphas: usize,
    out: *mut *mut PmCurve,
) -> PmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let mut config = RunConfig::new(p, q);
        if !alphas.is_null() {
            config.alphas = Some(std::slice::from_raw_parts(alphas, n_alphas).to_vec());
        }
        config.validate().map_err(fail)?;
        *out = Box::into_raw(Box::new(PmCurve { config }));
        Ok(())
    })
}

/// # Safety
/// `curve` must come from `pm_curve_new`.
#[no_mangle]
pub unsafe extern "C" fn pm_curve_set_tolerance(curve: *mut PmCurve, tol: f64) -> PmStatus {
    guard(|| {
        let c = curve.as_mut().ok_or_else(|| null("curve"))?;
        let mut next = c.config.clone();
        next.tracker.residual_tol = tol;
        next.validate().map_err(fail)?;
        c.config = next;
        Ok(())
    })
}

/// # Safety
/// `curve` must come from `pm_curve_new`.
#[no_mangle]
pub unsafe extern "C" fn pm_curve_set_segments(curve: *mut PmCurve, segments: usize) -> PmStatus {
    guard(|| {
        let c = curve.as_mut().ok_or_else(|| null("curve"))?;
        let mut next = c.config.clone();
        next.tracker.circle_pieces = segments;
        next.validate().map_err(fail)?;
        c.config = next;
        Ok(())
    })
}

/// # Safety
/// `curve` must be null or come from `pm_curve_new`, and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pm_curve_free(curve: *mut PmCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// # Safety
/// `curve` must come from `pm_curve_new`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pm_run_pipeline(curve: *const PmCurve, out: *mut *mut PmReport) -> PmStatus {
    guard(|| {
        let c = curve.as_ref().ok_or_else(|| null("curve"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let report = run_pipeline(&c.config).map_err(fail)?;
        *out = Box::into_raw(Box::new(PmReport { report }));
        Ok(())
    })
}

/// Writes 1 if no verdict failed, else 0.
///
/// # Safety
/// `report` must come from `pm_run_pipeline`; `passed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pm_report_passed(report: *const PmReport, passed: *mut i32) -> PmStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let out = passed.as_mut().ok_or_else(|| null("passed"))?;
        *out = r.report.passed() as i32;
        Ok(())
    })
}

/// JSON report as a new string, to be released with `pm_string_free`.
/// With `comparable != 0` the timings are left out.
///
/// # Safety
/// `report` must come from `pm_run_pipeline`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pm_report_json(report: *const PmReport, comparable: i32, out: *mut *mut c_char) -> PmStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let text = if comparable != 0 {
            r.report.comparable_json().map(|v| v.to_string()).map_err(fail)?
        } else {
            r.report.to_json().map_err(fail)?
        };
        *out = CString::new(text).map_err(|_| PmStatus::Internal)?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `report` must be null or come from `pm_run_pipeline`, and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pm_report_free(report: *mut PmReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn pm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn write_poly(
    poly: Result<LaurentPoly, Error>,
    lo: *mut i64,
    coeffs: *mut i64,
    capacity: usize,
    len: *mut usize,
) -> Result<(), PmStatus> {
    let poly = poly.map_err(fail)?;
    // SAFETY: the exported wrappers pass the caller's pointers through unchanged
    let (lo, len) = unsafe { (lo.as_mut(), len.as_mut()) };
    let lo = lo.ok_or_else(|| null("lo"))?;
    let len = len.ok_or_else(|| null("len"))?;
    *lo = poly.lo;
    *len = poly.coeffs.len();
    if poly.coeffs.len() > capacity {
        set_error(&format!("need {} coefficients, buffer holds {capacity}", poly.coeffs.len()));
        return Err(PmStatus::BufferTooSmall);
    }
    if coeffs.is_null() {
        return Err(null("coeffs"));
    }
    // SAFETY: caller guarantees `coeffs` holds `capacity` values
    unsafe { ptr::copy_nonoverlapping(poly.coeffs.as_ptr(), coeffs, poly.coeffs.len()) };
    Ok(())
}

/// Generic-linear closed-form Alexander polynomial `sum_k coeffs[k] t^(lo+k)`.
/// On `PM_STATUS_BUFFER_TOO_SMALL`, `len` holds the required capacity.
///
/// # Safety
/// `lo` and `len` must be writable; `coeffs` valid for `capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn pm_closed_form_generic(
    p: usize,
    q: usize,
    lo: *mut i64,
    coeffs: *mut i64,
    capacity: usize,
    len: *mut usize,
) -> PmStatus {
    guard(|| write_poly(closed_form_generic_linear(p, q), lo, coeffs, capacity, len))
}

/// Tame-maximal closed-form evaluator, same conventions as `pm_closed_form_generic`.
///
/// # Safety
/// As for `pm_closed_form_generic`.
#[no_mangle]
pub unsafe extern "C" fn pm_closed_form_tame(
    p: usize,
    q: usize,
    lo: *mut i64,
    coeffs: *mut i64,
    capacity: usize,
    len: *mut usize,
) -> PmStatus {
    guard(|| write_poly(closed_form_tame_maximal(p, q), lo, coeffs, capacity, len))
}

/// Message of the last failed call on this thread; valid until the next call.
#[no_mangle]
pub extern "C" fn pm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn pm_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}
