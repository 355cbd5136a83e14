//! C ABI over the scenario classifier.
//!
//! Ownership: `alek_scenario_parse` and `alek_classify` return owning handles,
//! released with the matching `_free`; strings returned through `char **out`
//! are released with [`alek_string_free`]. Handles are immutable after
//! creation, so sharing a `const` handle across threads is safe; the error
//! message from [`alek_last_error`] is per thread and stays valid until the
//! next failing call on that thread.
//!
//! Every entry point catches panics and turns them into [`ALEK_PANIC`];
//! nothing unwinds across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::ptr;

use alek::quad::QuadratureSpec;
use alek::scenario::{build_report, Report, Scenario};

/// Success.
pub const ALEK_OK: c_int = 0;
/// A required pointer argument was null.
pub const ALEK_NULL_POINTER: c_int = 1;
/// Scenario JSON failed to parse or validate.
pub const ALEK_PARSE: c_int = 2;
/// Evaluation failed (invalid tolerances, model resolution, quadrature, …).
pub const ALEK_DOMAIN: c_int = 3;
/// An internal panic was caught at the boundary.
pub const ALEK_PANIC: c_int = 4;

/// λ schedule values reported for each of these ε when schedules apply.
const REPORT_EPSILONS: [f64; 3] = [1e-1, 1e-2, 1e-3];

/// Parsed scenario handle.
pub struct AlekScenario {
    inner: Scenario,
}

/// Finished classification report handle.
pub struct AlekReport {
    inner: Report,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    // NUL bytes cannot appear in our own error strings, but a message quoting
    // user input could carry one; replace rather than fail.
    let clean = CString::new(msg).unwrap_or_else(|_| {
        CString::new(msg.replace('\0', "\u{2400}")).expect("NUL-free after replacement")
    });
    LAST_ERROR.with(|slot| *slot.borrow_mut() = clean);
}

fn guarded<F: FnOnce() -> c_int + UnwindSafe>(f: F) -> c_int {
    match catch_unwind(f) {
        Ok(code) => code,
        Err(_) => {
            set_error("internal panic at the C boundary");
            ALEK_PANIC
        }
    }
}

/// Clears `*out` and returns an error code when `out` itself is unusable.
///
/// # Safety
/// `out`, when non-null, must point to writable memory for one pointer.
unsafe fn reset_out<T>(out: *mut *mut T) -> Option<c_int> {
    if out.is_null() {
        set_error("out pointer is null");
        return Some(ALEK_NULL_POINTER);
    }
    unsafe { *out = ptr::null_mut() };
    None
}

/// Library version as a static NUL-terminated string; never freed.
#[no_mangle]
pub extern "C" fn alek_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the most recent failure on the calling thread, empty if none.
/// Valid until the next failing call on this thread; do not free.
#[no_mangle]
pub extern "C" fn alek_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parses scenario JSON into a handle. On success stores the handle in `*out`
/// and returns `ALEK_OK`; on failure stores null and returns `ALEK_PARSE`
/// (or `ALEK_NULL_POINTER`).
///
/// # Safety
/// `json` must be a NUL-terminated UTF-8 string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn alek_scenario_parse(
    json: *const c_char,
    out: *mut *mut AlekScenario,
) -> c_int {
    guarded(|| {
        if let Some(code) = unsafe { reset_out(out) } {
            return code;
        }
        if json.is_null() {
            set_error("json pointer is null");
            return ALEK_NULL_POINTER;
        }
        let text = match unsafe { CStr::from_ptr(json) }.to_str() {
            Ok(t) => t,
            Err(e) => {
                set_error(&format!("scenario JSON is not UTF-8: {e}"));
                return ALEK_PARSE;
            }
        };
        match Scenario::from_json(text) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(AlekScenario { inner })) };
                ALEK_OK
            }
            Err(e) => {
                set_error(&e.to_string());
                ALEK_PARSE
            }
        }
    })
}

/// Releases a scenario handle; null is a no-op.
///
/// # Safety
/// `scenario` must come from [`alek_scenario_parse`] and not be used after.
#[no_mangle]
pub unsafe extern "C" fn alek_scenario_free(scenario: *mut AlekScenario) {
    if !scenario.is_null() {
        drop(unsafe { Box::from_raw(scenario) });
    }
}

/// Classifies a scenario and stores a report handle in `*out`.
///
/// `zero_tol`/`rank_tol` override the scenario's tolerances when positive;
/// pass 0 (or any non-positive value) to keep the scenario's own, falling
/// back to the library defaults. Reports carry no timestamp, so their JSON
/// is byte-reproducible.
///
/// # Safety
/// `scenario` must be a live handle from [`alek_scenario_parse`]; `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn alek_classify(
    scenario: *const AlekScenario,
    zero_tol: f64,
    rank_tol: f64,
    out: *mut *mut AlekReport,
) -> c_int {
    guarded(|| {
        if let Some(code) = unsafe { reset_out(out) } {
            return code;
        }
        if scenario.is_null() {
            set_error("scenario pointer is null");
            return ALEK_NULL_POINTER;
        }
        let scenario = unsafe { &(*scenario).inner };
        let mut tol = scenario.tolerances.unwrap_or_default();
        if zero_tol > 0.0 {
            tol.zero_tol = zero_tol;
        }
        if rank_tol > 0.0 {
            tol.rank_tol = rank_tol;
        }
        if let Err(e) = tol.validate() {
            set_error(&e.to_string());
            return ALEK_DOMAIN;
        }
        let quad = QuadratureSpec::default();
        let report = scenario
            .resolve(&quad)
            .and_then(|config| build_report(scenario, &config, &tol, &REPORT_EPSILONS, None));
        match report {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(AlekReport { inner })) };
                ALEK_OK
            }
            Err(e) => {
                set_error(&e.to_string());
                ALEK_DOMAIN
            }
        }
    })
}

fn string_out(out: *mut *mut c_char, text: String) -> c_int {
    match CString::new(text) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            ALEK_OK
        }
        Err(e) => {
            set_error(&format!("string contains NUL: {e}"));
            ALEK_DOMAIN
        }
    }
}

/// Serializes the full report as pretty-printed JSON into `*out`
/// (free with [`alek_string_free`]).
///
/// # Safety
/// `report` must be a live handle from [`alek_classify`]; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn alek_report_to_json(
    report: *const AlekReport,
    out: *mut *mut c_char,
) -> c_int {
    guarded(|| {
        if let Some(code) = unsafe { reset_out(out) } {
            return code;
        }
        if report.is_null() {
            set_error("report pointer is null");
            return ALEK_NULL_POINTER;
        }
        match serde_json::to_string_pretty(unsafe { &(*report).inner }) {
            Ok(json) => string_out(out, json),
            Err(e) => {
                set_error(&format!("report serialization failed: {e}"));
                ALEK_DOMAIN
            }
        }
    })
}

/// Stores the report's regime as a human-readable string in `*out`
/// (free with [`alek_string_free`]).
///
/// # Safety
/// `report` must be a live handle from [`alek_classify`]; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn alek_report_regime(
    report: *const AlekReport,
    out: *mut *mut c_char,
) -> c_int {
    guarded(|| {
        if let Some(code) = unsafe { reset_out(out) } {
            return code;
        }
        if report.is_null() {
            set_error("report pointer is null");
            return ALEK_NULL_POINTER;
        }
        let regime = unsafe { &(*report).inner }.verdict.regime;
        string_out(out, regime.to_string())
    })
}

/// Releases a string returned through a `char **out` parameter; null is a
/// no-op.
///
/// # Safety
/// `s` must come from this library and not be used after.
#[no_mangle]
pub unsafe extern "C" fn alek_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Releases a report handle; null is a no-op.
///
/// # Safety
/// `report` must come from [`alek_classify`] and not be used after.
#[no_mangle]
pub unsafe extern "C" fn alek_report_free(report: *mut AlekReport) {
    if !report.is_null() {
        drop(unsafe { Box::from_raw(report) });
    }
}
