//! C ABI over the `credal` library.
//!
//! Problems are loaded from JSON into an opaque `CredalProblem` handle.
//! Results come back as JSON (or text) strings owned by the library and
//! released with `credal_string_free`. Every fallible call returns a
//! `CredalStatus`; on failure `credal_last_error_message` describes the error
//! for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use credal::criteria::{self, CriterionId};
use credal::maxent::MaxEntOptions;
use credal::problem::Problem;
use credal::rational::{parse_rational, to_f64};
use credal::reduction::Extension;
use credal::report::{self, ResultDocument};
use credal::Error;

/// Status codes. The first four match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CredalStatus {
    Ok = 0,
    /// Bad input: malformed problem, unknown command or criterion, bad alpha.
    Usage = 1,
    /// The constraints admit no distribution.
    Inconsistent = 2,
    /// Solver failure or a caught panic.
    Internal = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
}

/// Opaque handle to a parsed problem.
pub struct CredalProblem {
    problem: Problem,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> CredalStatus {
    set_error(err.to_string());
    match err.exit_code() {
        2 => CredalStatus::Inconsistent,
        3 => CredalStatus::Internal,
        _ => CredalStatus::Usage,
    }
}

fn guard(f: impl FnOnce() -> CredalStatus) -> CredalStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("panic inside credal");
            CredalStatus::Internal
        }
    }
}

/// Reads an optional C string; null maps to `None`.
unsafe fn opt_str<'a>(s: *const c_char) -> Result<Option<&'a str>, CredalStatus> {
    if s.is_null() {
        return Ok(None);
    }
    // SAFETY: caller passes a valid NUL-terminated string or null.
    match unsafe { CStr::from_ptr(s) }.to_str() {
        Ok(v) => Ok(Some(v)),
        Err(_) => {
            set_error("string is not valid UTF-8");
            Err(CredalStatus::InvalidUtf8)
        }
    }
}

/// Parses a JSON problem. On success `*out` receives a handle that must be
/// released with `credal_problem_free`.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn credal_problem_from_json(
    json: *const c_char,
    out: *mut *mut CredalProblem,
) -> CredalStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return CredalStatus::NullPointer;
        }
        // SAFETY: checked non-null above.
        unsafe { *out = ptr::null_mut() };
        let text = match unsafe { opt_str(json) } {
            Ok(Some(t)) => t,
            Ok(None) => {
                set_error("null problem text");
                return CredalStatus::NullPointer;
            }
            Err(status) => return status,
        };
        match Problem::from_json(text) {
            Ok(problem) => {
                let handle = Box::into_raw(Box::new(CredalProblem { problem }));
                // SAFETY: checked non-null above.
                unsafe { *out = handle };
                CredalStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `problem` must come from `credal_problem_from_json` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn credal_problem_free(problem: *mut CredalProblem) {
    if !problem.is_null() {
        // SAFETY: pointer originated from Box::into_raw in credal_problem_from_json.
        drop(unsafe { Box::from_raw(problem) });
    }
}

/// Number of actions, or 0 for a null handle.
///
/// # Safety
/// `problem` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn credal_problem_action_count(problem: *const CredalProblem) -> usize {
    // SAFETY: null or live handle per contract.
    match unsafe { problem.as_ref() } {
        Some(p) => p.problem.decision.action_count(),
        None => 0,
    }
}

/// Writes whether the constraints admit at least one distribution.
///
/// # Safety
/// `problem` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn credal_problem_is_consistent(
    problem: *const CredalProblem,
    out: *mut bool,
) -> CredalStatus {
    guard(|| {
        // SAFETY: null or live handle per contract.
        let (Some(p), false) = (unsafe { problem.as_ref() }, out.is_null()) else {
            set_error("null pointer argument");
            return CredalStatus::NullPointer;
        };
        match p.problem.credal_set() {
            Ok(k) => {
                // SAFETY: checked non-null above.
                unsafe { *out = k.is_consistent() };
                CredalStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Lower and upper expected utility of action `action` (declaration order),
/// rounded to the nearest double. Use `credal_run` with `intervals` for the
/// exact fractions.
///
/// # Safety
/// `problem` must be a live handle; `lo` and `hi` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn credal_utility_interval(
    problem: *const CredalProblem,
    action: usize,
    lo: *mut f64,
    hi: *mut f64,
) -> CredalStatus {
    guard(|| {
        // SAFETY: null or live handle per contract.
        let Some(p) = (unsafe { problem.as_ref() }) else {
            set_error("null problem handle");
            return CredalStatus::NullPointer;
        };
        if lo.is_null() || hi.is_null() {
            set_error("null output pointer");
            return CredalStatus::NullPointer;
        }
        if action >= p.problem.decision.action_count() {
            set_error(format!("action index {action} out of range"));
            return CredalStatus::Usage;
        }
        let working = match p.problem.working(Extension::Reduced) {
            Ok(w) => w,
            Err(e) => return status_of(&e),
        };
        match criteria::utility_intervals(&working.decision, &working.credal) {
            Ok(intervals) => {
                let u = &intervals[action];
                // SAFETY: checked non-null above.
                unsafe {
                    *lo = to_f64(&u.lo);
                    *hi = to_f64(&u.hi);
                }
                CredalStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Runs a command and writes the result document to `*out`.
///
/// `command` is one of `check`, `intervals`, `decide`, `maxent`, `reduce`,
/// `reduce-intervals`, `admissible`. `criterion` (for `decide`) is one of
/// `gm`, `gh`, `levi`, `pme`, `maximin`, `hurwicz`, `regret`; `alpha` is a
/// decimal or fraction string or null. With `json` false the document is
/// rendered as text. For `check` on inconsistent constraints the document is
/// still written and the status is `CREDAL_STATUS_INCONSISTENT`. The string
/// must be released with `credal_string_free`.
///
/// # Safety
/// `problem` must be a live handle, string arguments valid NUL-terminated
/// strings or null, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn credal_run(
    problem: *const CredalProblem,
    command: *const c_char,
    criterion: *const c_char,
    alpha: *const c_char,
    json: bool,
    out: *mut *mut c_char,
) -> CredalStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return CredalStatus::NullPointer;
        }
        // SAFETY: checked non-null above.
        unsafe { *out = ptr::null_mut() };
        // SAFETY: null or live handle per contract.
        let Some(p) = (unsafe { problem.as_ref() }) else {
            set_error("null problem handle");
            return CredalStatus::NullPointer;
        };
        let (command, criterion, alpha) =
            match unsafe { (opt_str(command), opt_str(criterion), opt_str(alpha)) } {
                (Ok(c), Ok(k), Ok(a)) => (c, k, a),
                (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
            };
        let Some(command) = command else {
            set_error("null command");
            return CredalStatus::NullPointer;
        };
        let result = dispatch(&p.problem, command, criterion, alpha);
        match result {
            Ok(doc) => {
                let text = if json { doc.to_json() } else { doc.to_text() };
                match CString::new(text) {
                    Ok(s) => {
                        // SAFETY: checked non-null above.
                        unsafe { *out = s.into_raw() };
                        if doc.consistent == Some(false) {
                            set_error("constraints are inconsistent");
                            CredalStatus::Inconsistent
                        } else {
                            CredalStatus::Ok
                        }
                    }
                    Err(_) => {
                        set_error("result contains a NUL byte");
                        CredalStatus::Internal
                    }
                }
            }
            Err(e) => status_of(&e),
        }
    })
}

fn dispatch(
    problem: &Problem,
    command: &str,
    criterion: Option<&str>,
    alpha: Option<&str>,
) -> Result<ResultDocument, Error> {
    match command {
        "check" => report::run_check(problem),
        "intervals" => report::run_intervals(problem),
        "decide" => {
            let criterion: CriterionId = criterion
                .ok_or_else(|| Error::Problem("decide needs a criterion".into()))?
                .parse()?;
            let alpha = alpha.map(parse_rational).transpose()?;
            report::run_decide(problem, criterion, alpha.as_ref())
        }
        "maxent" => report::run_maxent(problem, &MaxEntOptions::default()),
        "reduce" => report::run_reduce(problem, false),
        "reduce-intervals" => report::run_reduce(problem, true),
        "admissible" => report::run_admissible(problem),
        other => Err(Error::Problem(format!("unknown command `{other}`"))),
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn credal_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: pointer originated from CString::into_raw.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Message for the last failure on this thread, or null. Valid until the next
/// call into this library from the same thread.
#[no_mangle]
pub extern "C" fn credal_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn credal_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
