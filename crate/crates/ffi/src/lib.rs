//! C interface to `elimtemplates`.
//!
//! Templates and solution sets are opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns
//! an [`EtStatus`]; on failure [`et_last_error`] describes what went wrong on
//! the calling thread. Strings returned by the library are freed with
//! [`et_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use elimtemplates::cli::{CliError, SystemFile};
use elimtemplates::solver::{template_solve, SolutionSet, SolutionStatus, SolveOptions};
use elimtemplates::template::{build_template, EliminationTemplate, Strategy};

/// Status codes; the nonzero values match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtStatus {
    Ok = 0,
    Failure = 1,
    Parse = 2,
    PositiveDimensional = 3,
    Io = 4,
    SpecializationFailure = 5,
    SupportMismatch = 6,
    CorruptTemplate = 7,
    NullArgument = 8,
    OutOfRange = 9,
    Panic = 10,
}

/// Solution status as reported by [`et_solution_status`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtSolutionStatus {
    Ok = 0,
    AtInfinity = 1,
    RecoveryFailed = 2,
}

/// Opaque elimination template.
pub struct EtTemplate(EliminationTemplate);

/// Opaque list of solutions.
pub struct EtSolutions(SolutionSet);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &CliError) -> EtStatus {
    match e.exit_code() {
        2 => EtStatus::Parse,
        3 => EtStatus::PositiveDimensional,
        4 => EtStatus::Io,
        5 => EtStatus::SpecializationFailure,
        6 => EtStatus::SupportMismatch,
        7 => EtStatus::CorruptTemplate,
        _ => EtStatus::Failure,
    }
}

struct Fail(EtStatus, String);

impl From<CliError> for Fail {
    fn from(e: CliError) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(EtStatus::NullArgument, format!("`{what}` is null"))
}

/// Run `f`, turning errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> EtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            EtStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            EtStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(EtStatus::Parse, format!("`{what}` is not UTF-8")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn et_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Build a template from system-file text. `strategy` is `default`,
/// `larsson` or `greedy` (null means `default`); `seed` draws the action form
/// when the text has no `action` line.
///
/// # Safety
/// `system` and `strategy` must be null or nul-terminated strings; `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn et_template_build(
    system: *const c_char,
    strategy: *const c_char,
    seed: u64,
    out: *mut *mut EtTemplate,
) -> EtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let sys = SystemFile::parse(text(system, "system")?, None, None).map_err(CliError::from)?;
        let strategy = if strategy.is_null() {
            Strategy::Default
        } else {
            text(strategy, "strategy")?.parse::<Strategy>().map_err(|e| Fail(EtStatus::Parse, e.to_string()))?
        };
        let action = sys.action_or_random(seed);
        let t = build_template(&sys.generators, &action, strategy).map_err(CliError::from)?;
        put(out, EtTemplate(t));
        Ok(())
    })
}

/// Read a template from its JSON form.
///
/// # Safety
/// `json` must be null or a nul-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn et_template_from_json(json: *const c_char, out: *mut *mut EtTemplate) -> EtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let t = EliminationTemplate::from_json(text(json, "json")?).map_err(CliError::from)?;
        put(out, EtTemplate(t));
        Ok(())
    })
}

/// Serialize a template; free the string with [`et_string_free`].
///
/// # Safety
/// `t` must be a live template handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn et_template_to_json(t: *const EtTemplate, out: *mut *mut c_char) -> EtStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| null("t"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = CString::new(t.0.to_json()).expect("json has no nul").into_raw();
        Ok(())
    })
}

/// Number of standard monomials, the size of the action matrix; 0 for null.
///
/// # Safety
/// `t` must be null or a live template handle.
#[no_mangle]
pub unsafe extern "C" fn et_template_dimension(t: *const EtTemplate) -> usize {
    t.as_ref().map_or(0, |t| t.0.dimension())
}

/// Template matrix size; either output pointer may be null.
///
/// # Safety
/// `t` must be a live template handle; non-null outputs must be valid.
#[no_mangle]
pub unsafe extern "C" fn et_template_size(t: *const EtTemplate, rows: *mut usize, cols: *mut usize) -> EtStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| null("t"))?;
        if let Some(r) = rows.as_mut() {
            *r = t.0.nrows();
        }
        if let Some(c) = cols.as_mut() {
            *c = t.0.ncols();
        }
        Ok(())
    })
}

/// # Safety
/// `t` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn et_template_free(t: *mut EtTemplate) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Solve the instance given as system-file text with the template. The text
/// needs the template's variables; its `action` line, if any, replaces the
/// action-form coefficients.
///
/// # Safety
/// `t` must be a live template handle, `system` a nul-terminated string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn et_solve(t: *const EtTemplate, system: *const c_char, out: *mut *mut EtSolutions) -> EtStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| null("t"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let sys = SystemFile::parse_instance(text(system, "system")?, t.0.ring.order()).map_err(CliError::from)?;
        let sols = template_solve(&t.0, &sys.generators, sys.action.as_ref(), &SolveOptions::default())
            .map_err(CliError::from)?;
        put(out, EtSolutions(sols));
        Ok(())
    })
}

/// Number of eigenpairs, ok or not; 0 for null.
///
/// # Safety
/// `s` must be null or a live solutions handle.
#[no_mangle]
pub unsafe extern "C" fn et_solutions_len(s: *const EtSolutions) -> usize {
    s.as_ref().map_or(0, |s| s.0.solutions.len())
}

/// # Safety
/// `s` must be a live solutions handle and `status` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn et_solution_status(s: *const EtSolutions, index: usize, status: *mut EtSolutionStatus) -> EtStatus {
    guard(|| {
        let sol = solution(s, index)?;
        let status = status.as_mut().ok_or_else(|| null("status"))?;
        *status = match sol.status {
            SolutionStatus::Ok => EtSolutionStatus::Ok,
            SolutionStatus::AtInfinity => EtSolutionStatus::AtInfinity,
            SolutionStatus::RecoveryFailed => EtSolutionStatus::RecoveryFailed,
        };
        Ok(())
    })
}

/// Copy the coordinates of solution `index` into `re` and `im`, which hold
/// `len` values each; `len` must be at least the variable count. Points
/// without coordinates (at infinity, failed recovery) write nothing and set
/// `written` to 0.
///
/// # Safety
/// `s` must be a live solutions handle; `re` and `im` must point to `len`
/// writable doubles; `written` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn et_solution_coords(
    s: *const EtSolutions,
    index: usize,
    re: *mut f64,
    im: *mut f64,
    len: usize,
    written: *mut usize,
) -> EtStatus {
    guard(|| {
        let sol = solution(s, index)?;
        let n = sol.coords.len();
        if n > 0 && (re.is_null() || im.is_null()) {
            return Err(null("re/im"));
        }
        if n > len {
            return Err(Fail(EtStatus::OutOfRange, format!("buffer holds {len} values, need {n}")));
        }
        for (k, z) in sol.coords.iter().enumerate() {
            *re.add(k) = z.re;
            *im.add(k) = z.im;
        }
        if let Some(w) = written.as_mut() {
            *w = n;
        }
        Ok(())
    })
}

/// Eigenvalue of solution `index`.
///
/// # Safety
/// `s` must be a live solutions handle; `re` and `im` must be valid.
#[no_mangle]
pub unsafe extern "C" fn et_solution_lambda(s: *const EtSolutions, index: usize, re: *mut f64, im: *mut f64) -> EtStatus {
    guard(|| {
        let sol = solution(s, index)?;
        let (re, im) = (re.as_mut().ok_or_else(|| null("re"))?, im.as_mut().ok_or_else(|| null("im"))?);
        *re = sol.lambda.re;
        *im = sol.lambda.im;
        Ok(())
    })
}

/// Largest generator magnitude at solution `index`, or a negative value
/// when the point has no coordinates.
///
/// # Safety
/// `s` must be a live solutions handle and `residual` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn et_solution_residual(s: *const EtSolutions, index: usize, residual: *mut f64) -> EtStatus {
    guard(|| {
        let sol = solution(s, index)?;
        *residual.as_mut().ok_or_else(|| null("residual"))? = sol.residual.unwrap_or(-1.0);
        Ok(())
    })
}

unsafe fn solution<'a>(s: *const EtSolutions, index: usize) -> Result<&'a elimtemplates::solver::Solution, Fail> {
    let s = s.as_ref().ok_or_else(|| null("s"))?;
    s.0.solutions.get(index).ok_or_else(|| Fail(EtStatus::OutOfRange, format!("no solution {index}")))
}

/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn et_solutions_free(s: *mut EtSolutions) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn et_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn null_handles_are_rejected() {
        let mut t = ptr::null_mut();
        let st = unsafe { et_template_build(ptr::null(), ptr::null(), 0, &mut t) };
        assert_eq!(st, EtStatus::NullArgument);
        assert!(t.is_null());
        let msg = unsafe { CStr::from_ptr(et_last_error()) };
        assert_eq!(msg.to_str().unwrap(), "`system` is null");
        assert_eq!(unsafe { et_template_dimension(ptr::null()) }, 0);
        unsafe { et_template_free(ptr::null_mut()) };
    }

    #[test]
    fn status_codes_follow_exit_codes() {
        let mut t = ptr::null_mut();
        let line = c"ring x y\ngen x+y-1\n";
        assert_eq!(unsafe { et_template_build(line.as_ptr(), ptr::null(), 0, &mut t) }, EtStatus::PositiveDimensional);
        let bad = c"ring x y\ngen x^^2\n";
        assert_eq!(unsafe { et_template_build(bad.as_ptr(), ptr::null(), 0, &mut t) }, EtStatus::Parse);
        assert_eq!(unsafe { et_template_from_json(c"{".as_ptr(), &mut t) }, EtStatus::CorruptTemplate);
    }
}
