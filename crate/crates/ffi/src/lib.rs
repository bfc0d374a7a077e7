//! C ABI over `cdd-core`.
//!
//! Problems and solutions are opaque handles owned by the caller and released
//! with the matching `*_free` function. Every fallible call returns a
//! [`CddStatus`]; on failure the message is available from
//! [`cdd_last_error`] on the same thread. Strings returned through out
//! pointers are released with [`cdd_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString, c_char};
use std::panic::{AssertUnwindSafe, catch_unwind};

use cdd_core::designspace::{DesignProblem, RankingSpec};
use cdd_core::error::Error;
use cdd_core::modeltheory::{StructureDocument, Theory, check_theory};
use cdd_core::orthotope::{Ranking, SolveResult, solve_greedy};

/// Bumped on any incompatible change to the exported functions.
pub const CDD_ABI_VERSION: u32 = 1;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CddStatus {
    Ok = 0,
    NullPointer = 1,
    Invalid = 2,
    InfeasibleSeed = 3,
    /// The solution was produced but its maximality certificate failed.
    NotMaximal = 4,
    Logic = 6,
    Panic = 7,
}

/// A validated design problem.
pub struct CddProblem(DesignProblem);

/// A solved orthotope with its audit trail and certificate.
pub struct CddSolution(SolveResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).unwrap_or_default());
}

fn status_of(e: &Error) -> CddStatus {
    match e {
        Error::InfeasibleSeed(_) => CddStatus::InfeasibleSeed,
        Error::Logic(_) => CddStatus::Logic,
        _ => CddStatus::Invalid,
    }
}

/// Runs `f`, recording errors and converting panics into [`CddStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<CddStatus, (CddStatus, String)>) -> CddStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            CddStatus::Panic
        }
    }
}

fn fail(e: Error) -> (CddStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (CddStatus, String) {
    (CddStatus::NullPointer, format!("`{what}` is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, (CddStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    unsafe { CStr::from_ptr(p) }.to_str().map_err(|_| (CddStatus::Invalid, format!("`{what}` is not UTF-8")))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], (CddStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

unsafe fn slice_mut<'a>(p: *mut f64, len: usize, what: &str) -> Result<&'a mut [f64], (CddStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(unsafe { std::slice::from_raw_parts_mut(p, len) })
}

fn check_dim(expected: usize, found: usize) -> Result<(), (CddStatus, String)> {
    if expected == found { Ok(()) } else { Err(fail(Error::DimensionMismatch { expected, found })) }
}

fn give_string(s: String, out: *mut *mut c_char) -> Result<CddStatus, (CddStatus, String)> {
    let c = CString::new(s).map_err(|_| (CddStatus::Invalid, "string contains NUL".to_string()))?;
    unsafe { *out = c.into_raw() };
    Ok(CddStatus::Ok)
}

#[unsafe(no_mangle)]
pub extern "C" fn cdd_abi_version() -> u32 {
    CDD_ABI_VERSION
}

/// Message for the last failed call on this thread, empty after a success.
/// Valid until the next call into this library from the same thread.
#[unsafe(no_mangle)]
pub extern "C" fn cdd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cdd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Parses a problem document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cdd_problem_from_json(json: *const c_char, out: *mut *mut CddProblem) -> CddStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = unsafe { text(json, "json") }?;
        let p = DesignProblem::from_json(text, "problem").map_err(fail)?;
        unsafe { *out = Box::into_raw(Box::new(CddProblem(p))) };
        Ok(CddStatus::Ok)
    })
}

/// Loads a bundled problem by name (`emissions`, `adas`).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cdd_problem_bundled(name: *const c_char, out: *mut *mut CddProblem) -> CddStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let name = unsafe { text(name, "name") }?;
        let source = cdd_core::bundled::problem(name)
            .ok_or_else(|| (CddStatus::Invalid, format!("no bundled problem `{name}`")))?;
        let p = DesignProblem::from_json(source, name.trim_end_matches(".json")).map_err(fail)?;
        unsafe { *out = Box::into_raw(Box::new(CddProblem(p))) };
        Ok(CddStatus::Ok)
    })
}

/// # Safety
/// `p` must be null or a handle from this library, not yet freed.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cdd_problem_free(p: *mut CddProblem) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

/// # Safety
/// `p` must be null or a live handle.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cdd_problem_dimension(p: *const CddProblem) -> usize {
    unsafe { p.as_ref() }.map_or(0, |p| p.0.dimension())
}

/// # Safety
/// `p` must be null or a live handle.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cdd_problem_surface_count(p: *const CddProblem) -> usize {
    unsafe { p.as_ref() }.map_or(0, |p| p.0.surfaces().len())
}

/// Evaluates every surface at `point` (length = dimension) into `values`
/// (length = surface count).
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cdd_problem_evaluate(
    p: *const CddProblem,
    point: *const f64,
    point_len: usize,
    values: *mut f64,
    values_len: usize,
) -> CddStatus {
    guard(|| {
        let p = unsafe { p.as_ref() }.ok_or_else(|| null("problem"))?;
        let x = unsafe { slice(point, point_len, "point") }?;
        let out = unsafe { slice_mut(values, values_len, "values") }?;
        check_dim(p.0.surfaces().len(), values_len)?;
        for (slot, s) in out.iter_mut().zip(p.0.surfaces()) {
            *slot = s.evaluate(x).map_err(fail)?;
        }
        Ok(CddStatus::Ok)
    })
}

/// Replaces the problem's seed.
///
/// # Safety
/// `p` must be a live handle and `seed` valid for `len` values.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cdd_problem_set_seed(p: *mut CddProblem, seed: *const f64, len: usize) -> CddStatus {
    guard(|| {
        let p = unsafe { p.as_mut() }.ok_or_else(|| null("problem"))?;
        let x = unsafe { slice(seed, len, "seed") }?;
        p.0 = p.0.with_seed(cdd_core::surface::DesignPoint(x.to_vec())).map_err(fail)?;
        Ok(CddStatus::Ok)
    })
}

/// Sets an explicit expansion order; `order` is a permutation of variable indices.
///
/// # Safety
/// `p` must be a live handle and `order` valid for `len` values.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cdd_problem_set_ranking(p: *mut CddProblem, order: *const usize, len: usize) -> CddStatus {
    guard(|| {
        let p = unsafe { p.as_mut() }.ok_or_else(|| null("problem"))?;
        if order.is_null() {
            return Err(null("order"));
        }
        let order = unsafe { std::slice::from_raw_parts(order, len) }.to_vec();
        let r = Ranking::new(order).map_err(fail)?;
        p.0 = p.0.with_ranking(RankingSpec::Explicit(r)).map_err(fail)?;
        Ok(CddStatus::Ok)
    })
}

/// Grows a maximal orthotope around the seed. A solution is written even when
/// the status is [`CddStatus::NotMaximal`].
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cdd_solve(p: *const CddProblem, out: *mut *mut CddSolution) -> CddStatus {
    guard(|| {
        let p = unsafe { p.as_ref() }.ok_or_else(|| null("problem"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = solve_greedy(&p.0).map_err(fail)?;
        let maximal = r.certificate.is_maximal();
        unsafe { *out = Box::into_raw(Box::new(CddSolution(r))) };
        if maximal {
            Ok(CddStatus::Ok)
        } else {
            set_error("some faces of the orthotope can still be pushed out");
            Ok(CddStatus::NotMaximal)
        }
    })
}

/// # Safety
/// `s` must be null or a handle from this library, not yet freed.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cdd_solution_free(s: *mut CddSolution) {
    if !s.is_null() {
        drop(unsafe { Box::from_raw(s) });
    }
}

/// Copies the interval bounds into `lo` and `hi`, each of length `len`.
///
/// # Safety
/// `s` must be a live handle; `lo` and `hi` valid for `len` values.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cdd_solution_bounds(
    s: *const CddSolution,
    lo: *mut f64,
    hi: *mut f64,
    len: usize,
) -> CddStatus {
    guard(|| {
        let s = unsafe { s.as_ref() }.ok_or_else(|| null("solution"))?;
        let lo = unsafe { slice_mut(lo, len, "lo") }?;
        let hi = unsafe { slice_mut(hi, len, "hi") }?;
        check_dim(s.0.orthotope.len(), len)?;
        for (j, iv) in s.0.orthotope.iter().enumerate() {
            lo[j] = iv.lo;
            hi[j] = iv.hi;
        }
        Ok(CddStatus::Ok)
    })
}

/// # Safety
/// `s` must be null or a live handle.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cdd_solution_is_maximal(s: *const CddSolution) -> bool {
    unsafe { s.as_ref() }.is_some_and(|s| s.0.certificate.is_maximal())
}

/// Serializes the solution (box, ranking, steps, certificate) as JSON.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cdd_solution_to_json(s: *const CddSolution, out: *mut *mut c_char) -> CddStatus {
    guard(|| {
        let s = unsafe { s.as_ref() }.ok_or_else(|| null("solution"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        give_string(s.0.to_json(), out)
    })
}

/// Checks every sentence of `theory` (one per line) against a structure
/// document and writes whether the structure is a model.
///
/// # Safety
/// `theory` and `structure_json` must be NUL-terminated; `is_model` writable.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cdd_logic_check(
    theory: *const c_char,
    structure_json: *const c_char,
    is_model: *mut bool,
) -> CddStatus {
    guard(|| {
        if is_model.is_null() {
            return Err(null("is_model"));
        }
        let theory = unsafe { text(theory, "theory") }?;
        let doc = StructureDocument::from_json(unsafe { text(structure_json, "structure_json") }?)
            .map_err(|e| fail(e.into()))?;
        let t = Theory::parse("theory", theory, doc.signature.clone()).map_err(|e| fail(e.into()))?;
        let verdict = check_theory(&t, &doc.structure, &doc.interpretation).map_err(|e| fail(e.into()))?;
        unsafe { *is_model = verdict.is_model() };
        Ok(CddStatus::Ok)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn panics_become_status_seven() {
        assert_eq!(guard(|| panic!("boom")), CddStatus::Panic);
        let msg = unsafe { CStr::from_ptr(cdd_last_error()) }.to_str().unwrap();
        assert!(msg.contains("boom"));
    }

    #[test]
    fn error_clears_on_success() {
        set_error("stale");
        assert_eq!(guard(|| Ok(CddStatus::Ok)), CddStatus::Ok);
        assert_eq!(unsafe { CStr::from_ptr(cdd_last_error()) }.to_bytes(), b"");
    }

    #[test]
    fn null_handles_are_harmless() {
        unsafe {
            cdd_problem_free(ptr::null_mut());
            cdd_solution_free(ptr::null_mut());
            cdd_string_free(ptr::null_mut());
            assert_eq!(cdd_problem_dimension(ptr::null()), 0);
            assert!(!cdd_solution_is_maximal(ptr::null()));
        }
    }
}
