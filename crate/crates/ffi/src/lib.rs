//! C interface. Objects are opaque heap handles released with the matching
//! `*_free`; every fallible call returns a `CatqStatus` and stores a message
//! retrievable with `catq_last_error`. Strings returned to the caller are
//! freed with `catq_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use catq::cartan::{gl_from_sl, CartanDatum};
use catq::functors::{FunctorSpec, GeneratorScaling};
use catq::params::{check_compat, symbolic_params, ParamSet, ParamsFile, SymbolNames};
use catq::ucat::bubble_value;
use catq::ucat::text::parse_weight;
use catq::verify::{verify, VerificationPlan, VerificationReport, WeightSample};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Invalid = 4,
    NoSolution = 5,
    Panic = 6,
}

/// Parameter set handle.
pub struct CatqParams(ParamSet);

/// Rescaling functor handle.
pub struct CatqFunctor(GeneratorScaling);

/// Verification report handle.
pub struct CatqReport(VerificationReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).expect("nul bytes removed"));
}

fn fail(code: CatqStatus, msg: impl Into<String>) -> CatqStatus {
    set_error(msg);
    code
}

fn guard(f: impl FnOnce() -> CatqStatus) -> CatqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == CatqStatus::Ok {
                set_error("");
            }
            s
        }
        Err(_) => fail(CatqStatus::Panic, "internal panic"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, CatqStatus> {
    if p.is_null() {
        return Err(fail(CatqStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(CatqStatus::InvalidUtf8, "argument is not UTF-8"))
}

fn out_string(s: String, out: *mut *mut c_char) -> CatqStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            CatqStatus::Ok
        }
        Err(_) => fail(CatqStatus::Invalid, "output contains a nul byte"),
    }
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Message for the most recent failure on this thread (empty after success).
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn catq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Free a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library.
#[no_mangle]
pub unsafe extern "C" fn catq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Load parameters from a JSON parameter file.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn catq_params_from_json(json: *const c_char, out: *mut *mut CatqParams) -> CatqStatus {
    guard(|| {
        if out.is_null() {
            return fail(CatqStatus::NullPointer, "null output pointer");
        }
        let s = try_status!(str_arg(json));
        match ParamsFile::from_json(s).and_then(|f| f.to_params()) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(CatqParams(p)));
                CatqStatus::Ok
            }
            Err(e) => fail(CatqStatus::Parse, e.to_string()),
        }
    })
}

/// Generic symbolic parameters over type A_rank (β = −1 when `cyclic`).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn catq_params_symbolic_a(rank: u32, cyclic: bool, out: *mut *mut CatqParams) -> CatqStatus {
    guard(|| {
        if out.is_null() {
            return fail(CatqStatus::NullPointer, "null output pointer");
        }
        if rank == 0 {
            return fail(CatqStatus::Invalid, "rank must be positive");
        }
        match symbolic_params(&CartanDatum::type_a(rank), &SymbolNames::default(), cyclic) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(CatqParams(p)));
                CatqStatus::Ok
            }
            Err(e) => fail(CatqStatus::Invalid, e.to_string()),
        }
    })
}

/// Serialize parameters back to JSON.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn catq_params_to_json(p: *const CatqParams, out: *mut *mut c_char) -> CatqStatus {
    guard(|| {
        if p.is_null() || out.is_null() {
            return fail(CatqStatus::NullPointer, "null argument");
        }
        match ParamsFile::from_params(&(*p).0) {
            Ok(f) => out_string(f.to_json(), out),
            Err(e) => fail(CatqStatus::Invalid, e.to_string()),
        }
    })
}

/// # Safety
/// `p` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn catq_params_free(p: *mut CatqParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Count compatibility violations on the window [−window, window].
///
/// # Safety
/// `p` must be a live handle and `violations` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn catq_params_check(p: *const CatqParams, window: i64, violations: *mut usize) -> CatqStatus {
    guard(|| {
        if p.is_null() || violations.is_null() {
            return fail(CatqStatus::NullPointer, "null argument");
        }
        if window < 0 {
            return fail(CatqStatus::Invalid, "window must be >= 0");
        }
        let p = &(*p).0;
        let ws = match (WeightSample::Window { lo: -window, hi: window }).weights(p) {
            Ok(w) => w,
            Err(e) => return fail(CatqStatus::Invalid, e.to_string()),
        };
        let rep = check_compat(p, &ws);
        *violations = rep.violations.len() + rep.errors.len();
        CatqStatus::Ok
    })
}

/// Value of the bubble at vertex label `vertex`, weight text `weight`
/// (`[a,b]` or `(a,b,c)`) with `dots` dots.
///
/// # Safety
/// `p` must be a live handle, `weight` a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn catq_bubble_eval(
    p: *const CatqParams,
    vertex: u32,
    weight: *const c_char,
    dots: i64,
    clockwise: bool,
    out: *mut *mut c_char,
) -> CatqStatus {
    guard(|| {
        if p.is_null() || out.is_null() {
            return fail(CatqStatus::NullPointer, "null argument");
        }
        let p = &(*p).0;
        let w = try_status!(str_arg(weight));
        let i = match p.datum.index_of(vertex) {
            Ok(i) => i,
            Err(e) => return fail(CatqStatus::Invalid, e.to_string()),
        };
        let lam = match parse_weight(&p.datum, w) {
            Ok(l) => l,
            Err(e) => return fail(CatqStatus::Parse, e.to_string()),
        };
        match bubble_value(i, &lam, dots, clockwise, p) {
            Ok(v) => out_string(v.to_string(), out),
            Err(e) => fail(CatqStatus::Invalid, e.to_string()),
        }
    })
}

/// Write φ_{n,d}(μ) into `entries` (length n). Returns `NoSolution` when
/// d is in the wrong residue class.
///
/// # Safety
/// `mu` must point to n−1 values and `entries` to room for n.
#[no_mangle]
pub unsafe extern "C" fn catq_weights_glmap(n: usize, d: i64, mu: *const i64, entries: *mut i64) -> CatqStatus {
    guard(|| {
        if mu.is_null() || entries.is_null() {
            return fail(CatqStatus::NullPointer, "null argument");
        }
        if n < 2 {
            return fail(CatqStatus::Invalid, "n must be >= 2");
        }
        let mu = std::slice::from_raw_parts(mu, n - 1);
        match gl_from_sl(n, d, mu) {
            Some(w) => {
                std::slice::from_raw_parts_mut(entries, n).copy_from_slice(&w.entries);
                CatqStatus::Ok
            }
            None => fail(CatqStatus::NoSolution, "no gl weight with this coordinate sum"),
        }
    })
}

/// Build a functor from a spec JSON (`{"functor": .., "source": .., ..}`).
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn catq_functor_from_json(json: *const c_char, out: *mut *mut CatqFunctor) -> CatqStatus {
    guard(|| {
        if out.is_null() {
            return fail(CatqStatus::NullPointer, "null output pointer");
        }
        let s = try_status!(str_arg(json));
        match FunctorSpec::from_json(s).and_then(|f| f.build()) {
            Ok(f) => {
                *out = Box::into_raw(Box::new(CatqFunctor(f)));
                CatqStatus::Ok
            }
            Err(e) => fail(CatqStatus::Parse, e.to_string()),
        }
    })
}

/// Identity functor on a parameter set.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn catq_functor_identity(p: *const CatqParams, out: *mut *mut CatqFunctor) -> CatqStatus {
    guard(|| {
        if p.is_null() || out.is_null() {
            return fail(CatqStatus::NullPointer, "null argument");
        }
        let f = GeneratorScaling::identity(Arc::new((*p).0.clone()));
        *out = Box::into_raw(Box::new(CatqFunctor(f)));
        CatqStatus::Ok
    })
}

/// # Safety
/// `f` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn catq_functor_free(f: *mut CatqFunctor) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Check every relation on the window [−window, window] (0 threads = default).
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn catq_functor_verify(
    f: *const CatqFunctor,
    window: i64,
    threads: usize,
    out: *mut *mut CatqReport,
) -> CatqStatus {
    guard(|| {
        if f.is_null() || out.is_null() {
            return fail(CatqStatus::NullPointer, "null argument");
        }
        if window < 0 {
            return fail(CatqStatus::Invalid, "window must be >= 0");
        }
        let mut plan = VerificationPlan::new((*f).0.clone(), -window, window);
        plan.threads = threads;
        match verify(&plan) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(CatqReport(r)));
                CatqStatus::Ok
            }
            Err(e) => fail(CatqStatus::Invalid, e.to_string()),
        }
    })
}

/// True when no instance failed.
///
/// # Safety
/// `r` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn catq_report_passed(r: *const CatqReport) -> bool {
    !r.is_null() && (*r).0.ok()
}

/// Instance counts of a report.
///
/// # Safety
/// `r` must be a live handle; output pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn catq_report_counts(
    r: *const CatqReport,
    checked: *mut usize,
    failed: *mut usize,
    skipped: *mut usize,
) -> CatqStatus {
    if r.is_null() {
        return fail(CatqStatus::NullPointer, "null report");
    }
    let r = &(*r).0;
    for (p, v) in [(checked, r.checked), (failed, r.failed), (skipped, r.skipped)] {
        if !p.is_null() {
            *p = v;
        }
    }
    CatqStatus::Ok
}

/// Report as JSON.
///
/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn catq_report_to_json(r: *const CatqReport, out: *mut *mut c_char) -> CatqStatus {
    guard(|| {
        if r.is_null() || out.is_null() {
            return fail(CatqStatus::NullPointer, "null argument");
        }
        out_string(serde_json::to_string_pretty(&(*r).0).expect("reports serialize"), out)
    })
}

/// # Safety
/// `r` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn catq_report_free(r: *mut CatqReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
