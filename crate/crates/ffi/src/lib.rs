//! C ABI over `coxeter_chein`.
//!
//! Objects are opaque handles created by the `cc_*_from_text`,
//! `cc_group_enumerate` and `cc_loop_chein` constructors and released with
//! the matching `cc_*_free`. Every fallible function
//! returns a [`CcStatus`] and writes its result through an out-pointer; on
//! failure [`cc_last_error`] describes the problem. Strings returned by the
//! library are released with [`cc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use coxeter_chein::cli::{parse_input, run, Command, Input, RunConfig, RunError};
use coxeter_chein::cohomology::cohomology;
use coxeter_chein::coxeter::{enumerate_group, underlying_graph, CoxeterDiagram, EnumerationError, GroupTable};
use coxeter_chein::loop_core::{chein_loop, is_moufang, LoopTable};
use coxeter_chein::morphisms::{automorphism_group, MorphismError};
use coxeter_chein::table::Magma;

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    /// The input parsed but does not suit the operation.
    WrongInput = 4,
    /// Enumeration cap or search budget exceeded, or an infinite group.
    ResourceLimit = 5,
    OutOfRange = 6,
    Panic = 7,
}

/// A validated Coxeter diagram.
pub struct CcDiagram {
    inner: CoxeterDiagram,
}

/// A finite group given by its multiplication table.
pub struct CcGroup {
    inner: GroupTable,
}

/// A finite loop given by its multiplication table.
pub struct CcLoop {
    inner: LoopTable,
}

/// Dimensions of the cochain, cocycle, coboundary and cohomology spaces.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CcCohomologyDims {
    pub c0: usize,
    pub c1: usize,
    pub c2: usize,
    pub z1: usize,
    pub b1: usize,
    pub h1: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("no interior nul"));
}

struct Failure(CcStatus, String);

impl From<EnumerationError> for Failure {
    fn from(e: EnumerationError) -> Self {
        Failure(CcStatus::ResourceLimit, e.to_string())
    }
}

impl From<MorphismError> for Failure {
    fn from(e: MorphismError) -> Self {
        let status = match e {
            MorphismError::BudgetExceeded { .. } => CcStatus::ResourceLimit,
            _ => CcStatus::WrongInput,
        };
        Failure(status, e.to_string())
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        let status = match e {
            RunError::Io(_) => CcStatus::WrongInput,
            RunError::Parse(_) => CcStatus::ParseError,
            RunError::Unsupported(_) => CcStatus::WrongInput,
            RunError::Resource(_) => CcStatus::ResourceLimit,
        };
        Failure(status, e.to_string())
    }
}

/// Runs `f`, turning failures and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CcStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CcStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(CcStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(CcStatus::InvalidUtf8, e.to_string()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

fn parse(text: &str) -> Result<Input, Failure> {
    parse_input(text).map_err(|e| Failure(CcStatus::ParseError, e.to_string()))
}

/// Message for the most recent failure on this thread; empty after a
/// success. Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn cc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a `coxeter v1` document.
///
/// # Safety
/// `text_ptr` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cc_diagram_from_text(text_ptr: *const c_char, out: *mut *mut CcDiagram) -> CcStatus {
    guard(|| {
        let Input::Diagram(d) = parse(text(text_ptr)?)? else {
            return Err(Failure(CcStatus::WrongInput, "expected a `coxeter v1` document".into()));
        };
        write(out, Box::into_raw(Box::new(CcDiagram { inner: d })))
    })
}

/// # Safety
/// `d` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cc_diagram_free(d: *mut CcDiagram) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Number of Coxeter generators, or 0 for a null handle.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cc_diagram_rank(d: *const CcDiagram) -> usize {
    d.as_ref().map_or(0, |d| d.inner.rank())
}

/// Cohomology dimensions of the diagram's underlying graph.
///
/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cc_diagram_cohomology(d: *const CcDiagram, out: *mut CcCohomologyDims) -> CcStatus {
    guard(|| {
        let d = handle(d)?;
        let r =
            cohomology(&underlying_graph(&d.inner), false).map_err(|e| Failure(CcStatus::WrongInput, e.to_string()))?;
        write(
            out,
            CcCohomologyDims {
                c0: r.dim_c0,
                c1: r.dim_c1,
                c2: r.dim_c2,
                z1: r.dim_z1,
                b1: r.dim_b1,
                h1: r.dim_h1,
            },
        )
    })
}

/// Enumerates the Coxeter group of `d`, failing with
/// [`CcStatus::ResourceLimit`] above `cap` elements.
///
/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cc_group_enumerate(d: *const CcDiagram, cap: usize, out: *mut *mut CcGroup) -> CcStatus {
    guard(|| {
        let g = enumerate_group(&handle(d)?.inner, cap)?;
        write(out, Box::into_raw(Box::new(CcGroup { inner: g })))
    })
}

/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cc_group_free(g: *mut CcGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cc_group_order(g: *const CcGroup) -> usize {
    g.as_ref().map_or(0, |g| g.inner.order())
}

/// Builds the Chein loop `M(G,2)`: elements `0..|G|` are `G`, element
/// `|G| + g` is `g·u`.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cc_loop_chein(g: *const CcGroup, out: *mut *mut CcLoop) -> CcStatus {
    guard(|| {
        let l = chein_loop(&handle(g)?.inner);
        write(out, Box::into_raw(Box::new(CcLoop { inner: l })))
    })
}

/// Parses a `table v1` document as a loop with identity 0.
///
/// # Safety
/// `text_ptr` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cc_loop_from_text(text_ptr: *const c_char, out: *mut *mut CcLoop) -> CcStatus {
    guard(|| {
        let Input::Table(t) = parse(text(text_ptr)?)? else {
            return Err(Failure(CcStatus::WrongInput, "expected a `table v1` document".into()));
        };
        write(out, Box::into_raw(Box::new(CcLoop { inner: t })))
    })
}

/// # Safety
/// `l` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cc_loop_free(l: *mut CcLoop) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

/// # Safety
/// `l` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cc_loop_order(l: *const CcLoop) -> usize {
    l.as_ref().map_or(0, |l| l.inner.order())
}

/// `x·y`.
///
/// # Safety
/// `l` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cc_loop_product(l: *const CcLoop, x: usize, y: usize, out: *mut usize) -> CcStatus {
    guard(|| {
        let l = &handle(l)?.inner;
        let n = l.order();
        if x >= n || y >= n {
            return Err(Failure(
                CcStatus::OutOfRange,
                format!("element index out of range 0..{n}"),
            ));
        }
        write(out, l.mul(x, y))
    })
}

/// Whether all three Moufang identities hold.
///
/// # Safety
/// `l` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cc_loop_is_moufang(l: *const CcLoop, out: *mut bool) -> CcStatus {
    guard(|| {
        let r = is_moufang(&handle(l)?.inner);
        write(out, r.iter().all(|r| r.holds))
    })
}

/// `|Aut(L)|` by exhaustive search limited to `budget` nodes.
///
/// # Safety
/// `l` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cc_loop_aut_order(l: *const CcLoop, budget: u64, out: *mut usize) -> CcStatus {
    guard(|| {
        let a = automorphism_group(&handle(l)?.inner, budget)?;
        write(out, a.order())
    })
}

/// Runs a CLI command (`"parse"`, `"group"`, `"loop"`, `"aut"`,
/// `"cohomology"`, `"amalgams"`, `"verify"`) and returns its JSON report.
/// `input` may be null only for `"verify"`. `cap` and `budget` of 0 select
/// the defaults. `exit_code` receives the CLI exit code of the report (0 or
/// 2). The string must be released with [`cc_string_free`].
///
/// # Safety
/// String arguments must be nul-terminated; `out_json` and `exit_code`
/// must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cc_run_json(
    command: *const c_char,
    input: *const c_char,
    cap: usize,
    budget: u64,
    out_json: *mut *mut c_char,
    exit_code: *mut i32,
) -> CcStatus {
    guard(|| {
        if out_json.is_null() || exit_code.is_null() {
            return Err(null());
        }
        let name = text(command)?;
        let command = name
            .parse::<Command>()
            .map_err(|_| Failure(CcStatus::WrongInput, format!("unknown command `{name}`")))?;
        let input = if input.is_null() { None } else { Some(text(input)?) };
        let mut cfg = RunConfig::new(command);
        if cap > 0 {
            cfg.cap = cap;
        }
        if budget > 0 {
            cfg.budget = budget;
        }
        let report = run(&cfg, input)?;
        let json = CString::new(report.to_json()).expect("json has no nul");
        write(exit_code, report.exit_code())?;
        write(out_json, json.into_raw())
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
