//! C ABI over the quadeq engine.
//!
//! Words and equation parameters live behind opaque handles. Every entry
//! point returns a [`QuadeqStatus`]; on failure the message is available
//! from [`quadeq_last_error`] until the next call on the same thread.
//! Strings returned through `out` parameters are owned by the caller and
//! released with [`quadeq_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use quadeq::classify::{classify, verify_tables, Budgets, Verdict};
use quadeq::cli::classification_json;
use quadeq::fgword::{parse_word, verify_solution, BasisTag, EquationSpec, Frame, Sign, SolutionClass, Word};
use quadeq::grind::q_n;
use quadeq::surface::project;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadeqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    InvalidArgument = 4,
    Mismatch = 5,
    Computation = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadeqBasis {
    Adapted = 0,
    Classic = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadeqVerdict {
    Exists = 0,
    NotExists = 1,
    Undetermined = 2,
}

/// A reduced word in a fixed basis.
pub struct QuadeqWord(Word);

/// The parameters `(δ, ε, ϑ)`, the solution class and the frame.
pub struct QuadeqSpec(EquationSpec);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &quadeq::Error) -> QuadeqStatus {
    use quadeq::Error as E;
    match e {
        E::Syntax { .. } => QuadeqStatus::Syntax,
        E::InvalidArgument(_) => QuadeqStatus::InvalidArgument,
        E::BasisMismatch | E::EpsilonMismatch | E::DomainMismatch | E::CaseMismatch(..) | E::NotMixedCase(_) => {
            QuadeqStatus::Mismatch
        }
        _ => QuadeqStatus::Computation,
    }
}

type Failure = (QuadeqStatus, String);

fn fail(e: quadeq::Error) -> Failure {
    (status_of(&e), e.to_string())
}

/// Runs `f`, recording the message of any failure or panic.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QuadeqStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QuadeqStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QuadeqStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err((QuadeqStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (QuadeqStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or((QuadeqStatus::NullPointer, "null handle".into()))
}

fn out<T>(p: *mut T, v: T) -> Result<(), Failure> {
    if p.is_null() {
        return Err((QuadeqStatus::NullPointer, "null output pointer".into()));
    }
    unsafe { p.write(v) };
    Ok(())
}

fn sign(v: i32) -> Result<Sign, Failure> {
    Sign::from_i64(v as i64).ok_or((QuadeqStatus::InvalidArgument, format!("not a sign: {v}")))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// The message of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn quadeq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn quadeq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `text` as a word of the given basis over the group of sign `epsilon` (±1).
///
/// # Safety
/// `text` is a NUL-terminated string; `out_word` is writable.
#[no_mangle]
pub unsafe extern "C" fn quadeq_word_parse(
    text: *const c_char,
    epsilon: i32,
    basis: QuadeqBasis,
    out_word: *mut *mut QuadeqWord,
) -> QuadeqStatus {
    guard(|| {
        let text = str_arg(text)?;
        let eps = sign(epsilon)?;
        let tag = match basis {
            QuadeqBasis::Adapted => BasisTag::adapted(eps),
            QuadeqBasis::Classic => BasisTag::classic(eps),
        };
        let w = parse_word(text, tag).map_err(fail)?;
        out(out_word, Box::into_raw(Box::new(QuadeqWord(w))))
    })
}

/// # Safety
/// `word` is null or a live handle from [`quadeq_word_parse`].
#[no_mangle]
pub unsafe extern "C" fn quadeq_word_free(word: *mut QuadeqWord) {
    if !word.is_null() {
        drop(Box::from_raw(word));
    }
}

/// The display form of `word`.
///
/// # Safety
/// `word` is a live handle; `out_text` is writable.
#[no_mangle]
pub unsafe extern "C" fn quadeq_word_to_string(word: *const QuadeqWord, out_text: *mut *mut c_char) -> QuadeqStatus {
    guard(|| {
        let w = handle(word)?;
        out(out_text, c_string(w.0.to_string()))
    })
}

/// The canonical form `ᾱ^r β̄^s` of the image of `word` in π.
///
/// # Safety
/// `word` is a live handle; `out_r` and `out_s` are writable.
#[no_mangle]
pub unsafe extern "C" fn quadeq_word_project(word: *const QuadeqWord, out_r: *mut i64, out_s: *mut i64) -> QuadeqStatus {
    guard(|| {
        let p = project(&handle(word)?.0);
        out(out_r, p.r)?;
        out(out_s, p.s)
    })
}

/// The image of a word of the normal closure of R in Z[π], as text.
///
/// # Safety
/// `word` is a live handle; `out_text` is writable.
#[no_mangle]
pub unsafe extern "C" fn quadeq_qn(word: *const QuadeqWord, out_text: *mut *mut c_char) -> QuadeqStatus {
    guard(|| {
        let x = q_n(&handle(word)?.0).map_err(fail)?;
        out(out_text, c_string(x.to_string()))
    })
}

/// Creates equation parameters; signs are ±1, `basis` selects the frame.
///
/// # Safety
/// `out_spec` is writable.
#[no_mangle]
pub unsafe extern "C" fn quadeq_spec_new(
    delta: i32,
    epsilon: i32,
    theta: i32,
    faithful: bool,
    basis: QuadeqBasis,
    out_spec: *mut *mut QuadeqSpec,
) -> QuadeqStatus {
    guard(|| {
        let class = if faithful { SolutionClass::Faithful } else { SolutionClass::NonFaithful };
        let mut spec = EquationSpec::adapted(sign(delta)?, sign(epsilon)?, sign(theta)?, class);
        if basis == QuadeqBasis::Classic {
            spec.frame = Frame::OriginalZ;
        }
        out(out_spec, Box::into_raw(Box::new(QuadeqSpec(spec))))
    })
}

/// # Safety
/// `spec` is null or a live handle from [`quadeq_spec_new`].
#[no_mangle]
pub unsafe extern "C" fn quadeq_spec_free(spec: *mut QuadeqSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Substitutes `(first, second)` into the equation with parameter `v`.
///
/// # Safety
/// All handles are live; the output pointers are writable.
#[no_mangle]
pub unsafe extern "C" fn quadeq_verify_solution(
    spec: *const QuadeqSpec,
    v: *const QuadeqWord,
    first: *const QuadeqWord,
    second: *const QuadeqWord,
    out_holds: *mut bool,
    out_faithful: *mut bool,
) -> QuadeqStatus {
    guard(|| {
        let c = verify_solution(&handle(spec)?.0, &handle(v)?.0, &handle(first)?.0, &handle(second)?.0).map_err(fail)?;
        out(out_holds, c.holds)?;
        out(out_faithful, c.faithful)
    })
}

/// Classifies the equation with parameter `v`. `wicks_len` bounds the
/// Wicks search (0 selects the default). The JSON line of the command-line
/// tool is written to `out_json` when it is not null.
///
/// # Safety
/// Handles are live; `out_verdict` is writable; `out_json` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn quadeq_classify(
    spec: *const QuadeqSpec,
    v: *const QuadeqWord,
    wicks_len: u32,
    out_verdict: *mut QuadeqVerdict,
    out_json: *mut *mut c_char,
) -> QuadeqStatus {
    guard(|| {
        let spec = handle(spec)?;
        let v = handle(v)?;
        let mut budgets = Budgets::default();
        if wicks_len > 0 {
            budgets.wicks_len = wicks_len as usize;
        }
        let c = classify(&spec.0, &v.0, &budgets).map_err(fail)?;
        let verdict = match c.verdict {
            Verdict::Exists { .. } => QuadeqVerdict::Exists,
            Verdict::NotExists { .. } => QuadeqVerdict::NotExists,
            Verdict::Undetermined { .. } => QuadeqVerdict::Undetermined,
        };
        out(out_verdict, verdict)?;
        if !out_json.is_null() {
            out(out_json, c_string(classification_json(&v.0.to_string(), &c, &budgets).to_string()))?;
        }
        Ok(())
    })
}

/// Runs every table fixture; `out_failures` receives the failure count.
///
/// # Safety
/// The output pointers are writable.
#[no_mangle]
pub unsafe extern "C" fn quadeq_verify_tables(out_checked: *mut u64, out_failures: *mut u64) -> QuadeqStatus {
    guard(|| {
        let r = verify_tables();
        out(out_checked, r.checked as u64)?;
        out(out_failures, r.failures.len() as u64)
    })
}
