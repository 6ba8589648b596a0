//! C ABI over the core library: opaque handles, integer status codes,
//! UTF-8 in, caller-freed strings out.
//!
//! Every fallible call returns a `PerciteStatus`. On failure the
//! out-parameters are left untouched and a thread-local message is
//! available from percite_last_error_message() until the next failing
//! call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use percite::corpus::{Corpus, Format};
use percite::indicators::{i3, CountBasis, Indicator};
use percite::percentile::{percentile_of, PercentileScheme, TieRule};
use percite::report::build_report;
use percite::Error;

/// Opaque corpus handle. Created by percite_corpus_parse(), released by
/// percite_corpus_free().
pub struct PerciteCorpus(Corpus);

/// Opaque percentile-scheme handle. Created by percite_scheme_builtin()
/// or percite_scheme_from_json(), released by percite_scheme_free().
pub struct PerciteScheme(PercentileScheme);

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerciteStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Input text could not be parsed (corpus, scheme JSON).
    ParseError = 3,
    /// Parsed but violated a precondition (unknown key, bad value).
    InvalidInput = 4,
    /// The requested statistic is undefined for these inputs.
    Undefined = 5,
    /// Failure inside the library, not attributable to the inputs.
    InternalError = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: PerciteStatus, msg: &str) -> PerciteStatus {
    let bytes: Vec<u8> = msg.bytes().filter(|&b| b != 0).collect();
    let msg = CString::new(bytes).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = msg);
    status
}

fn fail_with(e: &Error) -> PerciteStatus {
    let status = match e {
        Error::Parse(_) => PerciteStatus::ParseError,
        Error::Undefined(_) => PerciteStatus::Undefined,
        Error::Io(_) => PerciteStatus::InternalError,
        _ => PerciteStatus::InvalidInput,
    };
    fail(status, &e.to_string())
}

/// Borrows a required UTF-8 string argument.
unsafe fn required_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, PerciteStatus> {
    if ptr.is_null() {
        return Err(fail(PerciteStatus::NullPointer, &format!("{what} is NULL")));
    }
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|_| fail(PerciteStatus::InvalidUtf8, &format!("{what} is not valid UTF-8")))
}

/// NULL means the default (midpoint).
unsafe fn tie_rule_arg(ptr: *const c_char) -> Result<TieRule, PerciteStatus> {
    if ptr.is_null() {
        return Ok(TieRule::default());
    }
    unsafe { required_str(ptr, "tie_rule") }?
        .parse()
        .map_err(|e: Error| fail_with(&e))
}

fn required_out<T>(ptr: *mut T, what: &str) -> Result<(), PerciteStatus> {
    if ptr.is_null() {
        Err(fail(PerciteStatus::NullPointer, &format!("{what} is NULL")))
    } else {
        Ok(())
    }
}

unsafe fn borrow_corpus<'a>(ptr: *const PerciteCorpus) -> Result<&'a Corpus, PerciteStatus> {
    if ptr.is_null() {
        return Err(fail(PerciteStatus::NullPointer, "corpus is NULL"));
    }
    Ok(unsafe { &(*ptr).0 })
}

unsafe fn borrow_scheme<'a>(ptr: *const PerciteScheme) -> Result<&'a PercentileScheme, PerciteStatus> {
    if ptr.is_null() {
        return Err(fail(PerciteStatus::NullPointer, "scheme is NULL"));
    }
    Ok(unsafe { &(*ptr).0 })
}

/// Returns the thread-local message for the most recent failure on this
/// thread, or an empty string when nothing has failed yet.
///
/// The pointer stays valid until the next failing call on the same
/// thread; do not free it.
///
/// # Safety
/// Always safe to call.
#[no_mangle]
pub unsafe extern "C" fn percite_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parses a corpus from `data` in the named `format` ("csv" or "jsonl")
/// and stores a new handle in `*out`.
///
/// # Safety
/// `data` and `format` must be NUL-terminated strings; `out` must point
/// to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn percite_corpus_parse(
    data: *const c_char,
    format: *const c_char,
    out: *mut *mut PerciteCorpus,
) -> PerciteStatus {
    if let Err(status) = required_out(out, "out") {
        return status;
    }
    let data = match unsafe { required_str(data, "data") } {
        Ok(s) => s,
        Err(status) => return status,
    };
    let format = match unsafe { required_str(format, "format") } {
        Ok("csv") => Format::Csv,
        Ok("jsonl") => Format::Jsonl,
        Ok(other) => {
            return fail(
                PerciteStatus::InvalidInput,
                &format!("unknown format {other:?} (expected csv or jsonl)"),
            );
        }
        Err(status) => return status,
    };
    match Corpus::ingest(data.as_bytes(), format) {
        Ok(corpus) => {
            unsafe { *out = Box::into_raw(Box::new(PerciteCorpus(corpus))) };
            PerciteStatus::Ok
        }
        Err(e) => fail_with(&e),
    }
}

/// Releases a corpus handle. NULL is a no-op.
///
/// # Safety
/// `corpus` must be a handle from percite_corpus_parse() that has not
/// already been freed.
#[no_mangle]
pub unsafe extern "C" fn percite_corpus_free(corpus: *mut PerciteCorpus) {
    if !corpus.is_null() {
        drop(unsafe { Box::from_raw(corpus) });
    }
}

/// Stores the number of papers in `*out`.
///
/// # Safety
/// `corpus` must be a live handle; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn percite_corpus_paper_count(
    corpus: *const PerciteCorpus,
    out: *mut usize,
) -> PerciteStatus {
    if let Err(status) = required_out(out, "out") {
        return status;
    }
    match unsafe { borrow_corpus(corpus) } {
        Ok(c) => {
            unsafe { *out = c.len() };
            PerciteStatus::Ok
        }
        Err(status) => status,
    }
}

/// Stores a handle to the named builtin scheme ("quartiles", "nsb6" or
/// "top10") in `*out`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must point to writable
/// storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn percite_scheme_builtin(
    name: *const c_char,
    out: *mut *mut PerciteScheme,
) -> PerciteStatus {
    if let Err(status) = required_out(out, "out") {
        return status;
    }
    let name = match unsafe { required_str(name, "name") } {
        Ok(s) => s,
        Err(status) => return status,
    };
    match PercentileScheme::builtin(name) {
        Some(scheme) => {
            unsafe { *out = Box::into_raw(Box::new(PerciteScheme(scheme))) };
            PerciteStatus::Ok
        }
        None => fail(
            PerciteStatus::InvalidInput,
            &format!(
                "unknown builtin scheme {name:?} (expected {})",
                PercentileScheme::BUILTIN_NAMES.join(", ")
            ),
        ),
    }
}

/// Parses a scheme from its JSON form
/// `{"name": ..., "boundaries": [...], "weights": [...]}` and stores a
/// handle in `*out`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must point to writable
/// storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn percite_scheme_from_json(
    json: *const c_char,
    out: *mut *mut PerciteScheme,
) -> PerciteStatus {
    if let Err(status) = required_out(out, "out") {
        return status;
    }
    let json = match unsafe { required_str(json, "json") } {
        Ok(s) => s,
        Err(status) => return status,
    };
    match PercentileScheme::from_json(json) {
        Ok(scheme) => {
            unsafe { *out = Box::into_raw(Box::new(PerciteScheme(scheme))) };
            PerciteStatus::Ok
        }
        Err(e) => fail_with(&e),
    }
}

/// Releases a scheme handle. NULL is a no-op.
///
/// # Safety
/// `scheme` must be a handle from a scheme constructor that has not
/// already been freed.
#[no_mangle]
pub unsafe extern "C" fn percite_scheme_free(scheme: *mut PerciteScheme) {
    if !scheme.is_null() {
        drop(unsafe { Box::from_raw(scheme) });
    }
}

/// Stores in `*out` the percentile of `value` within the reference set
/// named `refset_key`. `tie_rule` is "strictly_below", "below_or_equal"
/// or "midpoint"; NULL means midpoint.
///
/// # Safety
/// `corpus` must be a live handle; `refset_key` must be a NUL-terminated
/// string; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn percite_percentile_of(
    corpus: *const PerciteCorpus,
    refset_key: *const c_char,
    value: f64,
    tie_rule: *const c_char,
    out: *mut f64,
) -> PerciteStatus {
    if let Err(status) = required_out(out, "out") {
        return status;
    }
    let corpus = match unsafe { borrow_corpus(corpus) } {
        Ok(c) => c,
        Err(status) => return status,
    };
    let key = match unsafe { required_str(refset_key, "refset_key") } {
        Ok(s) => s,
        Err(status) => return status,
    };
    let rule = match unsafe { tie_rule_arg(tie_rule) } {
        Ok(r) => r,
        Err(status) => return status,
    };
    if !value.is_finite() {
        return fail(
            PerciteStatus::InvalidInput,
            &format!("value {value} is not finite"),
        );
    }
    match corpus.refset(key) {
        Some(refset) => {
            unsafe { *out = percentile_of(value, refset, rule) };
            PerciteStatus::Ok
        }
        None => fail(
            PerciteStatus::InvalidInput,
            &format!("unknown reference set {key:?}"),
        ),
    }
}

/// Scores the whole corpus on integer counts and stores the class-weighted
/// sum in `*out_classed` and the percentile sum in `*out_quantile`.
/// `tie_rule` NULL means midpoint.
///
/// # Safety
/// `corpus` and `scheme` must be live handles; both out-pointers must
/// point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn percite_i3(
    corpus: *const PerciteCorpus,
    scheme: *const PerciteScheme,
    tie_rule: *const c_char,
    out_classed: *mut f64,
    out_quantile: *mut f64,
) -> PerciteStatus {
    if let Err(status) = required_out(out_classed, "out_classed") {
        return status;
    }
    if let Err(status) = required_out(out_quantile, "out_quantile") {
        return status;
    }
    let corpus = match unsafe { borrow_corpus(corpus) } {
        Ok(c) => c,
        Err(status) => return status,
    };
    let scheme = match unsafe { borrow_scheme(scheme) } {
        Ok(s) => s,
        Err(status) => return status,
    };
    let rule = match unsafe { tie_rule_arg(tie_rule) } {
        Ok(r) => r,
        Err(status) => return status,
    };
    let papers: Vec<_> = corpus.papers().iter().collect();
    match i3(&papers, corpus, scheme, rule, CountBasis::Cited) {
        Ok(result) => {
            unsafe {
                *out_classed = result.i3_classed;
                *out_quantile = result.i3_quantile;
            }
            PerciteStatus::Ok
        }
        Err(e) => fail_with(&e),
    }
}

/// Builds the per-unit report for `dimension` on integer counts and
/// stores it as a JSON string in `*out`. `indicator` orders the rows
/// ("i3_classed", "i3_quantile", "rcr", "mncs" or "exergy"; NULL means
/// i3_quantile). `tie_rule` NULL means midpoint. Free the string with
/// percite_string_free().
///
/// # Safety
/// `corpus` and `scheme` must be live handles; `dimension` must be a
/// NUL-terminated string; `out` must point to writable storage for one
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn percite_report_json(
    corpus: *const PerciteCorpus,
    scheme: *const PerciteScheme,
    dimension: *const c_char,
    indicator: *const c_char,
    tie_rule: *const c_char,
    out: *mut *mut c_char,
) -> PerciteStatus {
    if let Err(status) = required_out(out, "out") {
        return status;
    }
    let corpus = match unsafe { borrow_corpus(corpus) } {
        Ok(c) => c,
        Err(status) => return status,
    };
    let scheme = match unsafe { borrow_scheme(scheme) } {
        Ok(s) => s,
        Err(status) => return status,
    };
    let dimension = match unsafe { required_str(dimension, "dimension") } {
        Ok(s) => s,
        Err(status) => return status,
    };
    let indicator = if indicator.is_null() {
        Indicator::I3Quantile
    } else {
        match unsafe { required_str(indicator, "indicator") } {
            Ok(s) => match s.parse() {
                Ok(i) => i,
                Err(e) => return fail_with(&e),
            },
            Err(status) => return status,
        }
    };
    let rule = match unsafe { tie_rule_arg(tie_rule) } {
        Ok(r) => r,
        Err(status) => return status,
    };
    match build_report(corpus, dimension, indicator, scheme, rule, CountBasis::Cited) {
        Ok(report) => {
            let json = report.to_json();
            let c = CString::new(json).expect("JSON has no NULs");
            unsafe { *out = c.into_raw() };
            PerciteStatus::Ok
        }
        Err(e) => fail_with(&e),
    }
}

/// Releases a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must be a string returned by this library that has not already
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn percite_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
