//! C interface to `obf-core`: foliations behind opaque handles, JSON strings in
//! and out, status codes for every call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use obf_core::cli::doc::{foliation_document, DocKind, Document, TraceDoc};
use obf_core::foliation::{census, validate, FoliatedSurface};
use obf_core::reduce::{reduce_composite, reduce_split, Mode, Outcome, ReductionInput};
use obf_core::ObfError;

/// Result of every fallible call. Details are in [`obf_last_error`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObfStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// The input could not be parsed as a document of the expected kind.
    Malformed = 3,
    /// A move guard or reduction hypothesis failed.
    Guard = 4,
    /// The foliation breaks a structural invariant.
    Invalid = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObfMode {
    Split = 0,
    Composite = 1,
}

/// Opaque foliation handle.
pub struct ObfFoliation {
    inner: FoliatedSurface,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn fail(status: ObfStatus, msg: impl Into<String>) -> ObfStatus {
    set_error(msg);
    status
}

fn from_core(e: ObfError) -> ObfStatus {
    let status = match e {
        ObfError::Document(_) | ObfError::Json(_) | ObfError::Surface(_) | ObfError::Curve(_) => {
            ObfStatus::Malformed
        }
        _ => ObfStatus::Guard,
    };
    fail(status, e.to_string())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, ObfStatus> {
    if s.is_null() {
        return Err(fail(ObfStatus::NullArgument, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| fail(ObfStatus::InvalidUtf8, e.to_string()))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> ObfStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            ObfStatus::Ok
        }
        Err(e) => fail(ObfStatus::Malformed, e.to_string()),
    }
}

unsafe fn handle<'a>(f: *const ObfFoliation) -> Result<&'a FoliatedSurface, ObfStatus> {
    f.as_ref()
        .map(|h| &h.inner)
        .ok_or_else(|| fail(ObfStatus::NullArgument, "null foliation"))
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Library version as a static NUL-terminated string. Never free it.
#[no_mangle]
pub extern "C" fn obf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or an empty string.
///
/// # Safety
/// The pointer stays valid until the next failing call on the same thread and
/// must not be freed.
#[no_mangle]
pub unsafe extern "C" fn obf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parse a foliation document (or a bare foliation payload).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer. On
/// success `*out` owns a handle to release with [`obf_foliation_free`].
#[no_mangle]
pub unsafe extern "C" fn obf_foliation_from_json(
    json: *const c_char,
    out: *mut *mut ObfFoliation,
) -> ObfStatus {
    if out.is_null() {
        return fail(ObfStatus::NullArgument, "null output");
    }
    let text = tri!(read_str(json));
    match Document::parse::<FoliatedSurface>(text, DocKind::Foliation) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(ObfFoliation { inner }));
            ObfStatus::Ok
        }
        Err(e) => from_core(e),
    }
}

/// # Safety
/// `f` must come from [`obf_foliation_from_json`] and not be freed twice.
/// Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn obf_foliation_free(f: *mut ObfFoliation) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Canonical foliation document for `f`.
///
/// # Safety
/// `f` must be a live handle and `out` writable. Free `*out` with
/// [`obf_string_free`].
#[no_mangle]
pub unsafe extern "C" fn obf_foliation_to_json(
    f: *const ObfFoliation,
    out: *mut *mut c_char,
) -> ObfStatus {
    let f = tri!(handle(f));
    if out.is_null() {
        return fail(ObfStatus::NullArgument, "null output");
    }
    match foliation_document(f) {
        Ok(s) => write_string(out, s),
        Err(e) => from_core(e),
    }
}

/// `Ok` when `f` satisfies every structural invariant, `Invalid` otherwise
/// with the violations in [`obf_last_error`].
///
/// # Safety
/// `f` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn obf_validate(f: *const ObfFoliation) -> ObfStatus {
    let f = tri!(handle(f));
    let rep = validate(f);
    if rep.is_valid() {
        ObfStatus::Ok
    } else {
        let lines: Vec<String> = rep.violations.iter().map(|x| x.to_string()).collect();
        fail(ObfStatus::Invalid, lines.join("\n"))
    }
}

/// Census of `f` as JSON.
///
/// # Safety
/// `f` must be a live handle and `out` writable. Free `*out` with
/// [`obf_string_free`].
#[no_mangle]
pub unsafe extern "C" fn obf_census_json(
    f: *const ObfFoliation,
    out: *mut *mut c_char,
) -> ObfStatus {
    let f = tri!(handle(f));
    if out.is_null() {
        return fail(ObfStatus::NullArgument, "null output");
    }
    match serde_json::to_string(&census(f)) {
        Ok(s) => write_string(out, s),
        Err(e) => fail(ObfStatus::Malformed, e.to_string()),
    }
}

/// Reduce `f` and write the trace document to `*out`. An obstruction still
/// yields the trace and returns `Guard`.
///
/// # Safety
/// `f` must be a live handle and `out` writable. Free `*out` with
/// [`obf_string_free`].
#[no_mangle]
pub unsafe extern "C" fn obf_reduce_json(
    f: *const ObfFoliation,
    mode: ObfMode,
    out: *mut *mut c_char,
) -> ObfStatus {
    let f = tri!(handle(f));
    if out.is_null() {
        return fail(ObfStatus::NullArgument, "null output");
    }
    let input = ReductionInput {
        foliation: f.clone(),
        fdtc: Default::default(),
        mode: match mode {
            ObfMode::Split => Mode::Split,
            ObfMode::Composite => Mode::Composite,
        },
    };
    let trace = match mode {
        ObfMode::Split => reduce_split(&input),
        ObfMode::Composite => reduce_composite(&input),
    };
    let trace = match trace {
        Ok(t) => t,
        Err(e) => return from_core(e),
    };
    let obstructed = matches!(trace.outcome, Outcome::Obstruction(_));
    let doc = match Document::wrap(DocKind::Trace, &TraceDoc { input, trace })
        .and_then(|d| d.to_json())
    {
        Ok(d) => d,
        Err(e) => return from_core(e),
    };
    let status = write_string(out, doc);
    if status == ObfStatus::Ok && obstructed {
        return fail(ObfStatus::Guard, "reduction obstructed");
    }
    status
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn obf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
