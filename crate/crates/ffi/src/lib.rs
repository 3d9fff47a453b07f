//! C interface to `hodge_gauge`.
//!
//! Objects cross the boundary as opaque handles created by `hg_*_from_*`
//! functions and released by the matching `hg_*_free`. Every fallible call
//! returns an [`HgStatus`]; on anything but `HG_OK` a description is kept in a
//! thread-local slot readable through [`hg_last_error_message`]. Panics never
//! unwind into C: they are caught and reported as `HG_PANIC`.
//!
//! Strings handed out (`char **out`) are owned by the caller and must be
//! released with [`hg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hodge_gauge::cli::{run_text, Options, Status};
use hodge_gauge::connection::{connection_from_delta, EquivariantConnection};
use hodge_gauge::doc::{ConnectionDoc, DeltaDoc, Document, MhsDoc};
use hodge_gauge::holonomy::triangle_delta;
use hodge_gauge::mhs::ComplexMHS;
use hodge_gauge::splitting::{delta_operator, DeltaObject};
use hodge_gauge::Error;

/// Result codes. The first three agree with the command line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HgStatus {
    HgOk = 0,
    /// A mathematical condition failed (for instance opposedness).
    HgViolation = 1,
    /// The input could not be parsed or has inconsistent shapes.
    HgMalformed = 2,
    /// A required pointer argument was null.
    HgNullPointer = 3,
    /// A string argument was not valid UTF-8.
    HgInvalidUtf8 = 4,
    /// The library panicked; this is a bug.
    HgPanic = 5,
}

/// Opaque mixed Hodge structure (a filtration triple, possibly not opposed).
pub struct HgMhs(ComplexMHS);

/// Opaque δ datum: Hodge numbers and a unipotent δ.
pub struct HgDelta(DeltaObject);

/// Opaque equivariant connection.
pub struct HgConnection(EquivariantConnection);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

struct Failure(HgStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_input_error() { HgStatus::HgMalformed } else { HgStatus::HgViolation };
        Failure(code, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(HgStatus::HgNullPointer, format!("{what} is null"))
}

/// Runs `f` with panics caught and the error slot maintained.
fn guard(f: impl FnOnce() -> Result<HgStatus, Failure>) -> HgStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Failure(code, msg))) => {
            set_last_error(&msg);
            code
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            HgStatus::HgPanic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(HgStatus::HgInvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| Failure(HgStatus::HgPanic, "string with interior NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn parse_doc(text: &str) -> Result<Document, Failure> {
    Ok(Document::parse(text)?)
}

fn malformed(msg: String) -> Failure {
    Failure(HgStatus::HgMalformed, msg)
}

/// Message for the last failing call on this thread, or null. The pointer stays
/// valid until the next `hg_*` call on the same thread.
#[no_mangle]
pub extern "C" fn hg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static version string.
#[no_mangle]
pub extern "C" fn hg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned through a `char **out` argument. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn hg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an `mhs` document. Opposedness is not checked here.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_mhs_from_json(json: *const c_char, out: *mut *mut HgMhs) -> HgStatus {
    guard(|| {
        let doc = parse_doc(read_str(json, "json")?)?;
        let Document::Mhs(d) = doc else {
            return Err(malformed(format!("expected an mhs document, got {}", doc.kind())));
        };
        write_out(out, HgMhs(d.to_mhs()?), "out")?;
        Ok(HgStatus::HgOk)
    })
}

/// # Safety
/// `v` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn hg_mhs_free(v: *mut HgMhs) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_mhs_dim(v: *const HgMhs, out: *mut usize) -> HgStatus {
    guard(|| {
        let v = deref(v, "mhs")?;
        *out.as_mut().ok_or_else(|| null("out"))? = v.0.dim();
        Ok(HgStatus::HgOk)
    })
}

/// Checks opposedness. On success writes the Hodge numbers as JSON
/// (`[{"p":..,"q":..,"h":..}, ...]`); on failure returns `HG_VIOLATION`.
///
/// # Safety
/// `v` must be a live handle; `hodge_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_mhs_validate(v: *const HgMhs, hodge_json: *mut *mut c_char) -> HgStatus {
    guard(|| {
        let h = deref(v, "mhs")?.0.validate()?;
        write_string(hodge_json, serde_json::to_string(&h).expect("hodge numbers serialize"))?;
        Ok(HgStatus::HgOk)
    })
}

/// Serializes a structure back to its canonical document.
///
/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_mhs_to_json(v: *const HgMhs, out: *mut *mut c_char) -> HgStatus {
    guard(|| {
        let v = deref(v, "mhs")?;
        write_string(out, Document::Mhs(MhsDoc::from_mhs(None, &v.0)).to_json())?;
        Ok(HgStatus::HgOk)
    })
}

/// δ of a mixed Hodge structure in its canonical basis.
///
/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_delta_from_mhs(v: *const HgMhs, out: *mut *mut HgDelta) -> HgStatus {
    guard(|| {
        let d = delta_operator(&deref(v, "mhs")?.0)?;
        write_out(out, HgDelta(d), "out")?;
        Ok(HgStatus::HgOk)
    })
}

/// Parses a `delta` document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_delta_from_json(json: *const c_char, out: *mut *mut HgDelta) -> HgStatus {
    guard(|| {
        let doc = parse_doc(read_str(json, "json")?)?;
        let Document::Delta(d) = doc else {
            return Err(malformed(format!("expected a delta document, got {}", doc.kind())));
        };
        write_out(out, HgDelta(d.to_delta()?), "out")?;
        Ok(HgStatus::HgOk)
    })
}

/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_delta_to_json(d: *const HgDelta, out: *mut *mut c_char) -> HgStatus {
    guard(|| {
        let d = deref(d, "delta")?;
        write_string(out, Document::Delta(DeltaDoc::from_delta(None, &d.0)).to_json())?;
        Ok(HgStatus::HgOk)
    })
}

/// Writes 1 to `out` when the two data are identical, 0 otherwise.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_delta_equal(a: *const HgDelta, b: *const HgDelta, out: *mut i32) -> HgStatus {
    guard(|| {
        let eq = deref(a, "a")?.0 == deref(b, "b")?.0;
        *out.as_mut().ok_or_else(|| null("out"))? = i32::from(eq);
        Ok(HgStatus::HgOk)
    })
}

/// # Safety
/// `d` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn hg_delta_free(d: *mut HgDelta) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// The Fock-Schwinger connection whose triangle holonomy is δ.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_connection_from_delta(d: *const HgDelta, out: *mut *mut HgConnection) -> HgStatus {
    guard(|| {
        let c = connection_from_delta(&deref(d, "delta")?.0)?;
        write_out(out, HgConnection(c), "out")?;
        Ok(HgStatus::HgOk)
    })
}

/// Triangle holonomy of a connection, as a δ datum.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_connection_triangle_delta(c: *const HgConnection, out: *mut *mut HgDelta) -> HgStatus {
    guard(|| {
        let d = triangle_delta(&deref(c, "connection")?.0)?;
        write_out(out, HgDelta(d), "out")?;
        Ok(HgStatus::HgOk)
    })
}

/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_connection_to_json(c: *const HgConnection, out: *mut *mut c_char) -> HgStatus {
    guard(|| {
        let c = deref(c, "connection")?;
        write_string(out, Document::Connection(ConnectionDoc::from_connection(None, &c.0)).to_json())?;
        Ok(HgStatus::HgOk)
    })
}

/// # Safety
/// `c` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn hg_connection_free(c: *mut HgConnection) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Runs one command-line pipeline (`validate`, `split`, `connect`, `holonomy`,
/// `roundtrip`, `rees`, `ext`, `lie`) on a document and writes the JSON report.
/// The return value mirrors the report status; a report is written whenever
/// the status is `HG_OK`, `HG_VIOLATION` or `HG_MALFORMED`.
///
/// # Safety
/// `command` and `json` must be NUL-terminated strings; `report_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hg_run(
    command: *const c_char,
    json: *const c_char,
    report_json: *mut *mut c_char,
) -> HgStatus {
    guard(|| {
        let command = read_str(command, "command")?;
        let text = read_str(json, "json")?;
        let report = run_text(command, text, &Options::default());
        let body = serde_json::to_string_pretty(&report).expect("reports serialize");
        write_string(report_json, body)?;
        match report.status {
            Status::Pass => Ok(HgStatus::HgOk),
            s => {
                let code = if s == Status::Violation { HgStatus::HgViolation } else { HgStatus::HgMalformed };
                set_last_error(report.witness.as_deref().unwrap_or("check failed"));
                Ok(code)
            }
        }
    })
}
