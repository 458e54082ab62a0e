//! C interface to qhcat.
//!
//! Categories and certificates are opaque handles owned by the caller and released with the
//! matching `*_free` function. Every fallible call returns a [`QhcatStatus`]; the message of the
//! last failure on the calling thread is available from [`qhcat_last_error`]. Strings returned
//! by the library are released with [`qhcat_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qhcat::cli::{Built, FamilySpec, SpecFile};
use qhcat::qhcheck::{check_qh, Certificate};
use qhcat::Error;

/// Result of a call.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum QhcatStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    DimensionMismatch = 3,
    WindowTooSmall = 4,
    Precondition = 5,
    Invalid = 6,
    NotFunctorial = 7,
    UnknownObject = 8,
    OutOfRange = 9,
    Panic = 10,
}

/// A category with its filtration.
pub struct QhcatCategory {
    built: Built,
}

/// A verification certificate.
pub struct QhcatCertificate {
    cert: Certificate,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: QhcatStatus, msg: impl Into<String>) -> QhcatStatus {
    set_error(msg);
    status
}

fn from_error(e: &Error) -> QhcatStatus {
    let status = match e {
        Error::DimensionMismatch(_) => QhcatStatus::DimensionMismatch,
        Error::WindowTooSmall(_) => QhcatStatus::WindowTooSmall,
        Error::Precondition(_) => QhcatStatus::Precondition,
        Error::Invalid(_) => QhcatStatus::Invalid,
        Error::NotFunctorial(_) => QhcatStatus::NotFunctorial,
        Error::UnknownObject(_) => QhcatStatus::UnknownObject,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> QhcatStatus) -> QhcatStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == QhcatStatus::Ok {
                LAST_ERROR.with(|e| *e.borrow_mut() = None);
            }
            s
        }
        Err(_) => fail(QhcatStatus::Panic, "internal panic"),
    }
}

/// Reads a C string; null is `None`.
///
/// # Safety
/// `s` is null or points to a NUL-terminated string.
unsafe fn opt_str<'a>(s: *const c_char) -> Result<Option<&'a str>, QhcatStatus> {
    if s.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(s)
        .to_str()
        .map(Some)
        .map_err(|_| fail(QhcatStatus::InvalidUtf8, "string is not UTF-8"))
}

unsafe fn req_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, QhcatStatus> {
    opt_str(s)?.ok_or_else(|| fail(QhcatStatus::NullPointer, format!("{what} is null")))
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

fn emit_category(spec: &SpecFile, out: *mut *mut QhcatCategory) -> QhcatStatus {
    match spec.build() {
        Ok(built) => {
            unsafe { *out = Box::into_raw(Box::new(QhcatCategory { built })) };
            QhcatStatus::Ok
        }
        Err(e) => from_error(&e),
    }
}

/// Builds a category from a JSON spec (the format of the command-line `--spec` files).
///
/// # Safety
/// `json` is a NUL-terminated string and `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qhcat_category_from_spec(
    json: *const c_char,
    out: *mut *mut QhcatCategory,
) -> QhcatStatus {
    guard(|| {
        if out.is_null() {
            return fail(QhcatStatus::NullPointer, "out is null");
        }
        let json = match req_str(json, "json") {
            Ok(s) => s,
            Err(s) => return s,
        };
        match serde_json::from_str::<SpecFile>(json) {
            Ok(spec) => emit_category(&spec, out),
            Err(e) => fail(QhcatStatus::Invalid, format!("spec: {e}")),
        }
    })
}

/// Builds a truncation of a builtin family. `filtration` and `field` may be null for
/// `standard` and `q`.
///
/// # Safety
/// String arguments are null or NUL-terminated; `name` is not null; `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn qhcat_category_family(
    name: *const c_char,
    filtration: *const c_char,
    layers: usize,
    field: *const c_char,
    out: *mut *mut QhcatCategory,
) -> QhcatStatus {
    guard(|| {
        if out.is_null() {
            return fail(QhcatStatus::NullPointer, "out is null");
        }
        let strings = (|| {
            Ok::<_, QhcatStatus>((
                req_str(name, "name")?,
                opt_str(filtration)?.unwrap_or("standard"),
                opt_str(field)?.unwrap_or("q"),
            ))
        })();
        let (name, filtration, field) = match strings {
            Ok(t) => t,
            Err(s) => return s,
        };
        let spec = SpecFile {
            field: field.into(),
            family: Some(FamilySpec {
                name: name.into(),
                filtration: filtration.into(),
                layers,
                cols: None,
                window: None,
            }),
            quiver: None,
            layers: None,
        };
        emit_category(&spec, out)
    })
}

/// Number of objects; 0 for a null handle.
///
/// # Safety
/// `cat` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qhcat_category_object_count(cat: *const QhcatCategory) -> usize {
    cat.as_ref().map_or(0, |c| c.built.category.len())
}

/// Number of filtration layers; 0 for a null handle.
///
/// # Safety
/// `cat` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qhcat_category_layer_count(cat: *const QhcatCategory) -> usize {
    cat.as_ref().map_or(0, |c| c.built.filtration.layer_count())
}

/// Index of an object given by name, `E<i>_<j>` label or `time,node`.
///
/// # Safety
/// `cat` is a live handle, `name` NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qhcat_category_find(
    cat: *const QhcatCategory,
    name: *const c_char,
    out: *mut usize,
) -> QhcatStatus {
    guard(|| {
        let (Some(cat), false) = (cat.as_ref(), out.is_null()) else {
            return fail(QhcatStatus::NullPointer, "null argument");
        };
        let name = match req_str(name, "name") {
            Ok(s) => s,
            Err(s) => return s,
        };
        match cat.built.object(name) {
            Ok(x) => {
                *out = x;
                QhcatStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Name of object `x` as a new string, or null when out of range.
///
/// # Safety
/// `cat` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qhcat_category_object_name(
    cat: *const QhcatCategory,
    x: usize,
) -> *mut c_char {
    match cat.as_ref() {
        Some(c) if x < c.built.category.len() => owned_string(c.built.category.name(x).into()),
        _ => ptr::null_mut(),
    }
}

/// `dim Hom(x, y)`.
///
/// # Safety
/// `cat` is a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qhcat_hom_dim(
    cat: *const QhcatCategory,
    x: usize,
    y: usize,
    out: *mut usize,
) -> QhcatStatus {
    guard(|| {
        let (Some(cat), false) = (cat.as_ref(), out.is_null()) else {
            return fail(QhcatStatus::NullPointer, "null argument");
        };
        let n = cat.built.category.len();
        if x >= n || y >= n {
            return fail(
                QhcatStatus::OutOfRange,
                format!("object index out of range 0..{n}"),
            );
        }
        *out = cat.built.category.dim(x, y);
        QhcatStatus::Ok
    })
}

/// Quasi-hereditary check of the category with its filtration.
///
/// # Safety
/// `cat` is a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qhcat_check_qh(
    cat: *const QhcatCategory,
    out: *mut *mut QhcatCertificate,
) -> QhcatStatus {
    guard(|| {
        let (Some(cat), false) = (cat.as_ref(), out.is_null()) else {
            return fail(QhcatStatus::NullPointer, "null argument");
        };
        match check_qh(&cat.built.category, &cat.built.filtration) {
            Ok(cert) => {
                *out = Box::into_raw(Box::new(QhcatCertificate { cert }));
                QhcatStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// 1 when the certificate passed, 0 otherwise or for a null handle.
///
/// # Safety
/// `cert` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qhcat_certificate_passed(cert: *const QhcatCertificate) -> c_int {
    cert.as_ref().map_or(0, |c| c_int::from(c.cert.passed))
}

/// Plain-text report as a new string; null for a null handle.
///
/// # Safety
/// `cert` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qhcat_certificate_report(cert: *const QhcatCertificate) -> *mut c_char {
    cert.as_ref()
        .map_or(ptr::null_mut(), |c| owned_string(c.cert.to_string()))
}

/// JSON report as a new string; null for a null handle.
///
/// # Safety
/// `cert` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qhcat_certificate_json(cert: *const QhcatCertificate) -> *mut c_char {
    cert.as_ref().map_or(ptr::null_mut(), |c| {
        owned_string(serde_json::to_string(&c.cert).expect("certificate serializes"))
    })
}

/// Runs the command line with `argv[0..argc]` (program name first) and returns its exit code.
/// `out_stdout` and `out_stderr` may be null; otherwise they receive new strings.
///
/// # Safety
/// `argv` holds `argc` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn qhcat_run(
    argc: usize,
    argv: *const *const c_char,
    out_stdout: *mut *mut c_char,
    out_stderr: *mut *mut c_char,
) -> c_int {
    let result = catch_unwind(AssertUnwindSafe(|| {
        if argv.is_null() && argc > 0 {
            set_error("argv is null");
            return 2;
        }
        let mut args = Vec::with_capacity(argc);
        for k in 0..argc {
            match req_str(*argv.add(k), "argument") {
                Ok(s) => args.push(s.to_string()),
                Err(_) => return 2,
            }
        }
        let outcome = qhcat::cli::run(args);
        if !out_stdout.is_null() {
            *out_stdout = owned_string(outcome.stdout);
        }
        if !out_stderr.is_null() {
            *out_stderr = owned_string(outcome.stderr);
        }
        outcome.code
    }));
    result.unwrap_or_else(|_| {
        set_error("internal panic");
        2
    })
}

/// Message of the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn qhcat_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` is null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qhcat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `cat` is null or a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qhcat_category_free(cat: *mut QhcatCategory) {
    if !cat.is_null() {
        drop(Box::from_raw(cat));
    }
}

/// # Safety
/// `cert` is null or a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qhcat_certificate_free(cert: *mut QhcatCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}
