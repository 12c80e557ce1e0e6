//! C ABI for the solver: opaque handles, status codes, and accessors.
//!
//! Every function returns a [`MaderStatus`] or a plain value; on failure the
//! message is available from [`mader_last_error`] on the same thread.

use mader::instance::Instance;
use mader::oracle::brute_force_packing;
use mader::solver::{solve_with, SolveOptions, SolveReport};
use mader::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Status codes. Values 2, 3 and 4 match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaderStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    Internal = 3,
    OracleCap = 4,
    InvalidUtf8 = 5,
    OutOfRange = 6,
    Panic = 7,
}

/// Opaque parsed instance.
pub struct MaderInstance(Instance);

/// Opaque solve result.
pub struct MaderReport(SolveReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> MaderStatus {
    match e {
        Error::Parse { .. } | Error::InvalidInstance(_) | Error::Generator(_) => MaderStatus::Parse,
        Error::OracleCap(_) => MaderStatus::OracleCap,
        _ => MaderStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (MaderStatus, String)>) -> MaderStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            MaderStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("panic inside the solver");
            MaderStatus::Panic
        }
    }
}

fn fail(e: Error) -> (MaderStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (MaderStatus, String) {
    (MaderStatus::NullPointer, format!("{what} is null"))
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn mader_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses an instance from NUL-terminated text in the instance format.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mader_instance_parse(text: *const c_char, out: *mut *mut MaderInstance) -> MaderStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| (MaderStatus::InvalidUtf8, e.to_string()))?;
        let inst = Instance::parse(s).map_err(fail)?;
        *out = Box::into_raw(Box::new(MaderInstance(inst)));
        Ok(())
    })
}

/// Releases an instance. Null is ignored.
///
/// # Safety
/// `inst` must come from [`mader_instance_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mader_instance_free(inst: *mut MaderInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Vertex count, or 0 for null.
///
/// # Safety
/// `inst` must be null or a live instance.
#[no_mangle]
pub unsafe extern "C" fn mader_instance_vertex_count(inst: *const MaderInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.n())
}

/// Edge count, or 0 for null.
///
/// # Safety
/// `inst` must be null or a live instance.
#[no_mangle]
pub unsafe extern "C" fn mader_instance_edge_count(inst: *const MaderInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.m())
}

/// Solves an instance using `threads` workers for independent components.
///
/// # Safety
/// `inst` must be a live instance and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mader_solve(inst: *const MaderInstance, threads: u32, out: *mut *mut MaderReport) -> MaderStatus {
    guard(|| {
        let inst = inst.as_ref().ok_or_else(|| null("inst"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let opts = SolveOptions {
            threads: threads.max(1) as usize,
            ..SolveOptions::fast()
        };
        let report = solve_with(&inst.0, &opts).map_err(fail)?;
        *out = Box::into_raw(Box::new(MaderReport(report)));
        Ok(())
    })
}

/// Brute-force packing number for instances with at most `cap` vertices.
///
/// # Safety
/// `inst` must be a live instance and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mader_oracle(inst: *const MaderInstance, cap: usize, out: *mut usize) -> MaderStatus {
    guard(|| {
        let inst = inst.as_ref().ok_or_else(|| null("inst"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = brute_force_packing(&inst.0, cap).map_err(fail)?.0;
        Ok(())
    })
}

/// Releases a report. Null is ignored.
///
/// # Safety
/// `report` must come from [`mader_solve`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mader_report_free(report: *mut MaderReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Number of paths in the packing, or 0 for null.
///
/// # Safety
/// `report` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn mader_report_packing_size(report: *const MaderReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.packing_size)
}

/// The field size used, or 0 when fewer than two blocks made it unnecessary.
///
/// # Safety
/// `report` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn mader_report_field_size(report: *const MaderReport) -> u32 {
    report.as_ref().and_then(|r| r.0.q).unwrap_or(0)
}

/// Number of successful augmentations over all components.
///
/// # Safety
/// `report` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn mader_report_iterations(report: *const MaderReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.iterations())
}

/// Copies path `index` as 1-indexed vertex ids into `buf`. `*len` receives
/// the path length; if `cap` is too small nothing is copied and
/// `OutOfRange` is returned, so a call with `cap = 0` queries the length.
///
/// # Safety
/// `report` must be a live report, `len` valid, and `buf` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn mader_report_path(
    report: *const MaderReport,
    index: usize,
    buf: *mut u32,
    cap: usize,
    len: *mut usize,
) -> MaderStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if len.is_null() {
            return Err(null("len"));
        }
        let path = r.0.packing.paths.get(index).ok_or_else(|| {
            (MaderStatus::OutOfRange, format!("path {index} of {}", r.0.packing_size))
        })?;
        *len = path.len();
        if cap < path.len() {
            return Err((MaderStatus::OutOfRange, format!("buffer holds {cap}, path has {}", path.len())));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        for (i, &v) in path.iter().enumerate() {
            *buf.add(i) = v as u32 + 1;
        }
        Ok(())
    })
}

/// Packing in the text output format. Free with [`mader_string_free`].
///
/// # Safety
/// `report` must be null or a live report.
#[no_mangle]
pub unsafe extern "C" fn mader_report_packing_text(report: *const MaderReport) -> *mut c_char {
    match report.as_ref() {
        Some(r) => CString::new(r.0.packing.to_text()).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mader_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
