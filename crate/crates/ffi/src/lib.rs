//! C ABI over the `harmonic` crate.
//!
//! Planes are opaque handles. Every call returns a [`HarmonicStatus`]; on
//! failure `harmonic_last_error` gives a message for the calling thread.
//! Strings returned by the library must be released with
//! `harmonic_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use clap::ValueEnum;
use harmonic::cli::{parse_ambient, run_verify, VerifyClaim};
use harmonic::closure::h_closure;
use harmonic::{CoordinatePlane, Verdict};

/// Status codes returned by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarmonicStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// A string argument was not UTF-8.
    Utf8 = 3,
    /// The requested point or conjugate does not exist.
    NotFound = 4,
    /// A verifier ran and reported a falsified claim.
    Falsified = 5,
    /// The verifier could not run.
    VerifyError = 6,
    Panic = 7,
}

/// Opaque PG(2,q) handle.
pub struct HarmonicPlane {
    plane: CoordinatePlane,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn fail(status: HarmonicStatus, msg: impl Into<String>) -> HarmonicStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> HarmonicStatus) -> HarmonicStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(HarmonicStatus::Panic, "internal panic"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, HarmonicStatus> {
    if p.is_null() {
        return Err(fail(HarmonicStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(HarmonicStatus::Utf8, "string argument is not UTF-8"))
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn harmonic_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds PG(2,q) from a field descriptor such as `5`, `9` or `3^2:1,0,1`.
///
/// # Safety
/// `descriptor` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn harmonic_plane_new(descriptor: *const c_char, out: *mut *mut HarmonicPlane) -> HarmonicStatus {
    guard(|| {
        if out.is_null() {
            return fail(HarmonicStatus::NullPointer, "null output pointer");
        }
        let d = match str_arg(descriptor) {
            Ok(d) => d,
            Err(s) => return s,
        };
        match parse_ambient(&format!("pg:{d}")) {
            Ok(plane) => {
                *out = Box::into_raw(Box::new(HarmonicPlane { plane }));
                HarmonicStatus::Ok
            }
            Err(e) => fail(HarmonicStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Releases a plane. Null is ignored.
///
/// # Safety
/// `plane` must come from `harmonic_plane_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn harmonic_plane_free(plane: *mut HarmonicPlane) {
    if !plane.is_null() {
        drop(Box::from_raw(plane));
    }
}

unsafe fn plane_ref<'a>(p: *const HarmonicPlane) -> Result<&'a CoordinatePlane, HarmonicStatus> {
    p.as_ref()
        .map(|h| &h.plane)
        .ok_or_else(|| fail(HarmonicStatus::NullPointer, "null plane handle"))
}

/// Field order q and point count q²+q+1.
///
/// # Safety
/// `plane` must be a live handle; `order` and `points` writable or null.
#[no_mangle]
pub unsafe extern "C" fn harmonic_plane_info(plane: *const HarmonicPlane, order: *mut u32, points: *mut usize) -> HarmonicStatus {
    guard(|| {
        let pl = match plane_ref(plane) {
            Ok(p) => p,
            Err(s) => return s,
        };
        if !order.is_null() {
            *order = pl.order();
        }
        if !points.is_null() {
            *points = pl.point_count();
        }
        HarmonicStatus::Ok
    })
}

/// Index of a point literal such as `[1,2,0]`.
///
/// # Safety
/// `plane` live, `text` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn harmonic_point_index(plane: *const HarmonicPlane, text: *const c_char, out: *mut u32) -> HarmonicStatus {
    guard(|| {
        let pl = match plane_ref(plane) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let t = match str_arg(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(HarmonicStatus::NullPointer, "null output pointer");
        }
        match pl.parse_point(t) {
            Ok(i) => {
                *out = i;
                HarmonicStatus::Ok
            }
            Err(e) => fail(HarmonicStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Canonical label of point `idx`, to be freed with `harmonic_string_free`.
///
/// # Safety
/// `plane` live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn harmonic_point_label(plane: *const HarmonicPlane, idx: u32, out: *mut *mut c_char) -> HarmonicStatus {
    guard(|| {
        let pl = match plane_ref(plane) {
            Ok(p) => p,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(HarmonicStatus::NullPointer, "null output pointer");
        }
        if idx as usize >= pl.point_count() {
            return fail(HarmonicStatus::InvalidArgument, format!("point {idx} out of range"));
        }
        *out = CString::new(pl.label(idx)).unwrap_or_default().into_raw();
        HarmonicStatus::Ok
    })
}

/// Harmonic conjugate of `x` with respect to `y` and `z`.
///
/// # Safety
/// `plane` live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn harmonic_conjugate(plane: *const HarmonicPlane, y: u32, z: u32, x: u32, out: *mut u32) -> HarmonicStatus {
    guard(|| {
        let pl = match plane_ref(plane) {
            Ok(p) => p,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(HarmonicStatus::NullPointer, "null output pointer");
        }
        let n = pl.point_count() as u32;
        if y >= n || z >= n || x >= n {
            return fail(HarmonicStatus::InvalidArgument, "point index out of range");
        }
        match pl.conjugate_index(y, z, x) {
            Some(c) => {
                *out = c;
                HarmonicStatus::Ok
            }
            None => fail(HarmonicStatus::NotFound, "points are not three distinct collinear points"),
        }
    })
}

/// Harmonic closure of `len` point indices. Writes the closure size to
/// `size` and, if `members` is non-null, a 0/1 flag per plane point into
/// `members` (which must hold `q²+q+1` bytes).
///
/// # Safety
/// `plane` live, `points` readable for `len` entries, `size` writable,
/// `members` null or writable for the plane's point count.
#[no_mangle]
pub unsafe extern "C" fn harmonic_closure(
    plane: *const HarmonicPlane,
    points: *const u32,
    len: usize,
    size: *mut usize,
    members: *mut u8,
) -> HarmonicStatus {
    guard(|| {
        let pl = match plane_ref(plane) {
            Ok(p) => p,
            Err(s) => return s,
        };
        if size.is_null() || (points.is_null() && len > 0) {
            return fail(HarmonicStatus::NullPointer, "null pointer argument");
        }
        let pts = if len == 0 { &[][..] } else { std::slice::from_raw_parts(points, len) };
        let n = pl.point_count();
        if pts.iter().any(|&p| p as usize >= n) {
            return fail(HarmonicStatus::InvalidArgument, "point index out of range");
        }
        let s = pl.structure().set_of(pts.iter().copied());
        match h_closure(pl, &s) {
            Ok(t) => {
                *size = t.final_set.len();
                if !members.is_null() {
                    let m = std::slice::from_raw_parts_mut(members, n);
                    for (i, slot) in m.iter_mut().enumerate() {
                        *slot = t.final_set.contains(i as u32) as u8;
                    }
                }
                HarmonicStatus::Ok
            }
            Err(e) => fail(HarmonicStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Runs a verifier (`theorem-pp`, `minimality`, `symmetry`,
/// `sequence-plane`, `oracle`, `all`) and returns its JSON report in `out`.
/// The report is written even when the claim is falsified.
///
/// # Safety
/// `claim` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn harmonic_verify_json(
    claim: *const c_char,
    p: u32,
    samples: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> HarmonicStatus {
    guard(|| {
        let c = match str_arg(claim) {
            Ok(c) => c,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(HarmonicStatus::NullPointer, "null output pointer");
        }
        let Ok(claim) = VerifyClaim::from_str(c, true) else {
            return fail(HarmonicStatus::InvalidArgument, format!("unknown claim {c:?}"));
        };
        let report = match run_verify(claim, p, None, samples, seed) {
            Ok(r) => r,
            Err(e) => return fail(HarmonicStatus::VerifyError, e.to_string()),
        };
        let text = serde_json::to_string(&report.to_json()).unwrap_or_default();
        *out = CString::new(text).unwrap_or_default().into_raw();
        match report.verdict {
            Verdict::Verified | Verdict::Observed => HarmonicStatus::Ok,
            Verdict::Falsified => fail(HarmonicStatus::Falsified, format!("{} falsified", report.claim)),
            Verdict::Error => fail(HarmonicStatus::VerifyError, format!("{} could not run", report.claim)),
        }
    })
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn harmonic_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
