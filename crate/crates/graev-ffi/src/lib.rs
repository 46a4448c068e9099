//! C ABI over the core library: opaque space handles, status codes, and
//! norm/distance/oracle entry points.
//!
//! Conventions: every function returns a [`GraevStatus`]; results go to out
//! parameters. Handles are created and released by this library only. String
//! outputs are NUL-terminated, UTF-8, and must be released with
//! [`graev_string_free`]. All functions are panic-safe: internal panics map
//! to `GRAEV_STATUS_INTERNAL`.
//!
//! The committed header `include/graev.h` is generated with cbindgen
//! (`cbindgen --config cbindgen.toml --output include/graev.h`).

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use graev_core::norm::{graev_norm_with_limit, oracle_norm, DEFAULT_MATCH_LIMIT};
use graev_core::space::space_from_json;
use graev_core::{Error, GroundSpace, GroupElement};

/// Status codes returned by every FFI entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraevStatus {
    Ok = 0,
    NullArgument = 1,
    Utf8 = 2,
    Parse = 3,
    InvalidSpace = 4,
    IndexOutOfRange = 5,
    CapacityExceeded = 6,
    GuardExceeded = 7,
    Precondition = 8,
    Internal = 9,
}

/// Opaque handle to a validated ground space.
pub struct GraevSpace {
    inner: GroundSpace,
}

fn status_of(err: &Error) -> GraevStatus {
    match err {
        Error::Malformed(_) | Error::Json(_) | Error::Io(_) => GraevStatus::Parse,
        Error::InvalidSpace { .. } => GraevStatus::InvalidSpace,
        Error::IndexOutOfRange { .. } => GraevStatus::IndexOutOfRange,
        Error::CapacityExceeded { .. } => GraevStatus::CapacityExceeded,
        Error::GuardExceeded(_) => GraevStatus::GuardExceeded,
        Error::BallPrecondition { .. } | Error::NotCauchy { .. } | Error::Ambiguous(_) => {
            GraevStatus::Precondition
        }
        _ => GraevStatus::Internal,
    }
}

fn guarded(f: impl FnOnce() -> GraevStatus) -> GraevStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => GraevStatus::Internal,
    }
}

/// Build an element from a point list; repeats cancel and 0 is absorbed.
unsafe fn element_from_raw(
    points: *const u32,
    len: usize,
    space: &GroundSpace,
) -> Result<GroupElement, GraevStatus> {
    if len > 0 && points.is_null() {
        return Err(GraevStatus::NullArgument);
    }
    let slice = if len == 0 {
        &[][..]
    } else {
        std::slice::from_raw_parts(points, len)
    };
    let indices: Vec<usize> = slice.iter().map(|&p| p as usize).collect();
    GroupElement::sum_points(&indices, space).map_err(|e| status_of(&e))
}

/// Parse and validate a space from JSON. On success `*out` owns the handle;
/// release it with [`graev_space_free`].
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn graev_space_parse_json(
    json: *const c_char,
    out: *mut *mut GraevSpace,
) -> GraevStatus {
    guarded(|| {
        if json.is_null() || out.is_null() {
            return GraevStatus::NullArgument;
        }
        let text = match CStr::from_ptr(json).to_str() {
            Ok(t) => t,
            Err(_) => return GraevStatus::Utf8,
        };
        match space_from_json(text) {
            Ok(space) => {
                *out = Box::into_raw(Box::new(GraevSpace { inner: space }));
                GraevStatus::Ok
            }
            Err(e) => {
                *out = ptr::null_mut();
                status_of(&e)
            }
        }
    })
}

/// Build a space from a row-major `n x n` distance table.
///
/// # Safety
/// `dist` must point to `n * n` doubles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn graev_space_from_matrix(
    dist: *const f64,
    n: usize,
    out: *mut *mut GraevSpace,
) -> GraevStatus {
    guarded(|| {
        if dist.is_null() || out.is_null() {
            return GraevStatus::NullArgument;
        }
        let flat = std::slice::from_raw_parts(dist, n * n);
        let table: Vec<Vec<f64>> = (0..n).map(|i| flat[i * n..(i + 1) * n].to_vec()).collect();
        match GroundSpace::from_matrix(table) {
            Ok(space) => {
                *out = Box::into_raw(Box::new(GraevSpace { inner: space }));
                GraevStatus::Ok
            }
            Err(e) => {
                *out = ptr::null_mut();
                status_of(&e)
            }
        }
    })
}

/// Release a space handle. NULL is a no-op.
///
/// # Safety
/// `space` must have been returned by a constructor of this library and not
/// already freed.
#[no_mangle]
pub unsafe extern "C" fn graev_space_free(space: *mut GraevSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Number of points in the space, `e` included.
///
/// # Safety
/// `space` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn graev_space_len(space: *const GraevSpace) -> usize {
    if space.is_null() {
        return 0;
    }
    (*space).inner.len()
}

/// Ground distance between two points.
///
/// # Safety
/// `space` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn graev_space_distance(
    space: *const GraevSpace,
    i: usize,
    j: usize,
    out: *mut f64,
) -> GraevStatus {
    guarded(|| {
        if space.is_null() || out.is_null() {
            return GraevStatus::NullArgument;
        }
        match (*space).inner.try_distance(i, j) {
            Ok(d) => {
                *out = d;
                GraevStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Graev norm of the element summed from `points`. `match_limit = 0` selects
/// the default capacity.
///
/// # Safety
/// `space` must be a live handle; `points` must hold `len` entries; `out_value`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn graev_norm(
    space: *const GraevSpace,
    points: *const u32,
    len: usize,
    match_limit: usize,
    out_value: *mut f64,
) -> GraevStatus {
    guarded(|| {
        if space.is_null() || out_value.is_null() {
            return GraevStatus::NullArgument;
        }
        let inner = &(*space).inner;
        let element = match element_from_raw(points, len, inner) {
            Ok(el) => el,
            Err(status) => return status,
        };
        let limit = if match_limit == 0 {
            DEFAULT_MATCH_LIMIT
        } else {
            match_limit
        };
        match graev_norm_with_limit(&element, inner, limit) {
            Ok(result) => {
                *out_value = result.value;
                GraevStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// As [`graev_norm`], also returning the optimal matching as a JSON array of
/// index pairs (release with [`graev_string_free`]).
///
/// # Safety
/// As [`graev_norm`]; `out_witness_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn graev_norm_witness_json(
    space: *const GraevSpace,
    points: *const u32,
    len: usize,
    match_limit: usize,
    out_value: *mut f64,
    out_witness_json: *mut *mut c_char,
) -> GraevStatus {
    guarded(|| {
        if space.is_null() || out_value.is_null() || out_witness_json.is_null() {
            return GraevStatus::NullArgument;
        }
        let inner = &(*space).inner;
        let element = match element_from_raw(points, len, inner) {
            Ok(el) => el,
            Err(status) => return status,
        };
        let limit = if match_limit == 0 {
            DEFAULT_MATCH_LIMIT
        } else {
            match_limit
        };
        match graev_norm_with_limit(&element, inner, limit) {
            Ok(result) => {
                let json = serde_json_pairs(&result.witness.pairs);
                let cstring = match CString::new(json) {
                    Ok(c) => c,
                    Err(_) => return GraevStatus::Internal,
                };
                *out_value = result.value;
                *out_witness_json = cstring.into_raw();
                GraevStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

fn serde_json_pairs(pairs: &[(usize, usize)]) -> String {
    let mut out = String::from("[");
    for (i, (a, b)) in pairs.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format!("[{a},{b}]"));
    }
    out.push(']');
    out
}

/// Graev distance between the elements summed from two point lists.
///
/// # Safety
/// As [`graev_norm`], for both point lists.
#[no_mangle]
pub unsafe extern "C" fn graev_dist(
    space: *const GraevSpace,
    g_points: *const u32,
    g_len: usize,
    h_points: *const u32,
    h_len: usize,
    match_limit: usize,
    out_value: *mut f64,
) -> GraevStatus {
    guarded(|| {
        if space.is_null() || out_value.is_null() {
            return GraevStatus::NullArgument;
        }
        let inner = &(*space).inner;
        let g = match element_from_raw(g_points, g_len, inner) {
            Ok(el) => el,
            Err(status) => return status,
        };
        let h = match element_from_raw(h_points, h_len, inner) {
            Ok(el) => el,
            Err(status) => return status,
        };
        let limit = if match_limit == 0 {
            DEFAULT_MATCH_LIMIT
        } else {
            match_limit
        };
        match graev_norm_with_limit(&g.add(&h), inner, limit) {
            Ok(result) => {
                *out_value = result.value;
                GraevStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Minimum representation weight over at most `max_pairs` pairs: the
/// enumeration oracle for cross-checking [`graev_norm`].
///
/// # Safety
/// As [`graev_norm`].
#[no_mangle]
pub unsafe extern "C" fn graev_oracle_norm(
    space: *const GraevSpace,
    points: *const u32,
    len: usize,
    max_pairs: usize,
    out_value: *mut f64,
) -> GraevStatus {
    guarded(|| {
        if space.is_null() || out_value.is_null() {
            return GraevStatus::NullArgument;
        }
        let inner = &(*space).inner;
        let element = match element_from_raw(points, len, inner) {
            Ok(el) => el,
            Err(status) => return status,
        };
        match oracle_norm(&element, inner, max_pairs) {
            Ok(v) => {
                *out_value = v;
                GraevStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Release a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must have been returned by this library and not already freed.
#[no_mangle]
pub unsafe extern "C" fn graev_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn graev_status_message(status: GraevStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        GraevStatus::Ok => b"ok\0",
        GraevStatus::NullArgument => b"null argument\0",
        GraevStatus::Utf8 => b"invalid utf-8\0",
        GraevStatus::Parse => b"malformed input\0",
        GraevStatus::InvalidSpace => b"pseudometric axioms violated\0",
        GraevStatus::IndexOutOfRange => b"point index out of range\0",
        GraevStatus::CapacityExceeded => b"matching capacity exceeded\0",
        GraevStatus::GuardExceeded => b"combinatorial guard exceeded\0",
        GraevStatus::Precondition => b"precondition not met\0",
        GraevStatus::Internal => b"internal error\0",
    };
    msg.as_ptr() as *const c_char
}
