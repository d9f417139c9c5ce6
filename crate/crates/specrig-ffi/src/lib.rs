//! C ABI for the specrig library.
//!
//! Conventions, mirrored in the generated `include/specrig.h`:
//!
//! - Every fallible function returns a status code: 0 ok, 1 I/O,
//!   2 validation, 3 numerical failure — the same scheme the CLI uses for
//!   exit codes. Results land in out-pointers, written only on status 0.
//! - NULL pointers are reported as validation errors, never dereferenced.
//! - On failure a thread-local message is set; fetch it with
//!   `specrig_last_error_message` (it is cleared by the next successful
//!   call on the same thread).
//! - Strings returned by the library are heap-allocated; release them with
//!   `specrig_string_free`. Handles have their own `_free` functions.
//!   `specrig_version` returns a static string that must not be freed.
//! - Complex arrays are interleaved doubles `[re0, im0, re1, im1, ...]`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use num_complex::Complex64;
use specrig::{
    compare_spectra_with_tol, green_value, pcf_parameters_unicritical, tau, Error, FamilySpec,
    PcfKind, RationalMap, SpectrumTable,
};

pub const SPECRIG_OK: i32 = 0;
pub const SPECRIG_ERR_IO: i32 = 1;
pub const SPECRIG_ERR_VALIDATION: i32 = 2;
pub const SPECRIG_ERR_NUMERICS: i32 = 3;

/// Opaque handle to a degree-d rational map on P^1.
pub struct SpecrigMap {
    inner: RationalMap,
}

/// Opaque handle to a truncated multiplier-spectrum table (S_1..S_n).
pub struct SpecrigSpectrum {
    inner: SpectrumTable,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn ok() -> i32 {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    SPECRIG_OK
}

fn fail(e: Error) -> i32 {
    let code = e.exit_code();
    let msg = CString::new(e.to_string())
        .unwrap_or_else(|_| CString::new("error message contained an interior NUL").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
    code
}

fn invalid(msg: &str) -> i32 {
    fail(Error::InvalidInput(msg.into()))
}

/// # Safety
/// `ptr` must be NULL or valid for reads of T for the call's duration.
unsafe fn as_ref<'a, T>(ptr: *const T) -> Option<&'a T> {
    if ptr.is_null() {
        None
    } else {
        Some(&*ptr)
    }
}

fn string_out(s: String, out: *mut *mut c_char) -> i32 {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            ok()
        }
        Err(_) => invalid("output string contained an interior NUL"),
    }
}

/// Library version as a static NUL-terminated string. Do not free.
#[no_mangle]
pub extern "C" fn specrig_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the most recent failure on this thread, or NULL if the last
/// call succeeded. Free the result with `specrig_string_free`.
#[no_mangle]
pub extern "C" fn specrig_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Frees a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must be a pointer previously returned by a specrig function that
/// documents `specrig_string_free`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn specrig_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a rational map from its JSON encoding
/// `{"degree", "num": {"coeffs": [[re,im],...]}, "den": {...}}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn specrig_map_from_json(
    json: *const c_char,
    out: *mut *mut SpecrigMap,
) -> i32 {
    if json.is_null() || out.is_null() {
        return invalid("specrig_map_from_json: NULL argument");
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(_) => return invalid("map JSON is not valid UTF-8"),
    };
    match serde_json::from_str::<RationalMap>(text) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(SpecrigMap { inner }));
            ok()
        }
        Err(e) => fail(Error::Json(e)),
    }
}

/// Serializes a map back to JSON. Free the string with
/// `specrig_string_free`.
///
/// # Safety
/// `map` must come from `specrig_map_from_json` and be live; `out` must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn specrig_map_to_json(
    map: *const SpecrigMap,
    out: *mut *mut c_char,
) -> i32 {
    let (Some(map), false) = (as_ref(map), out.is_null()) else {
        return invalid("specrig_map_to_json: NULL argument");
    };
    match serde_json::to_string(&map.inner) {
        Ok(s) => string_out(s, out),
        Err(e) => fail(Error::Json(e)),
    }
}

/// Degree of the map.
///
/// # Safety
/// `map` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn specrig_map_degree(map: *const SpecrigMap, out: *mut usize) -> i32 {
    let (Some(map), false) = (as_ref(map), out.is_null()) else {
        return invalid("specrig_map_degree: NULL argument");
    };
    *out = map.inner.degree();
    ok()
}

/// Frees a map handle. NULL is a no-op.
///
/// # Safety
/// `map` must come from `specrig_map_from_json` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn specrig_map_free(map: *mut SpecrigMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Truncated multiplier spectrum (S_1..S_{n_max}) of the map.
///
/// # Safety
/// `map` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn specrig_tau(
    map: *const SpecrigMap,
    n_max: usize,
    out: *mut *mut SpecrigSpectrum,
) -> i32 {
    let (Some(map), false) = (as_ref(map), out.is_null()) else {
        return invalid("specrig_tau: NULL argument");
    };
    match tau(&map.inner, n_max) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(SpecrigSpectrum { inner }));
            ok()
        }
        Err(e) => fail(e),
    }
}

/// Serializes a spectrum table to JSON (complex numbers as [re, im]).
/// Free the string with `specrig_string_free`.
///
/// # Safety
/// `spectrum` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn specrig_spectrum_to_json(
    spectrum: *const SpecrigSpectrum,
    out: *mut *mut c_char,
) -> i32 {
    let (Some(sp), false) = (as_ref(spectrum), out.is_null()) else {
        return invalid("specrig_spectrum_to_json: NULL argument");
    };
    match serde_json::to_string(&sp.inner) {
        Ok(s) => string_out(s, out),
        Err(e) => fail(Error::Json(e)),
    }
}

/// Copies S_n as interleaved doubles into `buf` and stores the number of
/// multipliers in `out_len`. Call with `buf == NULL` (or `cap == 0`) to
/// query the length only; otherwise `cap` must be at least `2 * len`.
///
/// # Safety
/// `spectrum` must be a live handle; `buf`, when non-NULL, must be valid
/// for `cap` double writes; `out_len` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn specrig_spectrum_multipliers(
    spectrum: *const SpecrigSpectrum,
    n: usize,
    buf: *mut f64,
    cap: usize,
    out_len: *mut usize,
) -> i32 {
    let (Some(sp), false) = (as_ref(spectrum), out_len.is_null()) else {
        return invalid("specrig_spectrum_multipliers: NULL argument");
    };
    let Some(row) = sp.inner.periods.iter().find(|r| r.n == n) else {
        return invalid("requested period is not in the table");
    };
    *out_len = row.multipliers.len();
    if buf.is_null() || cap == 0 {
        return ok();
    }
    if cap < 2 * row.multipliers.len() {
        return invalid("buffer too small for 2 * len doubles");
    }
    for (k, z) in row.multipliers.iter().enumerate() {
        *buf.add(2 * k) = z.re;
        *buf.add(2 * k + 1) = z.im;
    }
    ok()
}

/// Compares two spectrum tables: distance and an equality verdict at the
/// given tolerance (pass `tol <= 0` for the default 1e-6).
///
/// # Safety
/// `a` and `b` must be live handles; the out-pointers must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn specrig_spectrum_compare(
    a: *const SpecrigSpectrum,
    b: *const SpecrigSpectrum,
    tol: f64,
    out_distance: *mut f64,
    out_equal: *mut bool,
) -> i32 {
    let (Some(a), Some(b)) = (as_ref(a), as_ref(b)) else {
        return invalid("specrig_spectrum_compare: NULL argument");
    };
    if out_distance.is_null() || out_equal.is_null() {
        return invalid("specrig_spectrum_compare: NULL argument");
    }
    let tol = if tol > 0.0 { tol } else { 1e-6 };
    match compare_spectra_with_tol(&a.inner, &b.inner, tol) {
        Ok((distance, equal)) => {
            *out_distance = distance;
            *out_equal = equal;
            ok()
        }
        Err(e) => fail(e),
    }
}

/// Frees a spectrum handle. NULL is a no-op.
///
/// # Safety
/// `spectrum` must come from `specrig_tau` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn specrig_spectrum_free(spectrum: *mut SpecrigSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Green (escape-rate) value of the critical point of z^d + t at the
/// parameter `t_re + i*t_im`, after `n_iter` lift iterations.
///
/// # Safety
/// `out_value` and `out_error` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn specrig_green_unicritical(
    d: usize,
    t_re: f64,
    t_im: f64,
    n_iter: usize,
    out_value: *mut f64,
    out_error: *mut f64,
) -> i32 {
    if out_value.is_null() || out_error.is_null() {
        return invalid("specrig_green_unicritical: NULL argument");
    }
    let family = FamilySpec::unicritical(d);
    if let Err(e) = family.validate() {
        return fail(e);
    }
    match green_value(&family, "crit", Complex64::new(t_re, t_im), n_iter) {
        Ok(g) => {
            *out_value = g.value;
            *out_error = g.error_estimate;
            ok()
        }
        Err(e) => fail(e),
    }
}

/// PCF parameters of z^d + t: centers of the given period when
/// `preperiod == 0`, Misiurewicz parameters otherwise. Same buffer
/// protocol as `specrig_spectrum_multipliers`.
///
/// # Safety
/// `buf`, when non-NULL, must be valid for `cap` double writes; `out_len`
/// must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn specrig_pcf_parameters(
    d: usize,
    period: usize,
    preperiod: usize,
    buf: *mut f64,
    cap: usize,
    out_len: *mut usize,
) -> i32 {
    if out_len.is_null() {
        return invalid("specrig_pcf_parameters: NULL argument");
    }
    let kind = if preperiod == 0 {
        PcfKind::Center { period }
    } else {
        PcfKind::Misiurewicz { preperiod, period }
    };
    let points = match pcf_parameters_unicritical(d, kind) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    *out_len = points.len();
    if buf.is_null() || cap == 0 {
        return ok();
    }
    if cap < 2 * points.len() {
        return invalid("buffer too small for 2 * len doubles");
    }
    for (k, z) in points.iter().enumerate() {
        *buf.add(2 * k) = z.re;
        *buf.add(2 * k + 1) = z.im;
    }
    ok()
}
