//! C ABI over `ergodom`.
//!
//! Objects cross the boundary as opaque heap handles that the caller frees
//! with the matching `*_free` function. Every fallible call returns an
//! [`ErgoStatus`]; on failure a message is kept per thread and returned by
//! [`ergo_last_error`]. Rationals and elements travel as C strings
//! (`"p/q"` and hex encodings) that the caller releases with
//! [`ergo_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ergodom::cli::{dominate_artifacts, RunConfig};
use ergodom::measure::convolve;
use ergodom::omega::FolnerFamily;
use ergodom::set::product;
use ergodom::{Error, FinSupMeasure, FiniteSubset, GroupElement};

/// Result code of every fallible call. `Ok` is zero.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErgoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    GroupMismatch = 3,
    Overflow = 4,
    ResourceLimit = 5,
    Decode = 6,
    Parse = 7,
    Io = 8,
    Utf8 = 9,
    Panic = 10,
}

/// Opaque group element.
pub struct ErgoElement(GroupElement);

/// Opaque finite subset.
pub struct ErgoSet(FiniteSubset);

/// Opaque finitely supported measure.
pub struct ErgoMeasure(FinSupMeasure);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ErgoStatus {
    match e.root() {
        Error::GroupMismatch { .. } => ErgoStatus::GroupMismatch,
        Error::Overflow(_) => ErgoStatus::Overflow,
        Error::ResourceLimit { .. } => ErgoStatus::ResourceLimit,
        Error::InvalidArgument(_) | Error::AtLevel { .. } => ErgoStatus::InvalidArgument,
        Error::Decode(_) => ErgoStatus::Decode,
        Error::Parse(_) => ErgoStatus::Parse,
        Error::Io(_) => ErgoStatus::Io,
    }
}

struct Failure(ErgoStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `f`, converting errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ErgoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ErgoStatus::Ok,
        Ok(Err(Failure(code, msg))) => {
            set_last_error(msg);
            code
        }
        Err(_) => {
            set_last_error("internal panic".into());
            ErgoStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(ErgoStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure(ErgoStatus::NullPointer, format!("{what} is null")))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(ErgoStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(ErgoStatus::Utf8, format!("{what} is not UTF-8")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior NUL in generated text").into_raw()
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn ergo_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn ergo_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ergo_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---- elements -------------------------------------------------------------

fn emit_element(out: *mut *mut ErgoElement, g: GroupElement) -> Result<(), Failure> {
    *unsafe { out_ptr(out, "out")? } = Box::into_raw(Box::new(ErgoElement(g)));
    Ok(())
}

/// Decodes a canonical hex encoding.
///
/// # Safety
/// `hex` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_element_from_hex(hex: *const c_char, out: *mut *mut ErgoElement) -> ErgoStatus {
    guard(|| emit_element(out, GroupElement::decode_hex(read_str(hex, "hex")?)?))
}

/// Element of `Z^dim`.
///
/// # Safety
/// `coords` points to `dim` integers; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_element_zd(coords: *const i64, dim: usize, out: *mut *mut ErgoElement) -> ErgoStatus {
    guard(|| {
        if dim == 0 {
            return Err(Failure(ErgoStatus::InvalidArgument, "dim must be positive".into()));
        }
        let c = std::slice::from_raw_parts(deref(coords, "coords")?, dim);
        emit_element(out, GroupElement::z(c))
    })
}

/// Heisenberg element `(a, b, c)`.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_element_heisenberg(a: i64, b: i64, c: i64, out: *mut *mut ErgoElement) -> ErgoStatus {
    guard(|| emit_element(out, GroupElement::heisenberg(a, b, c)))
}

/// Lamplighter element `(pos, K)`; repeated lamps toggle.
///
/// # Safety
/// `lamps` points to `len` integers (may be null when `len` is 0); `out` is
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_element_lamplighter(
    pos: i64,
    lamps: *const i64,
    len: usize,
    out: *mut *mut ErgoElement,
) -> ErgoStatus {
    guard(|| {
        let l = if len == 0 { &[][..] } else { std::slice::from_raw_parts(deref(lamps, "lamps")?, len) };
        emit_element(out, GroupElement::lamplighter(pos, l))
    })
}

/// `a · b`.
///
/// # Safety
/// Handles are live; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_element_mul(
    a: *const ErgoElement,
    b: *const ErgoElement,
    out: *mut *mut ErgoElement,
) -> ErgoStatus {
    guard(|| emit_element(out, deref(a, "a")?.0.mul(&deref(b, "b")?.0)?))
}

/// `a⁻¹`.
///
/// # Safety
/// `a` is live; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_element_inv(a: *const ErgoElement, out: *mut *mut ErgoElement) -> ErgoStatus {
    guard(|| emit_element(out, deref(a, "a")?.0.inv()?))
}

/// Canonical hex encoding, freed with [`ergo_string_free`].
///
/// # Safety
/// `a` is live; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_element_to_hex(a: *const ErgoElement, out: *mut *mut c_char) -> ErgoStatus {
    guard(|| {
        *out_ptr(out, "out")? = into_c_string(deref(a, "a")?.0.encode_hex());
        Ok(())
    })
}

/// # Safety
/// `a` is null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn ergo_element_free(a: *mut ErgoElement) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

// ---- sets -----------------------------------------------------------------

fn emit_set(out: *mut *mut ErgoSet, s: FiniteSubset) -> Result<(), Failure> {
    *unsafe { out_ptr(out, "out")? } = Box::into_raw(Box::new(ErgoSet(s)));
    Ok(())
}

/// `F_n` of a Følner family given as JSON, e.g. `{"family":"lamplighter"}`.
///
/// # Safety
/// `family_json` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_set_folner(
    family_json: *const c_char,
    n: u64,
    cap: usize,
    out: *mut *mut ErgoSet,
) -> ErgoStatus {
    guard(|| {
        let fam: FolnerFamily = serde_json::from_str(read_str(family_json, "family_json")?)
            .map_err(|e| Failure(ErgoStatus::Parse, format!("family: {e}")))?;
        emit_set(out, fam.set(n, cap)?)
    })
}

/// `A · B`, failing past `cap` elements.
///
/// # Safety
/// Handles are live; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_set_product(
    a: *const ErgoSet,
    b: *const ErgoSet,
    cap: usize,
    out: *mut *mut ErgoSet,
) -> ErgoStatus {
    guard(|| emit_set(out, product(&deref(a, "a")?.0, &deref(b, "b")?.0, cap)?))
}

/// # Safety
/// `s` is live; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_set_len(s: *const ErgoSet, out: *mut usize) -> ErgoStatus {
    guard(|| {
        *out_ptr(out, "out")? = deref(s, "set")?.0.len();
        Ok(())
    })
}

/// # Safety
/// Handles are live; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_set_contains(s: *const ErgoSet, g: *const ErgoElement, out: *mut bool) -> ErgoStatus {
    guard(|| {
        *out_ptr(out, "out")? = deref(s, "set")?.0.contains(&deref(g, "element")?.0);
        Ok(())
    })
}

/// # Safety
/// `s` is null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn ergo_set_free(s: *mut ErgoSet) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

// ---- measures -------------------------------------------------------------

fn emit_measure(out: *mut *mut ErgoMeasure, m: FinSupMeasure) -> Result<(), Failure> {
    *unsafe { out_ptr(out, "out")? } = Box::into_raw(Box::new(ErgoMeasure(m)));
    Ok(())
}

/// Uniform probability on a nonempty set.
///
/// # Safety
/// `s` is live; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_measure_uniform(s: *const ErgoSet, out: *mut *mut ErgoMeasure) -> ErgoStatus {
    guard(|| emit_measure(out, FinSupMeasure::uniform(&deref(s, "set")?.0)?))
}

/// Exact convolution `μ ∗ ν`.
///
/// # Safety
/// Handles are live; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_measure_convolve(
    mu: *const ErgoMeasure,
    nu: *const ErgoMeasure,
    out: *mut *mut ErgoMeasure,
) -> ErgoStatus {
    guard(|| emit_measure(out, convolve(&deref(mu, "mu")?.0, &deref(nu, "nu")?.0, None)?))
}

/// `μ({g})` as `"p/q"`.
///
/// # Safety
/// Handles are live; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_measure_mass(
    mu: *const ErgoMeasure,
    g: *const ErgoElement,
    out: *mut *mut c_char,
) -> ErgoStatus {
    guard(|| {
        let m = deref(mu, "mu")?.0.mass(&deref(g, "element")?.0);
        *out_ptr(out, "out")? = into_c_string(m.to_string());
        Ok(())
    })
}

/// Total mass as `"p/q"`.
///
/// # Safety
/// `mu` is live; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_measure_total_mass(mu: *const ErgoMeasure, out: *mut *mut c_char) -> ErgoStatus {
    guard(|| {
        *out_ptr(out, "out")? = into_c_string(deref(mu, "mu")?.0.total_mass().to_string());
        Ok(())
    })
}

/// # Safety
/// `mu` is live; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_measure_support_len(mu: *const ErgoMeasure, out: *mut usize) -> ErgoStatus {
    guard(|| {
        *out_ptr(out, "out")? = deref(mu, "mu")?.0.support_len();
        Ok(())
    })
}

/// # Safety
/// `mu` is null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn ergo_measure_free(mu: *mut ErgoMeasure) {
    if !mu.is_null() {
        drop(Box::from_raw(mu));
    }
}

// ---- reports --------------------------------------------------------------

/// Runs the dominance reports for a run configuration (the same JSON the
/// `dominate` command reads) and returns the report document.
/// `exit_code` receives 0 (pass), 2 (fail) or 3 (budget).
///
/// # Safety
/// `config_json` is a NUL-terminated string; outputs are writable.
#[no_mangle]
pub unsafe extern "C" fn ergo_dominance_report_json(
    config_json: *const c_char,
    out_json: *mut *mut c_char,
    exit_code: *mut i32,
) -> ErgoStatus {
    guard(|| {
        let cfg = RunConfig::from_json(read_str(config_json, "config_json")?)?;
        let (status, json, _) = dominate_artifacts(&cfg)?;
        let out = out_ptr(out_json, "out_json")?;
        let code = out_ptr(exit_code, "exit_code")?;
        *code = status.exit_code();
        *out = into_c_string(json);
        Ok(())
    })
}
