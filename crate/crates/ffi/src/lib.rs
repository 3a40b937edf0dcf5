//! C interface to `bellcert`.
//!
//! Every function returns a status code (`BELLCERT_OK` on success) and writes
//! results through out-pointers. Strings returned to the caller are
//! NUL-terminated, heap-allocated, and must be released with
//! [`bellcert_string_free`]; handles must be released with their matching
//! `_free` function. After a failure [`bellcert_last_error`] returns a
//! description of the most recent error on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bellcert::bigmath::decimal::faithful_digits;
use bellcert::bigmath::{
    parse_rational, rational_string, to_decimal, to_decimal_upper, ApproxResult, PrecReal,
};
use bellcert::combinat::{bell_recurrence, partial_bell, shared_table, PartialBellInput};
use bellcert::quadrature::{
    verify_bell_integral, verify_final_identity, verify_hk_integral, QuadReport,
};
use bellcert::specfun::{bessel_i, kummer_1f1};
use bellcert::theorem::{verify_theorem, TheoremReport};
use bellcert::Error;

pub const BELLCERT_OK: i32 = 0;
pub const BELLCERT_NULL_POINTER: i32 = 1;
pub const BELLCERT_INVALID_ARGUMENT: i32 = 2;
pub const BELLCERT_DOMAIN_ERROR: i32 = 3;
pub const BELLCERT_OVERFLOW: i32 = 4;
pub const BELLCERT_NO_CONVERGENCE: i32 = 5;
pub const BELLCERT_INTERNAL_ERROR: i32 = 6;

/// Integral identity selector for [`bellcert_verify_integral`].
pub const BELLCERT_IDENTITY_HK: i32 = 0;
pub const BELLCERT_IDENTITY_BELL: i32 = 1;
pub const BELLCERT_IDENTITY_FINAL: i32 = 2;

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> i32 {
    match e {
        Error::Domain(_) => BELLCERT_DOMAIN_ERROR,
        Error::ExponentOverflow => BELLCERT_OVERFLOW,
        Error::Divergence { .. } | Error::Convergence { .. } => BELLCERT_NO_CONVERGENCE,
        Error::DivisionByZero => BELLCERT_DOMAIN_ERROR,
        Error::Precondition(_) | Error::OutOfRange { .. } | Error::Parse(_) => {
            BELLCERT_INVALID_ARGUMENT
        }
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

// runs `body`, mapping errors and panics to status codes
fn guarded<F>(body: F) -> i32
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            BELLCERT_OK
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer passed for {what}"));
            BELLCERT_NULL_POINTER
        }
        Ok(Err(Failure::Invalid(msg))) => {
            set_error(msg);
            BELLCERT_INVALID_ARGUMENT
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal error".into());
            BELLCERT_INTERNAL_ERROR
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Invalid(format!("{what} is not valid UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure::Invalid("interior NUL in output".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn check_out<T>(out: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure::Null("out"))
    } else {
        Ok(())
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bellcert_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. Free with [`bellcert_string_free`].
#[no_mangle]
pub extern "C" fn bellcert_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        Some(msg) => CString::new(msg.replace('\0', " "))
            .map(CString::into_raw)
            .unwrap_or(ptr::null_mut()),
        None => ptr::null_mut(),
    })
}

/// Bell number `B_n` as a decimal string.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn bellcert_bell(n: u32, out: *mut *mut c_char) -> i32 {
    guarded(|| {
        check_out(out)?;
        let seq = bell_recurrence(n);
        write_string(
            out,
            seq.get(n as usize).expect("sequence covers n").to_string(),
        )
    })
}

/// Stirling number of the second kind `S(n, k)` as a decimal string.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn bellcert_stirling2(n: u32, k: u32, out: *mut *mut c_char) -> i32 {
    guarded(|| {
        check_out(out)?;
        let v = shared_table(n).get(n, k)?;
        write_string(out, v.to_string())
    })
}

/// Partial Bell polynomial at `count` rationals given as "p/q" strings.
///
/// # Safety
/// `x` must point to `count` valid NUL-terminated strings and `out` must be
/// valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn bellcert_partial_bell(
    n: u32,
    k: u32,
    x: *const *const c_char,
    count: usize,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        check_out(out)?;
        if x.is_null() && count > 0 {
            return Err(Failure::Null("x"));
        }
        let mut xs = Vec::with_capacity(count);
        for i in 0..count {
            xs.push(parse_rational(read_str(*x.add(i), "x[i]")?)?);
        }
        let v = partial_bell(&PartialBellInput::new(n, k, xs)?);
        write_string(out, rational_string(&v))
    })
}

/// An approximate value with its error bound.
pub struct BellcertApprox {
    inner: ApproxResult,
    precision: u32,
}

/// Kummer `1F1(a; b; z)` at rational strings, to absolute accuracy `2^-precision`.
///
/// # Safety
/// `a`, `b`, `z` must be valid NUL-terminated strings and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn bellcert_hyp1f1(
    a: *const c_char,
    b: *const c_char,
    z: *const c_char,
    precision: u32,
    out: *mut *mut BellcertApprox,
) -> i32 {
    guarded(|| {
        check_out(out)?;
        let a = parse_rational(read_str(a, "a")?)?;
        let b = parse_rational(read_str(b, "b")?)?;
        let z = parse_rational(read_str(z, "z")?)?;
        let inner = kummer_1f1(&a, &b, &z, precision)?;
        *out = Box::into_raw(Box::new(BellcertApprox { inner, precision }));
        Ok(())
    })
}

/// Modified Bessel `I_order(z)` for `z ≥ 0` given as a rational string.
///
/// # Safety
/// `z` must be a valid NUL-terminated string and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn bellcert_bessel_i(
    order: u32,
    z: *const c_char,
    precision: u32,
    out: *mut *mut BellcertApprox,
) -> i32 {
    guarded(|| {
        check_out(out)?;
        let z = PrecReal::from_rational(&parse_rational(read_str(z, "z")?)?, precision + 64);
        let inner = bessel_i(order, &z, precision)?;
        *out = Box::into_raw(Box::new(BellcertApprox { inner, precision }));
        Ok(())
    })
}

/// Decimal value, faithful at the working precision.
///
/// # Safety
/// `h` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn bellcert_approx_value(
    h: *const BellcertApprox,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        check_out(out)?;
        let h = h.as_ref().ok_or(Failure::Null("handle"))?;
        write_string(
            out,
            to_decimal(&h.inner.value, faithful_digits(h.precision)),
        )
    })
}

/// Error bound, rounded up to three significant digits.
///
/// # Safety
/// `h` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn bellcert_approx_error_bound(
    h: *const BellcertApprox,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        check_out(out)?;
        let h = h.as_ref().ok_or(Failure::Null("handle"))?;
        let b = &h.inner.error_bound;
        write_string(
            out,
            if b.is_zero() {
                "0".into()
            } else {
                to_decimal_upper(b, 3)
            },
        )
    })
}

/// Number of series terms summed.
///
/// # Safety
/// `h` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn bellcert_approx_terms_used(
    h: *const BellcertApprox,
    out: *mut usize,
) -> i32 {
    guarded(|| {
        check_out(out)?;
        let h = h.as_ref().ok_or(Failure::Null("handle"))?;
        *out = h.inner.terms_used;
        Ok(())
    })
}

/// Releases an approximation handle. Null is ignored.
///
/// # Safety
/// `h` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn bellcert_approx_free(h: *mut BellcertApprox) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Reports from a formula verification run over `n = 1..n_max`.
pub struct BellcertTheoremReports {
    reports: Vec<TheoremReport>,
}

/// Verifies the Bell-number formula for `n = 1..n_max` at `precision` bits.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn bellcert_verify_theorem(
    n_max: u32,
    precision: u32,
    out: *mut *mut BellcertTheoremReports,
) -> i32 {
    guarded(|| {
        check_out(out)?;
        let reports = verify_theorem(n_max, precision)?;
        *out = Box::into_raw(Box::new(BellcertTheoremReports { reports }));
        Ok(())
    })
}

/// Number of reports in the handle, or 0 for null.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bellcert_theorem_reports_len(h: *const BellcertTheoremReports) -> usize {
    h.as_ref().map_or(0, |h| h.reports.len())
}

/// Pass flag and residual of report `index`.
///
/// # Safety
/// `h` must be a live handle; `pass` and `residual` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn bellcert_theorem_report_get(
    h: *const BellcertTheoremReports,
    index: usize,
    n: *mut u32,
    pass: *mut bool,
    residual: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        check_out(n)?;
        check_out(pass)?;
        check_out(residual)?;
        let h = h.as_ref().ok_or(Failure::Null("handle"))?;
        let r = h.reports.get(index).ok_or(Failure::Lib(Error::OutOfRange {
            what: "report index",
            index,
            limit: h.reports.len(),
        }))?;
        *n = r.n;
        *pass = r.pass;
        write_string(residual, to_decimal_upper(&r.residual, 3))
    })
}

/// Releases a report handle. Null is ignored.
///
/// # Safety
/// `h` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn bellcert_theorem_reports_free(h: *mut BellcertTheoremReports) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Checks one integral identity and writes its pass flag.
///
/// `identity` is one of the `BELLCERT_IDENTITY_*` constants; `param` is `k`
/// or `n`; `z` (a rational string) is only read for the `H_k` identity.
///
/// # Safety
/// `z` must be null or a valid NUL-terminated string; `pass` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn bellcert_verify_integral(
    identity: i32,
    param: u32,
    z: *const c_char,
    tolerance: f64,
    precision: u32,
    pass: *mut bool,
) -> i32 {
    guarded(|| {
        check_out(pass)?;
        let report: QuadReport = match identity {
            BELLCERT_IDENTITY_HK => {
                let z = parse_rational(read_str(z, "z")?)?;
                verify_hk_integral(param, &z, tolerance, precision)?
            }
            BELLCERT_IDENTITY_BELL => verify_bell_integral(param, tolerance, precision)?,
            BELLCERT_IDENTITY_FINAL => verify_final_identity(param, tolerance, precision)?,
            other => return Err(Failure::Invalid(format!("unknown identity {other}"))),
        };
        *pass = report.pass;
        Ok(())
    })
}
