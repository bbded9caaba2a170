//! C ABI over `univdef`.
//!
//! Rings and series are opaque heap handles released with their `_free`
//! function. Every fallible call returns a [`UdStatus`]; on failure the
//! message is available from [`ud_last_error`] on the same thread. Strings
//! returned through out-parameters are owned by the caller and released with
//! [`ud_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use univdef::artin::{ArtinRing, Ring};
use univdef::deformation::{versal_family, VersalPoint};
use univdef::nottingham::{base_sigma, Automorphism};
use univdef::series::TruncatedSeries;
use univdef::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UdStatus {
    Ok = 0,
    Parse = 1,
    UnsupportedSize = 2,
    RingMismatch = 3,
    NotUnit = 4,
    NotSquare = 5,
    BadBranch = 6,
    NonNilpotentConstant = 7,
    PrecisionUnderflow = 8,
    NotAutomorphism = 9,
    IdentityAtPrecision = 10,
    SearchExhausted = 11,
    NotInvertible = 12,
    InvalidInput = 13,
    NullPointer = 14,
    InvalidUtf8 = 15,
    Panic = 16,
}

impl From<&Error> for UdStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parse { .. } => UdStatus::Parse,
            Error::UnsupportedSize { .. } => UdStatus::UnsupportedSize,
            Error::RingMismatch { .. } => UdStatus::RingMismatch,
            Error::NotUnit => UdStatus::NotUnit,
            Error::NotSquare => UdStatus::NotSquare,
            Error::BadBranch { .. } => UdStatus::BadBranch,
            Error::NonNilpotentConstant => UdStatus::NonNilpotentConstant,
            Error::PrecisionUnderflow(_) => UdStatus::PrecisionUnderflow,
            Error::NotAutomorphism(_) => UdStatus::NotAutomorphism,
            Error::IdentityAtPrecision(_) => UdStatus::IdentityAtPrecision,
            Error::SearchExhausted(_) => UdStatus::SearchExhausted,
            Error::NotInvertible => UdStatus::NotInvertible,
            Error::InvalidInput(_) => UdStatus::InvalidInput,
        }
    }
}

/// A finite Artinian ring.
pub struct UdRing(Arc<ArtinRing>);

/// A truncated power series over a [`UdRing`].
pub struct UdSeries(TruncatedSeries<ArtinRing>);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(UdStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(UdStatus::from(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> UdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            UdStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            UdStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(UdStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(UdStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(UdStatus::NullPointer, format!("{name} is null")))
}

unsafe fn write_out<T>(out: *mut T, value: T, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(UdStatus::NullPointer, format!("{name} is null")));
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("interior NULs replaced").into_raw()
}

fn automorphism(s: &UdSeries) -> Result<Automorphism<ArtinRing>, Failure> {
    Ok(Automorphism::new(s.0.clone())?)
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ud_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ud_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ud_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a ring descriptor such as `F5[e]/(e^3)` or `cyclo(4)`.
///
/// # Safety
/// `descriptor` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ud_ring_new(descriptor: *const c_char, out: *mut *mut UdRing) -> UdStatus {
    guard(|| {
        let desc = str_arg(descriptor, "descriptor")?;
        let ring = ArtinRing::parse(desc)?;
        write_out(out, Box::into_raw(Box::new(UdRing(Arc::new(ring)))), "out")
    })
}

/// # Safety
/// `ring` must come from [`ud_ring_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ud_ring_free(ring: *mut UdRing) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// Number of elements, or `UnsupportedSize` when it does not fit in 64 bits.
///
/// # Safety
/// `ring` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ud_ring_cardinality(ring: *const UdRing, out: *mut u64) -> UdStatus {
    guard(|| {
        let r = handle(ring, "ring")?;
        let n = r.0.cardinality().ok_or_else(|| Failure(UdStatus::UnsupportedSize, "cardinality overflows u64".into()))?;
        write_out(out, n, "out")
    })
}

/// Parse a series literal such as `t + 2*t^3 @prec=8`.
///
/// # Safety
/// `ring` must be a live handle, `literal` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ud_series_parse(ring: *const UdRing, literal: *const c_char, out: *mut *mut UdSeries) -> UdStatus {
    guard(|| {
        let r = handle(ring, "ring")?;
        let lit = str_arg(literal, "literal")?;
        let s = TruncatedSeries::parse(Arc::clone(&r.0), lit)?;
        write_out(out, Box::into_raw(Box::new(UdSeries(s))), "out")
    })
}

/// # Safety
/// `series` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ud_series_free(series: *mut UdSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Canonical text form, released with [`ud_string_free`].
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ud_series_to_string(series: *const UdSeries, out: *mut *mut c_char) -> UdStatus {
    guard(|| {
        let s = handle(series, "series")?;
        write_out(out, owned_string(s.0.to_string()), "out")
    })
}

/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ud_series_prec(series: *const UdSeries, out: *mut usize) -> UdStatus {
    guard(|| write_out(out, handle(series, "series")?.0.prec(), "out"))
}

/// Coefficient of `t^index` as a ring literal.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ud_series_coefficient(series: *const UdSeries, index: usize, out: *mut *mut c_char) -> UdStatus {
    guard(|| {
        let s = handle(series, "series")?;
        if index >= s.0.prec() {
            return Err(Failure(UdStatus::PrecisionUnderflow, format!("t^{index} is beyond precision {}", s.0.prec())));
        }
        write_out(out, owned_string(s.0.ring().format_element(s.0.coeff(index))), "out")
    })
}

/// `g ∘ f`.
///
/// # Safety
/// `g` and `f` must be live handles over the same ring; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ud_series_compose(g: *const UdSeries, f: *const UdSeries, out: *mut *mut UdSeries) -> UdStatus {
    guard(|| {
        let g = handle(g, "g")?;
        let f = handle(f, "f")?;
        let c = g.0.compose(&f.0)?;
        write_out(out, Box::into_raw(Box::new(UdSeries(c))), "out")
    })
}

/// Least `n <= cap` with `series^n = t`, or 0 when none is found.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ud_series_order(series: *const UdSeries, cap: u64, out: *mut u64) -> UdStatus {
    guard(|| {
        let a = automorphism(handle(series, "series")?)?;
        write_out(out, a.order(cap).value().unwrap_or(0), "out")
    })
}

/// Hasse conductor and the residue of its leading coefficient.
///
/// # Safety
/// `series` must be a live handle; both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn ud_series_conductor(series: *const UdSeries, out_value: *mut usize, out_leading: *mut u8) -> UdStatus {
    guard(|| {
        let c = automorphism(handle(series, "series")?)?.hasse_conductor()?;
        write_out(out_value, c.value, "out_value")?;
        write_out(out_leading, c.leading, "out_leading")
    })
}

/// `t / sqrt(t^2 + 1)` modulo `t^prec`.
///
/// # Safety
/// `ring` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ud_base_sigma(ring: *const UdRing, prec: usize, out: *mut *mut UdSeries) -> UdStatus {
    guard(|| {
        let r = handle(ring, "ring")?;
        let s = base_sigma(Arc::clone(&r.0), prec)?;
        write_out(out, Box::into_raw(Box::new(UdSeries(s.into_series()))), "out")
    })
}

/// `t / sqrt(t^2 + y)` for a root `y` of `Φ₅` congruent to 1.
///
/// # Safety
/// `ring` must be a live handle, `y` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ud_versal_family(ring: *const UdRing, y: *const c_char, prec: usize, out: *mut *mut UdSeries) -> UdStatus {
    guard(|| {
        let r = handle(ring, "ring")?;
        let y = r.0.parse_element(str_arg(y, "y")?)?;
        let point = VersalPoint::new(Arc::clone(&r.0), y)?;
        let lift = versal_family(&point, prec)?;
        write_out(out, Box::into_raw(Box::new(UdSeries(lift.automorphism().series().clone()))), "out")
    })
}

/// Run a CLI subcommand. `argv` excludes the program name. The JSON report
/// (or error text) goes to `out_json` and the process exit code to
/// `out_exit_code`; the status is `Ok` whenever the command ran.
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn ud_run(argc: c_int, argv: *const *const c_char, out_json: *mut *mut c_char, out_exit_code: *mut c_int) -> UdStatus {
    guard(|| {
        if argc < 0 || (argc > 0 && argv.is_null()) {
            return Err(Failure(UdStatus::NullPointer, "argv is null".into()));
        }
        let mut args = vec!["univdef".to_string()];
        for i in 0..argc as usize {
            args.push(str_arg(*argv.add(i), "argv entry")?.to_string());
        }
        let outcome = univdef::cli::execute(args);
        let text = if outcome.stdout.is_empty() { outcome.stderr } else { outcome.stdout };
        write_out(out_exit_code, outcome.code, "out_exit_code")?;
        write_out(out_json, owned_string(text), "out_json")
    })
}
