//! C ABI over the `powertower` engine.
//!
//! Values cross the boundary as opaque `PtPowNum` handles owned by the
//! caller and released with `pt_free`. Strings returned by the library are
//! released with `pt_string_free`. Every function returns a `PtStatus`;
//! on failure `pt_last_error` describes the most recent error on the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use powertower::equality::{self, EquationInstance, Method, Outcome, Verdict};
use powertower::interval::eval_pownum;
use powertower::parser::{parse_equation, parse_pownum};
use powertower::{print_canonical, Error, PowNum, Rational};

/// Result code of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Magnitude = 4,
    Unsupported = 5,
    Domain = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PtOutcome {
    Equal = 0,
    NotEqual = 1,
    Unknown = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PtMethod {
    ExactField = 0,
    MonomialNormalForm = 1,
    TranscendenceRule = 2,
    IntervalSeparation = 3,
    Structural = 4,
}

/// Outcome of an equality decision. `width_log2` is meaningful only when
/// `has_width` is set.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PtVerdict {
    pub outcome: PtOutcome,
    pub method: PtMethod,
    pub has_width: bool,
    pub width_log2: i64,
}

/// Opaque handle to a positive real `B^E`.
pub struct PtPowNum(PowNum);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> PtStatus {
    match e {
        Error::Syntax { .. }
        | Error::Height { .. }
        | Error::AtomNotPowerOfBase { .. }
        | Error::Lowering(_)
        | Error::InvalidRational(_) => PtStatus::Parse,
        Error::Magnitude(_) => PtStatus::Magnitude,
        Error::UnsupportedShape(_) | Error::Depth(_) => PtStatus::Unsupported,
        _ => PtStatus::Domain,
    }
}

enum Fail {
    Null,
    Utf8,
    Engine(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Engine(e)
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            PtStatus::Ok
        }
        Ok(Err(Fail::Null)) => {
            set_last_error("null pointer argument");
            PtStatus::NullPointer
        }
        Ok(Err(Fail::Utf8)) => {
            set_last_error("string argument is not valid UTF-8");
            PtStatus::InvalidUtf8
        }
        Ok(Err(Fail::Engine(e))) => {
            set_last_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal error");
            PtStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail::Null);
    }
    CStr::from_ptr(s).to_str().map_err(|_| Fail::Utf8)
}

unsafe fn read_rational(s: *const c_char) -> Result<Rational, Fail> {
    Ok(read_str(s)?.trim().parse::<Rational>()?)
}

unsafe fn handle<'a>(x: *const PtPowNum) -> Result<&'a PowNum, Fail> {
    x.as_ref().map(|h| &h.0).ok_or(Fail::Null)
}

unsafe fn put_handle(out: *mut *mut PtPowNum, x: PowNum) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    *out = Box::into_raw(Box::new(PtPowNum(x)));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    *out = CString::new(s).expect("no interior nul").into_raw();
    Ok(())
}

fn c_verdict(v: &Verdict) -> PtVerdict {
    PtVerdict {
        outcome: match v.outcome {
            Outcome::Equal => PtOutcome::Equal,
            Outcome::NotEqual => PtOutcome::NotEqual,
            Outcome::Unknown => PtOutcome::Unknown,
        },
        method: match v.method {
            Method::ExactField => PtMethod::ExactField,
            Method::MonomialNormalForm => PtMethod::MonomialNormalForm,
            Method::TranscendenceRule => PtMethod::TranscendenceRule,
            Method::IntervalSeparation => PtMethod::IntervalSeparation,
            Method::Structural => PtMethod::Structural,
        },
        has_width: v.width_log2.is_some(),
        width_log2: v.width_log2.unwrap_or(0),
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn pt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses and lowers an expression such as `"(1/2)^^3"`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pt_parse(
    text: *const c_char,
    base: u64,
    out: *mut *mut PtPowNum,
) -> PtStatus {
    guard(|| {
        let x = parse_pownum(read_str(text)?, base)?;
        put_handle(out, x)
    })
}

/// `B^q` for the rational `q` written as `"p/q"` or `"p"`.
///
/// # Safety
/// `q` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pt_atom(base: u64, q: *const c_char, out: *mut *mut PtPowNum) -> PtStatus {
    guard(|| {
        let x = PowNum::atom(base, read_rational(q)?)?;
        put_handle(out, x)
    })
}

/// Tower of height `h` over `x`.
///
/// # Safety
/// `x` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pt_tower(x: *const PtPowNum, h: i64, out: *mut *mut PtPowNum) -> PtStatus {
    guard(|| {
        let t = handle(x)?.tower(h)?;
        put_handle(out, t)
    })
}

/// Product `x · y`.
///
/// # Safety
/// `x`, `y` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pt_mul(
    x: *const PtPowNum,
    y: *const PtPowNum,
    out: *mut *mut PtPowNum,
) -> PtStatus {
    guard(|| {
        let p = handle(x)?.mul(handle(y)?)?;
        put_handle(out, p)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `x` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pt_free(x: *mut PtPowNum) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

/// Canonical printed form; free the result with `pt_string_free`.
///
/// # Safety
/// `x` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pt_canonical(x: *const PtPowNum, out: *mut *mut c_char) -> PtStatus {
    guard(|| put_string(out, print_canonical(handle(x)?)))
}

/// Decimal enclosure `"[lo, hi]"` at `bits` of precision.
///
/// # Safety
/// `x` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pt_eval(x: *const PtPowNum, bits: u64, out: *mut *mut c_char) -> PtStatus {
    guard(|| {
        if bits < 16 {
            return Err(Error::Domain("precision must be at least 16 bits".into()).into());
        }
        let iv = eval_pownum(handle(x)?, bits)?;
        let digits = ((bits as f64 * std::f64::consts::LOG10_2) as usize).clamp(6, 80);
        put_string(out, iv.to_decimal_string(digits))
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Decides an equation such as `"2^^3 * 2^^3 = 4^^2"`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pt_verify_equation(
    text: *const c_char,
    base: u64,
    bits: u64,
    out: *mut PtVerdict,
) -> PtStatus {
    guard(|| {
        let eq = parse_equation(read_str(text)?, base)?;
        let v = eq.verify(bits);
        let out = out.as_mut().ok_or(Fail::Null)?;
        *out = c_verdict(&v);
        Ok(())
    })
}

/// Decides `(B^a)↑↑k · (B^b)↑↑m = (B^c)↑↑n`; rationals as `"p/q"`.
///
/// # Safety
/// `a`, `b`, `c` must be NUL-terminated strings and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pt_verify_instance(
    base: u64,
    a: *const c_char,
    b: *const c_char,
    c: *const c_char,
    k: i64,
    m: i64,
    n: i64,
    bits: u64,
    out: *mut PtVerdict,
) -> PtStatus {
    guard(|| {
        let inst = EquationInstance::new(
            base,
            read_rational(a)?,
            read_rational(b)?,
            read_rational(c)?,
            k,
            m,
            n,
        )?;
        let v = equality::verify_instance(&inst, bits)?;
        let out = out.as_mut().ok_or(Fail::Null)?;
        *out = c_verdict(&v);
        Ok(())
    })
}

/// All `c` solving the equation for given `a`, `b`, written as a JSON
/// array of `"p/q"` strings (`q = 1` is kept, as in search results).
///
/// # Safety
/// `a`, `b` must be NUL-terminated strings and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pt_solve_gamma(
    base: u64,
    a: *const c_char,
    b: *const c_char,
    k: i64,
    m: i64,
    n: i64,
    out: *mut *mut c_char,
) -> PtStatus {
    guard(|| {
        let sols = equality::solve_gamma(base, &read_rational(a)?, &read_rational(b)?, k, m, n)?;
        let list: Vec<String> = sols
            .iter()
            .map(|c| format!("\"{}\"", c.to_pq_string()))
            .collect();
        put_string(out, format!("[{}]", list.join(",")))
    })
}
