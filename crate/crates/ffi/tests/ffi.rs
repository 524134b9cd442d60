use std::ffi::{CStr, CString};
use std::ptr;

use powertower_ffi::*;

fn take_string(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { pt_string_free(s) };
    out
}

fn blank_verdict() -> PtVerdict {
    PtVerdict {
        outcome: PtOutcome::Unknown,
        method: PtMethod::IntervalSeparation,
        has_width: false,
        width_log2: 0,
    }
}

#[test]
fn builds_towers_from_atoms() {
    unsafe {
        let q = CString::new("-1/2").unwrap();
        let mut a = ptr::null_mut();
        assert_eq!(pt_atom(2, q.as_ptr(), &mut a), PtStatus::Ok);
        let mut t = ptr::null_mut();
        assert_eq!(pt_tower(a, 2, &mut t), PtStatus::Ok);
        let mut sq = ptr::null_mut();
        assert_eq!(pt_mul(t, t, &mut sq), PtStatus::Ok);

        let mut s = ptr::null_mut();
        assert_eq!(pt_canonical(sq, &mut s), PtStatus::Ok);
        let printed = take_string(s);

        let mut parsed = ptr::null_mut();
        let text = CString::new("(1/2)^^3").unwrap();
        assert_eq!(pt_parse(text.as_ptr(), 2, &mut parsed), PtStatus::Ok);
        let mut s2 = ptr::null_mut();
        assert_eq!(pt_canonical(parsed, &mut s2), PtStatus::Ok);
        assert_eq!(printed, take_string(s2));

        for h in [a, t, sq, parsed] {
            pt_free(h);
        }
    }
}

#[test]
fn eval_encloses_sixteen() {
    unsafe {
        let text = CString::new("2^^3").unwrap();
        let mut x = ptr::null_mut();
        assert_eq!(pt_parse(text.as_ptr(), 2, &mut x), PtStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(pt_eval(x, 128, &mut s), PtStatus::Ok);
        let enc = take_string(s);
        assert!(enc.starts_with('[') && enc.contains("16"), "{enc}");
        assert_eq!(pt_eval(x, 4, &mut s), PtStatus::Domain);
        pt_free(x);
    }
}

#[test]
fn magnitude_overflow_is_reported() {
    unsafe {
        let text = CString::new("2^^6").unwrap();
        let mut x = ptr::null_mut();
        assert_eq!(pt_parse(text.as_ptr(), 2, &mut x), PtStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(pt_eval(x, 64, &mut s), PtStatus::Magnitude);
        assert!(s.is_null());
        pt_free(x);
    }
}

#[test]
fn verifies_equations_and_instances() {
    unsafe {
        let mut v = blank_verdict();
        let eq = CString::new("2^^3 * 2^^3 = 4^^2").unwrap();
        assert_eq!(
            pt_verify_equation(eq.as_ptr(), 2, 256, &mut v),
            PtStatus::Ok
        );
        assert_eq!(v.outcome, PtOutcome::Equal);
        assert_ne!(v.method, PtMethod::IntervalSeparation);

        let (a, b, c) = (
            CString::new("-1/2").unwrap(),
            CString::new("0").unwrap(),
            CString::new("-1").unwrap(),
        );
        assert_eq!(
            pt_verify_instance(2, a.as_ptr(), b.as_ptr(), c.as_ptr(), 2, 2, 3, 256, &mut v),
            PtStatus::Ok
        );
        assert_eq!(v.outcome, PtOutcome::NotEqual);

        let ne = CString::new("2^^3 = 4^^2").unwrap();
        assert_eq!(
            pt_verify_equation(ne.as_ptr(), 2, 256, &mut v),
            PtStatus::Ok
        );
        assert_eq!(v.outcome, PtOutcome::NotEqual);
    }
}

#[test]
fn solve_gamma_returns_json() {
    unsafe {
        let (a, b) = (CString::new("-1").unwrap(), CString::new("-1").unwrap());
        let mut s = ptr::null_mut();
        assert_eq!(
            pt_solve_gamma(2, a.as_ptr(), b.as_ptr(), 3, 3, 3, &mut s),
            PtStatus::Ok
        );
        assert_eq!(take_string(s), "[\"-2/1\"]");
        assert_eq!(
            pt_solve_gamma(2, a.as_ptr(), b.as_ptr(), 3, 3, 5, &mut s),
            PtStatus::Unsupported
        );
    }
}

#[test]
fn bad_inputs_map_to_status_codes() {
    unsafe {
        let mut x = ptr::null_mut();
        let bad = CString::new("2^^").unwrap();
        assert_eq!(pt_parse(bad.as_ptr(), 2, &mut x), PtStatus::Parse);
        assert!(!CStr::from_ptr(pt_last_error()).to_bytes().is_empty());

        let utf = [0xffu8, 0];
        assert_eq!(
            pt_parse(utf.as_ptr().cast(), 2, &mut x),
            PtStatus::InvalidUtf8
        );

        let one = CString::new("1").unwrap();
        assert_eq!(pt_atom(4, one.as_ptr(), &mut x), PtStatus::Domain);
        assert_eq!(pt_tower(ptr::null(), 2, &mut x), PtStatus::NullPointer);

        assert_eq!(pt_atom(2, one.as_ptr(), &mut x), PtStatus::Ok);
        assert!(CStr::from_ptr(pt_last_error()).to_bytes().is_empty());
        pt_free(x);
        pt_free(ptr::null_mut());
        pt_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/powertower.h"))
            .unwrap();
    for name in [
        "pt_parse",
        "pt_atom",
        "pt_tower",
        "pt_mul",
        "pt_free",
        "pt_canonical",
        "pt_eval",
        "pt_string_free",
        "pt_verify_equation",
        "pt_verify_instance",
        "pt_solve_gamma",
        "pt_last_error",
        "typedef struct PtPowNum PtPowNum",
        "PT_STATUS_MAGNITUDE",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
