use std::ffi::{CStr, CString};
use std::ptr;

use dieudonne_ffi::*;

fn take(s: *mut std::ffi::c_char) -> serde_json::Value {
    assert!(!s.is_null());
    let v = serde_json::from_str(unsafe { CStr::from_ptr(s) }.to_str().unwrap()).unwrap();
    unsafe { dd_string_free(s) };
    v
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(dd_last_error()) }.to_str().unwrap().to_owned()
}

#[test]
fn slope_module_round_trip() {
    unsafe {
        let mut tw = ptr::null_mut();
        assert_eq!(dd_tower_new(3, 2, 2, 1, 10, &mut tw), DdStatus::Ok);
        assert_eq!(dd_tower_g(tw), 4);
        let mut m = ptr::null_mut();
        assert_eq!(dd_module_slope(tw, 1, &mut m), DdStatus::Ok);
        let mut twice = 0;
        assert_eq!(dd_module_newton_twice(m, DdMethod::Oracle, &mut twice), DdStatus::Ok);
        assert_eq!(twice, 2);

        let mut js = ptr::null_mut();
        assert_eq!(dd_module_to_json(m, &mut js), DdStatus::Ok);
        let text = CString::new(take(js).to_string()).unwrap();
        let mut m2 = ptr::null_mut();
        assert_eq!(dd_module_from_json(text.as_ptr(), &mut m2), DdStatus::Ok);
        let mut rep = ptr::null_mut();
        assert_eq!(dd_module_invariants(m2, DdMethod::Auto, &mut rep), DdStatus::Ok);
        let v = take(rep);
        assert_eq!((v["newton"]["index_num"].as_u64(), v["newton"]["index_den"].as_u64()), (Some(1), Some(1)));
        assert_eq!(v["a_number"], 1);

        dd_module_free(m);
        dd_module_free(m2);
        dd_tower_free(tw);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let mut tw = ptr::null_mut();
        assert_eq!(dd_tower_new(4, 1, 1, 1, 8, &mut tw), DdStatus::NotPrime);
        assert!(tw.is_null());
        assert!(last_error().contains("not prime"));

        assert_eq!(dd_tower_new(3, 1, 1, 1, 8, ptr::null_mut()), DdStatus::NullPointer);
        let mut m = ptr::null_mut();
        assert_eq!(dd_module_slope(ptr::null(), 0, &mut m), DdStatus::NullPointer);

        let bad = CString::new("{").unwrap();
        assert_eq!(dd_module_from_json(bad.as_ptr(), &mut m), DdStatus::Parse);
        assert!(!last_error().is_empty());

        let invalid = [0xffu8, 0];
        assert_eq!(dd_module_from_json(invalid.as_ptr().cast(), &mut m), DdStatus::InvalidUtf8);

        let mut js = ptr::null_mut();
        assert_eq!(dd_hecke_probe(7, 1, false, 1000, &mut js), DdStatus::SizeGuard);
        assert!(js.is_null());

        assert_eq!(dd_tower_new(3, 1, 1, 1, 8, &mut tw), DdStatus::Ok);
        assert!(last_error().is_empty());
        dd_tower_free(tw);
    }
}

#[test]
fn non_rapoport_example_and_hecke() {
    unsafe {
        let mut tw = ptr::null_mut();
        assert_eq!(dd_tower_new(5, 1, 2, 2, 6, &mut tw), DdStatus::Ok);
        let mut m = ptr::null_mut();
        assert_eq!(dd_module_non_rapoport_example(tw, &mut m), DdStatus::Ok);
        let mut rep = ptr::null_mut();
        assert_eq!(dd_module_invariants(m, DdMethod::Oracle, &mut rep), DdStatus::Ok);
        let v = take(rep);
        assert_eq!(v["flags"]["rapoport"], false);
        assert_eq!(v["flags"]["superspecial"], true);
        dd_module_free(m);

        let mut ss = ptr::null_mut();
        assert_eq!(dd_module_superspecial(tw, 0, 2, true, &mut ss), DdStatus::Ok);
        dd_module_free(ss);
        dd_tower_free(tw);

        let mut js = ptr::null_mut();
        assert_eq!(dd_hecke_probe(3, 1, false, 1_000_000, &mut js), DdStatus::Ok);
        assert_eq!(take(js)["counts"]["chart"], 33);
    }
}

#[test]
fn free_functions_accept_null() {
    unsafe {
        dd_tower_free(ptr::null_mut());
        dd_module_free(ptr::null_mut());
        dd_string_free(ptr::null_mut());
        assert_eq!(dd_tower_g(ptr::null()), 0);
    }
}
