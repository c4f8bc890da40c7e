use std::ffi::{CStr, CString};
use std::ptr;

use coxeter_chein_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(cc_last_error()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn a2_pipeline() {
    unsafe {
        let mut d = ptr::null_mut();
        assert_eq!(
            cc_diagram_from_text(c("coxeter v1\nrank 2\nedge 1 2 3\n").as_ptr(), &mut d),
            CcStatus::Ok
        );
        assert_eq!(cc_diagram_rank(d), 2);

        let mut g = ptr::null_mut();
        assert_eq!(cc_group_enumerate(d, 100, &mut g), CcStatus::Ok);
        assert_eq!(cc_group_order(g), 6);

        let mut l = ptr::null_mut();
        assert_eq!(cc_loop_chein(g, &mut l), CcStatus::Ok);
        assert_eq!(cc_loop_order(l), 12);

        // u·u = e, and u is element |G|.
        let mut p = usize::MAX;
        assert_eq!(cc_loop_product(l, 6, 6, &mut p), CcStatus::Ok);
        assert_eq!(p, 0);
        assert_eq!(cc_loop_product(l, 12, 0, &mut p), CcStatus::OutOfRange);
        assert!(last_error().contains("out of range"));

        let mut moufang = false;
        assert_eq!(cc_loop_is_moufang(l, &mut moufang), CcStatus::Ok);
        assert!(moufang);

        let mut aut = 0;
        assert_eq!(cc_loop_aut_order(l, 10_000_000, &mut aut), CcStatus::Ok);
        assert_eq!(aut, 108);
        assert_eq!(cc_loop_aut_order(l, 2, &mut aut), CcStatus::ResourceLimit);

        cc_loop_free(l);
        cc_group_free(g);
        cc_diagram_free(d);
    }
}

#[test]
fn cohomology_dims() {
    unsafe {
        let mut d = ptr::null_mut();
        let text = c("coxeter v1\nrank 3\nedge 1 2 3\nedge 1 3 3\nedge 2 3 3\n");
        assert_eq!(cc_diagram_from_text(text.as_ptr(), &mut d), CcStatus::Ok);
        let mut dims = CcCohomologyDims::default();
        assert_eq!(cc_diagram_cohomology(d, &mut dims), CcStatus::Ok);
        assert_eq!((dims.c0, dims.c1, dims.c2), (3, 3, 0));
        assert_eq!((dims.z1, dims.b1, dims.h1), (3, 2, 1));
        let mut g = ptr::null_mut();
        assert_eq!(cc_group_enumerate(d, 1000, &mut g), CcStatus::ResourceLimit);
        assert!(g.is_null());
        cc_diagram_free(d);
    }
}

#[test]
fn errors() {
    unsafe {
        let mut d = ptr::null_mut();
        assert_eq!(
            cc_diagram_from_text(c("coxeter v1\nrank 2\nedge 1 2 2\n").as_ptr(), &mut d),
            CcStatus::ParseError
        );
        assert!(last_error().starts_with("3:10:"), "{}", last_error());
        assert!(d.is_null());
        assert_eq!(
            cc_diagram_from_text(c("graph v1\nedge 1 2\n").as_ptr(), &mut d),
            CcStatus::WrongInput
        );
        assert_eq!(cc_diagram_from_text(ptr::null(), &mut d), CcStatus::NullPointer);
        let bad = [0xffu8, 0];
        assert_eq!(cc_diagram_from_text(bad.as_ptr().cast(), &mut d), CcStatus::InvalidUtf8);
        assert_eq!(cc_diagram_rank(ptr::null()), 0);
        let mut n = 0;
        assert_eq!(cc_loop_aut_order(ptr::null(), 1, &mut n), CcStatus::NullPointer);
        cc_diagram_free(ptr::null_mut());
        cc_string_free(ptr::null_mut());
    }
}

#[test]
fn loop_from_table() {
    unsafe {
        let mut l = ptr::null_mut();
        let t = c("table v1 2\n0 1\n1 0\n");
        assert_eq!(cc_loop_from_text(t.as_ptr(), &mut l), CcStatus::Ok);
        assert_eq!(cc_loop_order(l), 2);
        assert_eq!(last_error(), "");
        cc_loop_free(l);
    }
}

#[test]
fn run_json() {
    unsafe {
        let mut out = ptr::null_mut();
        let mut code = -1;
        let text = c("coxeter v1\nrank 2\nedge 1 2 3\n");
        assert_eq!(
            cc_run_json(c("loop").as_ptr(), text.as_ptr(), 0, 0, &mut out, &mut code),
            CcStatus::Ok
        );
        assert_eq!(code, 0);
        let json: serde_json::Value = serde_json::from_str(CStr::from_ptr(out).to_str().unwrap()).unwrap();
        assert_eq!(json["summary"]["loop_order"], 12);
        assert_eq!(json["schema"], 1);
        cc_string_free(out);

        assert_eq!(
            cc_run_json(c("bogus").as_ptr(), text.as_ptr(), 0, 0, &mut out, &mut code),
            CcStatus::WrongInput
        );
        assert_eq!(
            cc_run_json(c("loop").as_ptr(), ptr::null(), 0, 0, &mut out, &mut code),
            CcStatus::WrongInput
        );
        assert_eq!(
            cc_run_json(
                c("group").as_ptr(),
                c("coxeter v1\nrank 3\nedge 1 2 3\nedge 2 3 3\nedge 1 3 3\n").as_ptr(),
                30,
                0,
                &mut out,
                &mut code
            ),
            CcStatus::ResourceLimit
        );
    }
}

#[test]
fn header_declares_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/coxeter_chein.h")).unwrap();
    for name in [
        "cc_last_error",
        "cc_diagram_from_text",
        "cc_diagram_free",
        "cc_diagram_rank",
        "cc_diagram_cohomology",
        "cc_group_enumerate",
        "cc_group_free",
        "cc_group_order",
        "cc_loop_chein",
        "cc_loop_from_text",
        "cc_loop_free",
        "cc_loop_order",
        "cc_loop_product",
        "cc_loop_is_moufang",
        "cc_loop_aut_order",
        "cc_run_json",
        "cc_string_free",
        "typedef struct CcDiagram CcDiagram",
        "CC_STATUS_RESOURCE_LIMIT = 5",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
