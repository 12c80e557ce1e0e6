use mader_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

const PATH_INSTANCE: &str = "3 2 2\n1\n3\n1 2\n2 3\n";

fn last_error() -> String {
    unsafe { CStr::from_ptr(mader_last_error()) }.to_str().unwrap().to_string()
}

fn parse(text: &str) -> (MaderStatus, *mut MaderInstance) {
    let c = CString::new(text).unwrap();
    let mut inst = ptr::null_mut();
    let s = unsafe { mader_instance_parse(c.as_ptr(), &mut inst) };
    (s, inst)
}

#[test]
fn parse_solve_and_read_paths() {
    let (s, inst) = parse(PATH_INSTANCE);
    assert_eq!(s, MaderStatus::Ok);
    assert!(last_error().is_empty());
    unsafe {
        assert_eq!(mader_instance_vertex_count(inst), 3);
        assert_eq!(mader_instance_edge_count(inst), 2);
        let mut report = ptr::null_mut();
        assert_eq!(mader_solve(inst, 1, &mut report), MaderStatus::Ok);
        assert_eq!(mader_report_packing_size(report), 1);
        assert_eq!(mader_report_field_size(report), 3);
        assert_eq!(mader_report_iterations(report), 1);

        let mut len = 0;
        assert_eq!(mader_report_path(report, 0, ptr::null_mut(), 0, &mut len), MaderStatus::OutOfRange);
        assert_eq!(len, 3);
        let mut buf = vec![0u32; len];
        assert_eq!(mader_report_path(report, 0, buf.as_mut_ptr(), buf.len(), &mut len), MaderStatus::Ok);
        assert!(buf == [1, 2, 3] || buf == [3, 2, 1], "{buf:?}");
        assert_eq!(mader_report_path(report, 1, buf.as_mut_ptr(), buf.len(), &mut len), MaderStatus::OutOfRange);

        let text = mader_report_packing_text(report);
        assert_eq!(CStr::from_ptr(text).to_str().unwrap(), "1\n1 2 3\n");
        mader_string_free(text);

        let mut p = 0;
        assert_eq!(mader_oracle(inst, 10, &mut p), MaderStatus::Ok);
        assert_eq!(p, 1);
        assert_eq!(mader_oracle(inst, 2, &mut p), MaderStatus::OracleCap);
        assert!(last_error().contains("cap"));

        mader_report_free(report);
        mader_instance_free(inst);
    }
}

#[test]
fn parse_errors_carry_status_and_message() {
    let (s, inst) = parse("3 2 2\n1\n3\n1 2\n2 9\n");
    assert_eq!(s, MaderStatus::Parse);
    assert!(inst.is_null());
    assert!(last_error().contains("line 5"), "{}", last_error());

    let bytes = [0xffu8, 0];
    let mut inst = ptr::null_mut();
    let s = unsafe { mader_instance_parse(bytes.as_ptr().cast(), &mut inst) };
    assert_eq!(s, MaderStatus::InvalidUtf8);
}

#[test]
fn null_handles_are_rejected() {
    unsafe {
        let mut inst = ptr::null_mut();
        assert_eq!(mader_instance_parse(ptr::null(), &mut inst), MaderStatus::NullPointer);
        let c = CString::new(PATH_INSTANCE).unwrap();
        assert_eq!(mader_instance_parse(c.as_ptr(), ptr::null_mut()), MaderStatus::NullPointer);
        let mut report = ptr::null_mut();
        assert_eq!(mader_solve(ptr::null(), 1, &mut report), MaderStatus::NullPointer);
        assert!(last_error().contains("null"));
        let mut p = 0;
        assert_eq!(mader_oracle(ptr::null(), 10, &mut p), MaderStatus::NullPointer);
        let mut len = 0;
        assert_eq!(mader_report_path(ptr::null(), 0, ptr::null_mut(), 0, &mut len), MaderStatus::NullPointer);
        assert_eq!(mader_instance_vertex_count(ptr::null()), 0);
        assert_eq!(mader_report_packing_size(ptr::null()), 0);
        assert!(mader_report_packing_text(ptr::null()).is_null());
        mader_instance_free(ptr::null_mut());
        mader_report_free(ptr::null_mut());
        mader_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/mader.h")).unwrap();
    for name in [
        "mader_last_error",
        "mader_instance_parse",
        "mader_instance_free",
        "mader_solve",
        "mader_oracle",
        "mader_report_path",
        "mader_report_packing_text",
        "mader_string_free",
        "MADER_STATUS_PARSE = 2",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
