use std::ffi::CStr;
use std::ptr;

use pencil_monodromy_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(pm_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn pipeline_round_trip() {
    unsafe {
        let alphas = [2.0, 1.0];
        let mut curve = ptr::null_mut();
        assert_eq!(pm_curve_new(3, 2, alphas.as_ptr(), 2, &mut curve), PmStatus::Ok);
        assert_eq!(pm_curve_set_segments(curve, 32), PmStatus::Ok);
        let mut report = ptr::null_mut();
        assert_eq!(pm_run_pipeline(curve, &mut report), PmStatus::Ok);
        let mut passed = 0;
        assert_eq!(pm_report_passed(report, &mut passed), PmStatus::Ok);
        assert_eq!(passed, 1);

        let mut json = ptr::null_mut();
        assert_eq!(pm_report_json(report, 1, &mut json), PmStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        pm_string_free(json);
        assert!(text.contains("\"schema\":\"pencil-monodromy/1\""));
        assert!(!text.contains("\"timings\""));

        pm_report_free(report);
        pm_curve_free(curve);
    }
}

#[test]
fn invalid_input_and_null_pointers() {
    unsafe {
        let alphas = [1.0, 2.0];
        let mut curve = ptr::null_mut();
        assert_eq!(pm_curve_new(3, 2, alphas.as_ptr(), 2, &mut curve), PmStatus::InvalidInput);
        assert!(curve.is_null());
        assert!(last_error().contains("descending"));
        assert_eq!(pm_curve_new(3, 2, ptr::null(), 0, ptr::null_mut()), PmStatus::NullPointer);
        assert_eq!(pm_run_pipeline(ptr::null(), ptr::null_mut()), PmStatus::NullPointer);

        assert_eq!(pm_curve_new(2, 2, ptr::null(), 0, &mut curve), PmStatus::Ok);
        assert_eq!(pm_curve_set_tolerance(curve, -1.0), PmStatus::InvalidInput);
        assert_eq!(pm_curve_set_segments(curve, 1), PmStatus::InvalidInput);
        pm_curve_free(curve);
        pm_curve_free(ptr::null_mut());
        pm_string_free(ptr::null_mut());
    }
}

#[test]
fn closed_forms_with_capacity_protocol() {
    unsafe {
        let (mut lo, mut len) = (0i64, 0usize);
        let mut buf = [0i64; 4];
        let st = pm_closed_form_generic(3, 2, &mut lo, buf.as_mut_ptr(), buf.len(), &mut len);
        assert_eq!(st, PmStatus::BufferTooSmall);
        assert_eq!(len, 6);
        let mut buf = vec![0i64; len];
        let st = pm_closed_form_generic(3, 2, &mut lo, buf.as_mut_ptr(), buf.len(), &mut len);
        assert_eq!(st, PmStatus::Ok);
        assert_eq!((lo, buf), (0, vec![-1, 1, -1, 1, -1, 1]));

        let mut buf = vec![0i64; 16];
        let st = pm_closed_form_tame(4, 2, &mut lo, buf.as_mut_ptr(), buf.len(), &mut len);
        assert_eq!(st, PmStatus::Ok);
        assert_eq!(&buf[..len], &[-1, 1, -1, 1]);
    }
}

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(pm_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
