use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use krein_frames_ffi::*;

fn real(entries: &[f64]) -> Vec<f64> {
    entries.iter().flat_map(|&x| [x, 0.0]).collect()
}

fn last_error() -> String {
    let p = kf_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn space(j: &[f64], n: usize) -> *mut KfSpace {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { kf_space_new(real(j).as_ptr(), n, &mut s) }, KfStatus::Ok);
    s
}

#[test]
fn axis_family_round_trip() {
    let s = space(&[1.0, 0.0, 0.0, -1.0], 2);
    let (mut p, mut q) = (0, 0);
    assert_eq!(unsafe { kf_space_signature(s, &mut p, &mut q) }, KfStatus::Ok);
    assert_eq!((p, q), (1, 1));
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(kf_family_new(s, &mut f), KfStatus::Ok);
        assert_eq!(kf_family_add(f, real(&[1.0, 0.0]).as_ptr(), 1, 2.0), KfStatus::Ok);
        assert_eq!(kf_family_add(f, real(&[0.0, 1.0]).as_ptr(), 1, 3.0), KfStatus::Ok);
        assert_eq!(kf_family_len(f), 2);
    }
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { kf_family_certify(f, &mut c) }, KfStatus::Ok);
    let mut is_frame = false;
    let mut opt = [0.0; 4];
    let mut est = [0.0; 4];
    unsafe {
        assert_eq!(kf_certificate_is_frame(c, &mut is_frame), KfStatus::Ok);
        assert_eq!(kf_certificate_optimal_bounds(c, opt.as_mut_ptr()), KfStatus::Ok);
        assert_eq!(kf_certificate_estimate_bounds(c, est.as_mut_ptr()), KfStatus::Ok);
        kf_certificate_free(c);
        kf_family_free(f);
        kf_space_free(s);
    }
    assert!(is_frame);
    assert_eq!(opt, [-9.0, -9.0, 4.0, 4.0]);
    assert_eq!(est, [-9.0, -9.0, 4.0, 4.0]);
}

#[test]
fn errors_are_reported_with_codes() {
    let mut s = ptr::null_mut();
    let bad = real(&[1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, -1.0]);
    assert_eq!(unsafe { kf_space_new(bad.as_ptr(), 3, &mut s) }, KfStatus::Validation);
    assert!(s.is_null());
    assert!(last_error().contains("J is not"), "{}", last_error());
    assert_eq!(unsafe { kf_space_new(ptr::null(), 2, &mut s) }, KfStatus::NullPointer);

    let s = space(&[1.0, 0.0, 0.0, -1.0], 2);
    let mut f = ptr::null_mut();
    unsafe {
        kf_family_new(s, &mut f);
        assert_eq!(
            kf_family_add(f, real(&[1.0, 1.0]).as_ptr(), 1, 1.0),
            KfStatus::MemberClassification
        );
        assert_eq!(
            kf_family_add(f, real(&[1.0, 0.0]).as_ptr(), 1, -1.0),
            KfStatus::Validation
        );
        assert_eq!(
            kf_family_add(f, real(&[0.0, 0.0]).as_ptr(), 1, 1.0),
            KfStatus::Validation
        );
        assert_eq!(kf_family_len(f), 0);
        assert_eq!(kf_family_add(f, real(&[1.0, 0.0]).as_ptr(), 1, 1.0), KfStatus::Ok);
        assert!(kf_last_error_message().is_null());
    }
    let mut c = ptr::null_mut();
    let mut b = [0.0; 4];
    let mut is_frame = true;
    unsafe {
        assert_eq!(kf_family_certify(f, &mut c), KfStatus::Ok);
        kf_certificate_is_frame(c, &mut is_frame);
        assert_eq!(kf_certificate_optimal_bounds(c, b.as_mut_ptr()), KfStatus::NotAFrame);
        kf_certificate_free(c);
        kf_family_free(f);
        kf_space_free(s);
        kf_space_free(ptr::null_mut());
    }
    assert!(!is_frame);
}

#[test]
fn run_json_matches_cli_report() {
    let spec = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/c3_example.json")).unwrap();
    let spec = CString::new(spec).unwrap();
    let cmd = CString::new("certify").unwrap();
    let mut out = ptr::null_mut();
    let mut passed = false;
    assert_eq!(
        unsafe { kf_run_json(spec.as_ptr(), cmd.as_ptr(), 0, 50, &mut out, &mut passed) },
        KfStatus::Ok
    );
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { kf_string_free(out) };
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(passed);
    assert_eq!(report["command"], "certify");

    let cmd = CString::new("nope").unwrap();
    assert_eq!(
        unsafe { kf_run_json(spec.as_ptr(), cmd.as_ptr(), 0, 50, &mut out, &mut passed) },
        KfStatus::InvalidArgument
    );
    let bad = CString::new("{\"space\": 3}").unwrap();
    let cmd = CString::new("certify").unwrap();
    assert_eq!(
        unsafe { kf_run_json(bad.as_ptr(), cmd.as_ptr(), 0, 50, &mut out, &mut passed) },
        KfStatus::Schema
    );
}

#[test]
fn version_is_nul_terminated() {
    let v = unsafe { CStr::from_ptr(kf_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_static_library() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libkrein_frames_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let exe = std::env::temp_dir().join(format!("kf-smoke-{}", std::process::id()));
    let status = Command::new("cc")
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    let _ = std::fs::remove_file(&exe);
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1 -9 -9 4 4");
}
