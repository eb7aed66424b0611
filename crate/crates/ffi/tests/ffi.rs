use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use gmdent_ffi::*;

fn last_error() -> String {
    let p = gmdent_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn sample(xs: &[f64]) -> *mut GmdentSample {
    let mut s = ptr::null_mut();
    let st = unsafe { gmdent_sample_new(xs.as_ptr(), xs.len(), &mut s) };
    assert_eq!(st, GmdentStatus::Ok);
    s
}

#[test]
fn sample_round_trip() {
    let s = sample(&[1.0, 2.0, 3.0]);
    assert_eq!(unsafe { gmdent_sample_len(s) }, 3);
    let name = CString::new("gmd").unwrap();
    let mut v = 0.0;
    let st = unsafe {
        gmdent_sample_estimate(
            s,
            name.as_ptr(),
            ptr::null(),
            GmdentConvention::Hazen,
            &mut v,
        )
    };
    assert_eq!(st, GmdentStatus::Ok);
    assert!((v - 4.0 / 3.0).abs() < 1e-15);
    assert!(gmdent_last_error().is_null());

    let crt = CString::new("crt").unwrap();
    let mut p = gmdent_params_default();
    p.alpha = 1.0;
    let st =
        unsafe { gmdent_sample_estimate(s, crt.as_ptr(), &p, GmdentConvention::Hazen, &mut v) };
    assert_eq!(st, GmdentStatus::InvalidArgument);
    assert!(last_error().contains("alpha must differ from 1"));
    p.alpha = 2.0;
    let st =
        unsafe { gmdent_sample_estimate(s, crt.as_ptr(), &p, GmdentConvention::Hazen, &mut v) };
    assert_eq!(st, GmdentStatus::Ok);
    assert!((v - 2.0 / 3.0).abs() < 1e-15);

    let left = CString::new("gmd_left").unwrap();
    p.t = 10.0;
    let st =
        unsafe { gmdent_sample_estimate(s, left.as_ptr(), &p, GmdentConvention::Hazen, &mut v) };
    assert_eq!(st, GmdentStatus::DomainError);
    unsafe { gmdent_sample_free(s) };
}

#[test]
fn bad_samples() {
    let mut s = ptr::null_mut();
    let st = unsafe { gmdent_sample_new([1.0, -1.0].as_ptr(), 2, &mut s) };
    assert_eq!(st, GmdentStatus::DomainError);
    assert!(s.is_null());
    assert!(last_error().contains("negative"));
    let st = unsafe { gmdent_sample_new([1.0].as_ptr(), 1, &mut s) };
    assert_eq!(st, GmdentStatus::DomainError);
    assert!(last_error().contains("need at least 2 observations"));
    let st = unsafe { gmdent_sample_new(ptr::null(), 3, &mut s) };
    assert_eq!(st, GmdentStatus::NullPointer);
    let st = unsafe { gmdent_sample_new([1.0, 2.0].as_ptr(), 2, ptr::null_mut()) };
    assert_eq!(st, GmdentStatus::NullPointer);
    unsafe {
        gmdent_sample_free(ptr::null_mut());
        gmdent_model_free(ptr::null_mut());
    }
}

#[test]
fn models_and_verify() {
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { gmdent_model_pareto(1.5, 1.0, &mut m) },
        GmdentStatus::InvalidArgument
    );
    assert!(last_error().contains("pareto shape must exceed 2"));
    assert_eq!(
        unsafe { gmdent_model_exponential(1.0, &mut m) },
        GmdentStatus::Ok
    );

    let crj = CString::new("crj").unwrap();
    let mut v = 0.0;
    let st = unsafe { gmdent_model_population(m, crj.as_ptr(), ptr::null(), 0.0, &mut v) };
    assert_eq!(st, GmdentStatus::Ok);
    assert!((v + 0.25).abs() < 1e-10);

    let ge = CString::new("ge").unwrap();
    let w = CString::new("Fbar:1").unwrap();
    let phi = CString::new("2*x").unwrap();
    let mut p = gmdent_params_default();
    p.weight = w.as_ptr();
    p.phi = phi.as_ptr();
    let st = unsafe { gmdent_model_population(m, ge.as_ptr(), &p, 0.0, &mut v) };
    assert_eq!(st, GmdentStatus::Ok, "{}", last_error());
    assert!(v.is_finite());

    let mut summary = GmdentVerifySummary::default();
    let mut json = ptr::null_mut();
    let st = unsafe { gmdent_verify_all(m, ptr::null(), 0.0, &mut summary, &mut json) };
    assert_eq!(st, GmdentStatus::Ok);
    assert_eq!(
        summary,
        GmdentVerifySummary {
            passed: 14,
            failed: 0,
            skipped: 0
        }
    );
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    assert_eq!(text.lines().count(), 14);
    assert!(text.lines().all(|l| l.starts_with('{')));
    unsafe { gmdent_string_free(json) };

    let s = sample(&[1.0, 2.0, 3.0]);
    let st = unsafe { gmdent_verify_all(m, s, 0.0, &mut summary, ptr::null_mut()) };
    assert_eq!(st, GmdentStatus::InvalidArgument);
    let st = unsafe { gmdent_verify_all(ptr::null(), s, 0.0, &mut summary, ptr::null_mut()) };
    assert_eq!(st, GmdentStatus::Ok);
    assert_eq!(summary.failed, 0);
    assert!(summary.passed >= 5);
    unsafe {
        gmdent_sample_free(s);
        gmdent_model_free(m);
    }
}

#[test]
fn unknown_measure() {
    let s = sample(&[1.0, 2.0]);
    let name = CString::new("nope").unwrap();
    let mut v = 0.0;
    let st = unsafe {
        gmdent_sample_estimate(
            s,
            name.as_ptr(),
            ptr::null(),
            GmdentConvention::Naive,
            &mut v,
        )
    };
    assert_eq!(st, GmdentStatus::InvalidArgument);
    assert!(last_error().contains("unknown measure"));
    let st = unsafe {
        gmdent_sample_estimate(s, ptr::null(), ptr::null(), GmdentConvention::Naive, &mut v)
    };
    assert_eq!(st, GmdentStatus::NullPointer);
    unsafe { gmdent_sample_free(s) };
}

#[test]
fn header_declares_api() {
    let h =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/gmdent.h")).unwrap();
    for f in [
        "gmdent_sample_new",
        "gmdent_sample_free",
        "gmdent_model_weibull",
        "gmdent_sample_estimate",
        "gmdent_model_population",
        "gmdent_verify_all",
        "gmdent_last_error",
        "typedef struct GmdentSample GmdentSample",
    ] {
        assert!(h.contains(f), "header lacks {f}");
    }
}

/// Compiles and runs a C program against the header and the static library.
#[test]
fn c_smoke() {
    let deps = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = deps.parent().unwrap().join("libgmdent_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe: PathBuf = dir.path().join("smoke");
    let manifest = env!("CARGO_MANIFEST_DIR");
    let status = Command::new(&cc)
        .arg(format!("{manifest}/tests/smoke.c"))
        .arg(format!("-I{manifest}/include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        "gmd=1.333333333333 crj=-0.25 verify=14/14"
    );
}
