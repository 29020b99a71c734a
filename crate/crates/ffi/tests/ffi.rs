use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use pafit_ffi::*;

fn last_error() -> String {
    let p = pafit_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn scalar_functions() {
    let mut x = 0.0;
    unsafe {
        assert_eq!(pafit_reduced_mass(175.9426, 86.9092, &mut x), PafitStatus::Ok);
        assert!((x - 58.17358).abs() < 1e-4);
        assert_eq!(pafit_radius_from_b(2.05e-3, 58.17358, &mut x), PafitStatus::Ok);
        assert!((x - 22.5).abs() < 0.1);
        assert_eq!(pafit_b_from_radius(22.5, 58.17358, &mut x), PafitStatus::Ok);
        assert!((x - 2.05e-3).abs() < 0.01e-3);
        let (mut rb, mut h) = (0.0, 0.0);
        assert_eq!(
            pafit_centrifugal_barrier(3186.0, 58.1737, 3, &mut rb, &mut h),
            PafitStatus::Ok
        );
        assert!((rb - 114.0).abs() < 0.5 && (h - 916.0).abs() < 9.0);
        assert_eq!(
            pafit_level_energy(6190.0, 0.0, 58.17358, 11.365, &mut x),
            PafitStatus::Ok
        );
        assert!((x + 4.80).abs() < 0.02);
        let mut count = 0.0;
        assert_eq!(
            pafit_quantum_defect(6190.0, 0.0, 58.17358, x, &mut count),
            PafitStatus::Ok
        );
        assert!((count - 11.365).abs() < 1e-8);
    }
    assert!(pafit_last_error_message().is_null());
}

#[test]
fn errors_are_reported() {
    let mut x = 0.0;
    unsafe {
        assert_eq!(
            pafit_radius_from_b(0.0, 58.0, &mut x),
            PafitStatus::InvalidArgument
        );
        assert!(last_error().contains("B_rot"));
        assert_eq!(
            pafit_radius_from_b(1e-3, 58.0, ptr::null_mut()),
            PafitStatus::NullPointer
        );
        let (mut a, mut b) = (0.0, 0.0);
        assert_eq!(
            pafit_centrifugal_barrier(3186.0, 58.0, 0, &mut a, &mut b),
            PafitStatus::InvalidArgument
        );
        let bad = CString::new("id,mass_a_amu\n").unwrap();
        let lines = CString::new("").unwrap();
        let mut ds = ptr::null_mut();
        assert_ne!(
            pafit_dataset_from_csv(lines.as_ptr(), bad.as_ptr(), &mut ds),
            PafitStatus::Ok
        );
        assert!(ds.is_null());
        assert_eq!(pafit_fit(ptr::null(), ptr::null_mut()), PafitStatus::NullPointer);
        pafit_dataset_free(ptr::null_mut());
        pafit_fit_free(ptr::null_mut());
        pafit_string_free(ptr::null_mut());
    }
}

#[test]
fn fit_through_handles() {
    unsafe {
        let lines = CString::new(pafit::dataio::bundled_table1_csv()).unwrap();
        let isos = CString::new(pafit::dataio::bundled_isotopologues_csv()).unwrap();
        let mut ds = ptr::null_mut();
        assert_eq!(
            pafit_dataset_from_csv(lines.as_ptr(), isos.as_ptr(), &mut ds),
            PafitStatus::Ok
        );
        let mut n = 0usize;
        assert_eq!(pafit_dataset_len(ds, &mut n), PafitStatus::Ok);
        assert_eq!(n, 20);

        let mut fit = ptr::null_mut();
        assert_eq!(pafit_fit(ds, &mut fit), PafitStatus::Ok);
        let (mut c6, mut c8, mut rms, mut conv) = (0.0, 0.0, 0.0, false);
        assert_eq!(
            pafit_fit_summary(fit, &mut c6, &mut c8, &mut rms, &mut conv),
            PafitStatus::Ok
        );
        assert!(conv && rms < 0.1 && (c6 / 6190.0 - 1.0).abs() < 0.15);
        let id = CString::new("176Yb87Rb").unwrap();
        let mut vd = 0.0;
        assert_eq!(pafit_fit_v_d(fit, id.as_ptr(), &mut vd), PafitStatus::Ok);
        assert!((vd - 0.365).abs() < 0.15);
        let other = CString::new("7Li7Li").unwrap();
        assert_eq!(
            pafit_fit_v_d(fit, other.as_ptr(), &mut vd),
            PafitStatus::UnknownIsotopologue
        );

        let mut json = ptr::null_mut();
        assert_eq!(pafit_fit_to_json(fit, &mut json), PafitStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        pafit_string_free(json);
        let report = pafit::fitter::FitReport::from_json(&text).unwrap();
        assert_eq!(report.c6_au, c6);

        pafit_fit_free(fit);
        pafit_dataset_free(ds);
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/pafit.h")).unwrap();
    for name in [
        "pafit_last_error_message",
        "pafit_dataset_from_csv",
        "pafit_fit_to_json",
        "pafit_string_free",
        "typedef struct PafitFit PafitFit",
        "PAFIT_STATUS_NULL_POINTER",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

/// Compile and run a C program against the header and the static library,
/// when a C compiler and the archive are available.
#[test]
fn c_smoke_program() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let Some(profile_dir) = exe.parent().and_then(|d| d.parent()) else {
        return;
    };
    let archive = profile_dir.join("libpafit_ffi.a");
    if !archive.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let out = std::env::temp_dir().join(format!("pafit_smoke_{}", std::process::id()));
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&archive)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "C smoke program failed to compile");
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(
        run.status.success(),
        "exit {:?}: {}",
        run.status.code(),
        String::from_utf8_lossy(&run.stdout)
    );
    assert!(String::from_utf8_lossy(&run.stdout).contains("rows=20"));
}
