//! C ABI over the `pafit` library.
//!
//! Every function returns a [`PafitStatus`]; results come back through out
//! pointers. On failure a message is kept per thread and can be read with
//! [`pafit_last_error_message`]. Handles are opaque and must be released with
//! their matching `*_free` function. Strings returned to the caller must be
//! released with [`pafit_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use pafit::dataio::{self, IsotopologueSpec, LineRecord};
use pafit::fitter::{fit_nde, FitProblem, FitReport, FitResult};
use pafit::potential::{centrifugal_barrier, PotentialParams};
use pafit::rotation;
use pafit::units::{amu_to_electron_mass, cm1_to_hartree, hartree_to_cm1, reduced_mass};
use pafit::{Error, NdeModel};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PafitStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    UnknownIsotopologue = 4,
    Numeric = 5,
    Identifiability = 6,
    Calibration = 7,
    Io = 8,
    Panic = 9,
}

impl From<&Error> for PafitStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) | Error::Assignment { .. } => PafitStatus::InvalidArgument,
            Error::Parse { .. } | Error::Csv(_) | Error::Json(_) => PafitStatus::Parse,
            Error::UnknownIsotopologue(_) => PafitStatus::UnknownIsotopologue,
            Error::Numeric { .. } | Error::Resolution { .. } => PafitStatus::Numeric,
            Error::Identifiability(_) => PafitStatus::Identifiability,
            Error::Calibration(_) => PafitStatus::Calibration,
            Error::Io(_) => PafitStatus::Io,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

struct Failure(PafitStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(PafitStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(PafitStatus::NullPointer, format!("{what} is NULL"))
}

/// Run `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PafitStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PafitStatus::Ok,
        Ok(Err(Failure(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            PafitStatus::Panic
        }
    }
}

unsafe fn write_out<T>(ptr: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    ptr.write(value);
    Ok(())
}

unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Failure(PafitStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

/// Message describing the most recent failure on this thread, or NULL.
/// The pointer stays valid until the next call into this library.
#[no_mangle]
pub extern "C" fn pafit_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Reduced mass (amu) of two atomic masses (amu).
///
/// # Safety
/// `out` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pafit_reduced_mass(mass_a: f64, mass_b: f64, out: *mut f64) -> PafitStatus {
    guard(|| write_out(out, reduced_mass(mass_a, mass_b)?, "out"))
}

/// Fixed-rotor radius (a0) from a rotational constant (cm-1) and reduced mass (amu).
///
/// # Safety
/// `out` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pafit_radius_from_b(b_rot_cm1: f64, mu_amu: f64, out: *mut f64) -> PafitStatus {
    guard(|| {
        write_out(
            out,
            rotation::radius_from_b(b_rot_cm1, amu_to_electron_mass(mu_amu))?,
            "out",
        )
    })
}

/// Rotational constant (cm-1) of a fixed rotor of radius `r_a0`.
///
/// # Safety
/// `out` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pafit_b_from_radius(r_a0: f64, mu_amu: f64, out: *mut f64) -> PafitStatus {
    guard(|| {
        write_out(
            out,
            rotation::b_from_radius(r_a0, amu_to_electron_mass(mu_amu))?,
            "out",
        )
    })
}

/// Centrifugal barrier of a pure-C6 potential: position (a0) and height (µK).
///
/// # Safety
/// `r_barrier_a0` and `height_uk` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pafit_centrifugal_barrier(
    c6: f64,
    mu_amu: f64,
    l: u32,
    r_barrier_a0: *mut f64,
    height_uk: *mut f64,
) -> PafitStatus {
    guard(|| {
        if r_barrier_a0.is_null() || height_uk.is_null() {
            return Err(null("output pointer"));
        }
        let b = centrifugal_barrier(&PotentialParams::new(c6, 0.0)?, amu_to_electron_mass(mu_amu), l)?;
        write_out(r_barrier_a0, b.r_barrier, "r_barrier_a0")?;
        write_out(height_uk, b.height_microkelvin(), "height_uk")
    })
}

fn model(c6: f64, c8: f64, mu_amu: f64) -> Result<NdeModel, Failure> {
    Ok(NdeModel::new(
        PotentialParams::new(c6, c8)?,
        amu_to_electron_mass(mu_amu),
    )?)
}

/// Near-dissociation vibrational count at binding energy `e_cm1` (< 0).
///
/// # Safety
/// `out` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pafit_quantum_defect(
    c6: f64,
    c8: f64,
    mu_amu: f64,
    e_cm1: f64,
    out: *mut f64,
) -> PafitStatus {
    guard(|| {
        let m = model(c6, c8, mu_amu)?;
        write_out(out, m.quantum_defect(cm1_to_hartree(e_cm1))?, "out")
    })
}

/// Energy (cm-1) of the level holding `count` quanta below dissociation.
///
/// # Safety
/// `out_cm1` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pafit_level_energy(
    c6: f64,
    c8: f64,
    mu_amu: f64,
    count: f64,
    out_cm1: *mut f64,
) -> PafitStatus {
    guard(|| {
        let m = model(c6, c8, mu_amu)?;
        write_out(out_cm1, hartree_to_cm1(m.level_energy(count)?), "out_cm1")
    })
}

/// A parsed line list together with its isotopologue table.
pub struct PafitDataset {
    records: Vec<LineRecord>,
    isotopologues: Vec<IsotopologueSpec>,
}

/// Parse a line list and an isotopologue table from CSV text.
///
/// # Safety
/// The strings must be NULL or NUL-terminated; `out` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pafit_dataset_from_csv(
    lines_csv: *const c_char,
    isotopologues_csv: *const c_char,
    out: *mut *mut PafitDataset,
) -> PafitStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let isos = dataio::parse_isotopologues(read_str(isotopologues_csv, "isotopologues_csv")?)?;
        let list = dataio::parse_line_list(read_str(lines_csv, "lines_csv")?, &isos)?;
        let ds = Box::new(PafitDataset {
            records: list.records,
            isotopologues: isos,
        });
        write_out(out, Box::into_raw(ds), "out")
    })
}

/// The bundled reference line list.
///
/// # Safety
/// `out` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pafit_dataset_bundled(out: *mut *mut PafitDataset) -> PafitStatus {
    guard(|| {
        let ds = Box::new(PafitDataset {
            records: dataio::bundled_table1(),
            isotopologues: dataio::bundled_isotopologues(),
        });
        if out.is_null() {
            return Err(null("out"));
        }
        write_out(out, Box::into_raw(ds), "out")
    })
}

/// Number of rows (observed or not) in the dataset.
///
/// # Safety
/// `ds` must be NULL or a live dataset handle; `out` NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pafit_dataset_len(ds: *const PafitDataset, out: *mut usize) -> PafitStatus {
    guard(|| {
        let ds = ds.as_ref().ok_or_else(|| null("dataset"))?;
        write_out(out, ds.records.len(), "out")
    })
}

/// # Safety
/// `ds` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn pafit_dataset_free(ds: *mut PafitDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

/// Result of a fit, with the problem it was fitted to.
pub struct PafitFit {
    result: FitResult,
    problem: FitProblem,
}

/// Fit the observed F'=2 lines of a dataset.
///
/// # Safety
/// `ds` must be NULL or a live dataset handle; `out` NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pafit_fit(ds: *const PafitDataset, out: *mut *mut PafitFit) -> PafitStatus {
    guard(|| {
        let ds = ds.as_ref().ok_or_else(|| null("dataset"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let problem = FitProblem::from_records(&ds.records, &ds.isotopologues);
        let result = fit_nde(&problem)?;
        write_out(out, Box::into_raw(Box::new(PafitFit { result, problem })), "out")
    })
}

/// Fitted dispersion coefficients (a.u.), RMS residual (cm-1) and whether
/// the optimiser converged. Any output pointer may be NULL to skip it.
///
/// # Safety
/// `fit` must be NULL or a live fit handle; outputs NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pafit_fit_summary(
    fit: *const PafitFit,
    c6: *mut f64,
    c8: *mut f64,
    rms_cm1: *mut f64,
    converged: *mut bool,
) -> PafitStatus {
    guard(|| {
        let f = &fit.as_ref().ok_or_else(|| null("fit"))?.result;
        if !c6.is_null() {
            c6.write(f.c6);
        }
        if !c8.is_null() {
            c8.write(f.c8);
        }
        if !rms_cm1.is_null() {
            rms_cm1.write(f.rms);
        }
        if !converged.is_null() {
            converged.write(f.converged);
        }
        Ok(())
    })
}

/// Fitted `v_d` of one isotopologue.
///
/// # Safety
/// `fit` must be NULL or a live fit handle; `id` NULL or NUL-terminated;
/// `out` NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pafit_fit_v_d(
    fit: *const PafitFit,
    id: *const c_char,
    out: *mut f64,
) -> PafitStatus {
    guard(|| {
        let f = &fit.as_ref().ok_or_else(|| null("fit"))?.result;
        let id = read_str(id, "id")?;
        let v = f.v_d.get(id).copied().ok_or_else(|| {
            Failure(
                PafitStatus::UnknownIsotopologue,
                format!("unknown isotopologue '{id}'"),
            )
        })?;
        write_out(out, v, "out")
    })
}

/// The fit report as JSON. Release the string with [`pafit_string_free`].
///
/// # Safety
/// `fit` must be NULL or a live fit handle; `out` NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pafit_fit_to_json(fit: *const PafitFit, out: *mut *mut c_char) -> PafitStatus {
    guard(|| {
        let f = fit.as_ref().ok_or_else(|| null("fit"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let json = FitReport::new(&f.result, &f.problem)?.to_json()?;
        let c = CString::new(json).map_err(|_| Failure(PafitStatus::Panic, "JSON contained NUL".into()))?;
        write_out(out, c.into_raw(), "out")
    })
}

/// # Safety
/// `fit` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn pafit_fit_free(fit: *mut PafitFit) {
    if !fit.is_null() {
        drop(Box::from_raw(fit));
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn pafit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
