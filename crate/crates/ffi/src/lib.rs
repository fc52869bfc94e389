//! C ABI for `krein-frames`.
//!
//! Matrices cross the boundary as interleaved `(re, im)` doubles in row-major
//! order, so an `rows x cols` matrix occupies `2 * rows * cols` doubles.
//! Every fallible call returns a [`KfStatus`]; on failure the message is
//! available from [`kf_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use krein_frames::io::{parse_spec, run, Command, IoError, Problem, RunOptions};
use krein_frames::{
    CMatrix, Error, FrameBounds, FrameCertificate, KreinSpace, Subspace, Tolerances, WeightedFamily, C64,
};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Dimension = 3,
    Validation = 4,
    DegenerateSubspace = 5,
    MemberClassification = 6,
    NotAFrame = 7,
    Numerical = 8,
    Schema = 9,
    Panic = 10,
}

/// A finite-dimensional Krein space.
pub struct KfSpace {
    space: KreinSpace,
}

/// A weighted family of subspaces being assembled.
pub struct KfFamily {
    space: KreinSpace,
    subspaces: Vec<Subspace>,
    weights: Vec<f64>,
}

/// Outcome of certifying a family.
pub struct KfCertificate {
    cert: FrameCertificate,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn fail(status: KfStatus, msg: impl Into<String>) -> KfStatus {
    set_error(msg);
    status
}

fn from_error(e: &Error) -> KfStatus {
    let status = match e {
        Error::Dimension(_) | Error::Index { .. } => KfStatus::Dimension,
        Error::Validation(_) | Error::Weight { .. } => KfStatus::Validation,
        Error::DegenerateSubspace(_) => KfStatus::DegenerateSubspace,
        Error::MemberClassification { .. } | Error::Classification(_) => KfStatus::MemberClassification,
        Error::NotAFrame => KfStatus::NotAFrame,
        _ => KfStatus::Numerical,
    };
    fail(status, e.to_string())
}

fn from_io_error(e: &IoError) -> KfStatus {
    let status = match e {
        IoError::Schema(_) => KfStatus::Schema,
        IoError::Validation(_) => KfStatus::Validation,
        IoError::Usage(_) => KfStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> KfStatus) -> KfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => {
            if status == KfStatus::Ok {
                LAST_ERROR.with(|e| *e.borrow_mut() = None);
            }
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(KfStatus::Panic, format!("internal panic: {msg}"))
        }
    }
}

/// # Safety
/// `data` must point to `2 * rows * cols` readable doubles.
unsafe fn read_matrix(data: *const f64, rows: usize, cols: usize) -> CMatrix {
    let s = std::slice::from_raw_parts(data, 2 * rows * cols);
    CMatrix::from_fn(rows, cols, |i, j| {
        let k = 2 * (i * cols + j);
        C64::new(s[k], s[k + 1])
    })
}

fn write_bounds(bounds: Option<FrameBounds>, out: *mut f64) -> KfStatus {
    let Some(b) = bounds else {
        return fail(KfStatus::NotAFrame, "family is not a J-fusion frame");
    };
    let arr = b.as_array();
    // SAFETY: caller guarantees room for four doubles.
    unsafe { ptr::copy_nonoverlapping(arr.as_ptr(), out, 4) };
    KfStatus::Ok
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library and valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn kf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn kf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a Krein space from an `n x n` fundamental symmetry.
///
/// # Safety
/// `j` must point to `2 * n * n` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_space_new(j: *const f64, n: usize, out: *mut *mut KfSpace) -> KfStatus {
    guard(|| {
        if j.is_null() || out.is_null() {
            return fail(KfStatus::NullPointer, "null argument");
        }
        if n == 0 {
            return fail(KfStatus::InvalidArgument, "dimension must be positive");
        }
        match KreinSpace::new(read_matrix(j, n, n)) {
            Ok(space) => {
                *out = Box::into_raw(Box::new(KfSpace { space }));
                KfStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Writes the signature `(p, q)` of the space.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kf_space_signature(space: *const KfSpace, p: *mut usize, q: *mut usize) -> KfStatus {
    guard(|| {
        if space.is_null() || p.is_null() || q.is_null() {
            return fail(KfStatus::NullPointer, "null argument");
        }
        let (a, b) = (*space).space.signature();
        *p = a;
        *q = b;
        KfStatus::Ok
    })
}

/// # Safety
/// `space` must come from [`kf_space_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn kf_space_free(space: *mut KfSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Starts an empty family over `space`. The family keeps its own copy of
/// the space.
///
/// # Safety
/// `space` must be valid and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kf_family_new(space: *const KfSpace, out: *mut *mut KfFamily) -> KfStatus {
    guard(|| {
        if space.is_null() || out.is_null() {
            return fail(KfStatus::NullPointer, "null argument");
        }
        *out = Box::into_raw(Box::new(KfFamily {
            space: (*space).space.clone(),
            subspaces: Vec::new(),
            weights: Vec::new(),
        }));
        KfStatus::Ok
    })
}

/// Adds the member spanned by the `cols` columns of an `n x cols` basis
/// with the given weight. The member must be uniformly definite.
///
/// # Safety
/// `family` must be valid and `basis` must point to `2 * n * cols` doubles.
#[no_mangle]
pub unsafe extern "C" fn kf_family_add(family: *mut KfFamily, basis: *const f64, cols: usize, weight: f64) -> KfStatus {
    guard(|| {
        if family.is_null() || basis.is_null() {
            return fail(KfStatus::NullPointer, "null argument");
        }
        let fam = &mut *family;
        let n = fam.space.dim();
        let w = match Subspace::new(&fam.space, read_matrix(basis, n, cols)) {
            Ok(w) => w,
            Err(e) => return from_error(&e),
        };
        if let Err(e) = WeightedFamily::new(&fam.space, vec![w.clone()], &[weight]) {
            return from_error(&match e {
                Error::MemberClassification { kind, .. } => Error::MemberClassification {
                    index: fam.subspaces.len(),
                    kind,
                },
                Error::Weight { weight, .. } => Error::Weight {
                    index: fam.subspaces.len(),
                    weight,
                },
                other => other,
            });
        }
        fam.subspaces.push(w);
        fam.weights.push(weight);
        KfStatus::Ok
    })
}

/// Number of members added so far; 0 for a null handle.
///
/// # Safety
/// `family` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn kf_family_len(family: *const KfFamily) -> usize {
    if family.is_null() {
        0
    } else {
        (*family).subspaces.len()
    }
}

/// # Safety
/// `family` must come from [`kf_family_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn kf_family_free(family: *mut KfFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Certifies the family. A family that is not a frame still yields a
/// certificate; only malformed input fails.
///
/// # Safety
/// `family` must be valid and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kf_family_certify(family: *const KfFamily, out: *mut *mut KfCertificate) -> KfStatus {
    guard(|| {
        if family.is_null() || out.is_null() {
            return fail(KfStatus::NullPointer, "null argument");
        }
        let fam = &*family;
        match WeightedFamily::new(&fam.space, fam.subspaces.clone(), &fam.weights) {
            Ok(f) => {
                *out = Box::into_raw(Box::new(KfCertificate { cert: f.certify() }));
                KfStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// # Safety
/// `cert` must be valid and `is_frame` writable.
#[no_mangle]
pub unsafe extern "C" fn kf_certificate_is_frame(cert: *const KfCertificate, is_frame: *mut bool) -> KfStatus {
    guard(|| {
        if cert.is_null() || is_frame.is_null() {
            return fail(KfStatus::NullPointer, "null argument");
        }
        *is_frame = (*cert).cert.is_frame;
        KfStatus::Ok
    })
}

/// Writes the optimal bounds `(B-, A-, A+, B+)`; `NotAFrame` if none.
///
/// # Safety
/// `cert` must be valid and `out` must have room for four doubles.
#[no_mangle]
pub unsafe extern "C" fn kf_certificate_optimal_bounds(cert: *const KfCertificate, out: *mut f64) -> KfStatus {
    guard(|| {
        if cert.is_null() || out.is_null() {
            return fail(KfStatus::NullPointer, "null argument");
        }
        write_bounds((*cert).cert.optimal_bounds, out)
    })
}

/// Writes the estimate bounds `(B-e, A-e, A+e, B+e)`; `NotAFrame` if none.
///
/// # Safety
/// `cert` must be valid and `out` must have room for four doubles.
#[no_mangle]
pub unsafe extern "C" fn kf_certificate_estimate_bounds(cert: *const KfCertificate, out: *mut f64) -> KfStatus {
    guard(|| {
        if cert.is_null() || out.is_null() {
            return fail(KfStatus::NullPointer, "null argument");
        }
        write_bounds((*cert).cert.estimate_bounds, out)
    })
}

/// # Safety
/// `cert` must come from [`kf_family_certify`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn kf_certificate_free(cert: *mut KfCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Runs a CLI command on a JSON problem specification and returns the JSON
/// report in `out` (free it with [`kf_string_free`]). `passed` receives the
/// overall verdict. A negative `seed` uses the specification's seed (or 0).
///
/// # Safety
/// `spec_json` and `command` must be NUL-terminated; `out` and `passed`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn kf_run_json(
    spec_json: *const c_char,
    command: *const c_char,
    seed: i64,
    samples: usize,
    out: *mut *mut c_char,
    passed: *mut bool,
) -> KfStatus {
    guard(|| {
        if spec_json.is_null() || command.is_null() || out.is_null() || passed.is_null() {
            return fail(KfStatus::NullPointer, "null argument");
        }
        let (Ok(text), Ok(cmd)) = (CStr::from_ptr(spec_json).to_str(), CStr::from_ptr(command).to_str()) else {
            return fail(KfStatus::InvalidArgument, "arguments must be UTF-8");
        };
        let cmd: Command = match cmd.parse() {
            Ok(c) => c,
            Err(e) => return from_io_error(&e),
        };
        let spec = match parse_spec(text) {
            Ok(s) => s,
            Err(e) => return from_io_error(&e),
        };
        let seed = u64::try_from(seed).unwrap_or(spec.seed.unwrap_or(0));
        let tol = spec.tolerances.unwrap_or_default().apply(Tolerances::default());
        let problem = match Problem::resolve(&spec, tol, seed) {
            Ok(p) => p,
            Err(e) => return from_io_error(&e),
        };
        let opts = RunOptions {
            seed,
            samples,
            ..RunOptions::default()
        };
        let report = run(cmd, &problem, &opts);
        let json = match serde_json::to_string(&report) {
            Ok(j) => j,
            Err(e) => return fail(KfStatus::Numerical, e.to_string()),
        };
        *passed = report.passed;
        *out = CString::new(json).expect("JSON has no NUL").into_raw();
        KfStatus::Ok
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn kf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
