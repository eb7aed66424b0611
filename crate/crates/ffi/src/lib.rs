//! C ABI for gmdent.
//!
//! Samples and models are opaque heap handles released with the matching
//! `_free` function. Every fallible call returns a [`GmdentStatus`]; on failure
//! the message is available from [`gmdent_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gmdent::identities::{verify_all, IdentityReport, Outcome, Source, VerifyConfig};
use gmdent::models::measure_population;
use gmdent::{
    estimate, EcdfConvention, Error, MeasureParams, MeasureSpec, ParametricModel, QuadratureConfig,
    Sample,
};
use libc::{c_char, size_t};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GmdentStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Bad parameter, unknown measure name or malformed string.
    InvalidArgument = 2,
    /// Data outside the domain: negative or non-finite values, too few
    /// observations, empty tail.
    DomainError = 3,
    /// Quadrature did not converge.
    NoConvergence = 4,
    /// The measure cannot be evaluated on this source.
    Unsupported = 5,
    /// Internal panic caught at the boundary.
    Panic = 6,
}

/// ECDF plotting-position convention.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GmdentConvention {
    Hazen = 0,
    Naive = 1,
    MeanRank = 2,
}

impl From<GmdentConvention> for EcdfConvention {
    fn from(c: GmdentConvention) -> Self {
        match c {
            GmdentConvention::Hazen => EcdfConvention::Hazen,
            GmdentConvention::Naive => EcdfConvention::Naive,
            GmdentConvention::MeanRank => EcdfConvention::MeanRank,
        }
    }
}

/// Measure parameters. NaN marks an unset real, a negative value an unset
/// integer, null an unset string. Start from `gmdent_params_default()`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GmdentParams {
    pub alpha: f64,
    pub beta: f64,
    pub v: f64,
    pub t: f64,
    pub r: f64,
    pub s: f64,
    pub k: i32,
    pub p: i32,
    /// `F:j`, `Fbar:j` or `const:c`.
    pub weight: *const c_char,
    /// `c*x^v`.
    pub phi: *const c_char,
}

/// Opaque validated sample.
pub struct GmdentSample(Sample);

/// Opaque parametric model.
pub struct GmdentModel(ParametricModel);

/// Summary of an identity run.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GmdentVerifySummary {
    pub passed: u32,
    pub failed: u32,
    pub skipped: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> GmdentStatus {
    match e {
        Error::BadParameter(_) => GmdentStatus::InvalidArgument,
        Error::NoConvergence(_) => GmdentStatus::NoConvergence,
        Error::UnsupportedSpec(_) | Error::NotApplicable(_) => GmdentStatus::Unsupported,
        Error::TooFew { .. }
        | Error::NegativeValue { .. }
        | Error::NonFinite { .. }
        | Error::EmptyTail { .. }
        | Error::FewerThanTwo { .. } => GmdentStatus::DomainError,
    }
}

struct Fail(GmdentStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(GmdentStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any error and converts panics.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GmdentStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GmdentStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            GmdentStatus::Panic
        }
    }
}

unsafe fn opt_str<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Fail> {
    if p.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(p).to_str().map(Some).map_err(|_| {
        Fail(
            GmdentStatus::InvalidArgument,
            format!("{what} is not valid UTF-8"),
        )
    })
}

unsafe fn spec_from(
    measure: *const c_char,
    params: *const GmdentParams,
) -> Result<MeasureSpec, Fail> {
    let name = opt_str(measure, "measure")?.ok_or_else(|| null("measure"))?;
    let p = if params.is_null() {
        gmdent_params_default()
    } else {
        *params
    };
    let real = |x: f64| (!x.is_nan()).then_some(x);
    let int = |x: i32| u32::try_from(x).ok();
    let weight = opt_str(p.weight, "weight")?.map(str::parse).transpose()?;
    let phi = opt_str(p.phi, "phi")?.map(str::parse).transpose()?;
    let mp = MeasureParams {
        alpha: real(p.alpha),
        beta: real(p.beta),
        v: real(p.v),
        k: int(p.k),
        t: real(p.t),
        p: int(p.p),
        r: real(p.r),
        s: real(p.s),
        weight,
        phi,
    };
    Ok(MeasureSpec::from_name(name, &mp)?)
}

/// Parameters with every field unset.
#[no_mangle]
pub extern "C" fn gmdent_params_default() -> GmdentParams {
    GmdentParams {
        alpha: f64::NAN,
        beta: f64::NAN,
        v: f64::NAN,
        t: f64::NAN,
        r: f64::NAN,
        s: f64::NAN,
        k: -1,
        p: -1,
        weight: ptr::null(),
        phi: ptr::null(),
    }
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn gmdent_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gmdent_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies `len` observations into a new sample.
///
/// # Safety
/// `data` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gmdent_sample_new(
    data: *const f64,
    len: size_t,
    out: *mut *mut GmdentSample,
) -> GmdentStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if data.is_null() && len > 0 {
            return Err(null("data"));
        }
        let raw: &[f64] = if len == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(data, len)
        };
        let s = Sample::new(raw)?;
        *out = Box::into_raw(Box::new(GmdentSample(s)));
        Ok(())
    })
}

/// Releases a sample. Null is ignored.
///
/// # Safety
/// `sample` must come from `gmdent_sample_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gmdent_sample_free(sample: *mut GmdentSample) {
    if !sample.is_null() {
        drop(Box::from_raw(sample));
    }
}

/// Number of observations, 0 for null.
///
/// # Safety
/// `sample` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gmdent_sample_len(sample: *const GmdentSample) -> size_t {
    sample.as_ref().map_or(0, |s| s.0.len())
}

unsafe fn new_model(
    out: *mut *mut GmdentModel,
    make: impl FnOnce() -> gmdent::Result<ParametricModel>,
) -> GmdentStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        *out = Box::into_raw(Box::new(GmdentModel(make()?)));
        Ok(())
    })
}

/// Uniform on `[a, b]`, `0 <= a < b`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gmdent_model_uniform(
    a: f64,
    b: f64,
    out: *mut *mut GmdentModel,
) -> GmdentStatus {
    new_model(out, || ParametricModel::uniform(a, b))
}

/// Exponential with the given mean.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gmdent_model_exponential(
    mean: f64,
    out: *mut *mut GmdentModel,
) -> GmdentStatus {
    new_model(out, || ParametricModel::exponential(mean))
}

/// Weibull with shape and scale.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gmdent_model_weibull(
    shape: f64,
    scale: f64,
    out: *mut *mut GmdentModel,
) -> GmdentStatus {
    new_model(out, || ParametricModel::weibull(shape, scale))
}

/// Pareto with shape > 2 and scale.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gmdent_model_pareto(
    shape: f64,
    scale: f64,
    out: *mut *mut GmdentModel,
) -> GmdentStatus {
    new_model(out, || ParametricModel::pareto(shape, scale))
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must come from a `gmdent_model_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gmdent_model_free(model: *mut GmdentModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Estimates `measure` (e.g. `"gmd"`, `"crt"`) on a sample.
///
/// # Safety
/// `sample` must be a live handle, `measure` a NUL-terminated string,
/// `params` null or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gmdent_sample_estimate(
    sample: *const GmdentSample,
    measure: *const c_char,
    params: *const GmdentParams,
    conv: GmdentConvention,
    out: *mut f64,
) -> GmdentStatus {
    guard(|| {
        let s = sample.as_ref().ok_or_else(|| null("sample"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = spec_from(measure, params)?;
        *out = estimate(&s.0, &spec, conv.into())?.value;
        Ok(())
    })
}

/// Population value of `measure` under a model. `tol <= 0` selects the
/// default quadrature tolerance.
///
/// # Safety
/// As for [`gmdent_sample_estimate`].
#[no_mangle]
pub unsafe extern "C" fn gmdent_model_population(
    model: *const GmdentModel,
    measure: *const c_char,
    params: *const GmdentParams,
    tol: f64,
    out: *mut f64,
) -> GmdentStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = spec_from(measure, params)?;
        let mut q = QuadratureConfig::default();
        if tol > 0.0 {
            q = q.with_tol(tol);
        }
        *out = measure_population(&m.0, &spec, &q)?;
        Ok(())
    })
}

fn summarise(reports: &[IdentityReport]) -> GmdentVerifySummary {
    let mut s = GmdentVerifySummary::default();
    for r in reports {
        match r.outcome {
            Outcome::Pass => s.passed += 1,
            Outcome::Fail => s.failed += 1,
            Outcome::Skipped => s.skipped += 1,
        }
    }
    s
}

/// Runs the identity suite on a model or a sample (exactly one non-null).
/// `tol <= 0` keeps the default population tolerance. When `json` is
/// non-null it receives the reports as JSON lines, to be released with
/// `gmdent_string_free`.
///
/// # Safety
/// Handles must be live or null; `summary` writable; `json` null or writable.
#[no_mangle]
pub unsafe extern "C" fn gmdent_verify_all(
    model: *const GmdentModel,
    sample: *const GmdentSample,
    tol: f64,
    summary: *mut GmdentVerifySummary,
    json: *mut *mut c_char,
) -> GmdentStatus {
    guard(|| {
        if summary.is_null() {
            return Err(null("summary"));
        }
        if !json.is_null() {
            *json = ptr::null_mut();
        }
        let source = match (model.as_ref(), sample.as_ref()) {
            (Some(m), None) => Source::Model(&m.0),
            (None, Some(s)) => Source::Sample(&s.0),
            _ => {
                return Err(Fail(
                    GmdentStatus::InvalidArgument,
                    "give exactly one of model and sample".into(),
                ))
            }
        };
        let mut cfg = VerifyConfig::default();
        if tol > 0.0 {
            cfg.population_tol = tol;
        }
        let reports = verify_all(source, &cfg);
        *summary = summarise(&reports);
        if !json.is_null() {
            let mut text = String::new();
            for r in &reports {
                text.push_str(&gmdent::cli::report_json(r));
                text.push('\n');
            }
            *json = CString::new(text)
                .map_err(|_| Fail(GmdentStatus::Panic, "report contains NUL".into()))?
                .into_raw();
        }
        Ok(())
    })
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gmdent_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
