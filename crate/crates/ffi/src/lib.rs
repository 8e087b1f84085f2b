//! C interface to streamlearn.
//!
//! Streams, models and detectors are opaque handles created from a registry
//! name plus optional JSON parameters (the same names and parameters the
//! `streamlearn` CLI accepts). Every fallible function returns an
//! [`SlStatus`]; on failure [`sl_last_error_message`] describes the error.
//! Handles are not thread safe: use each one from one thread at a time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use serde_json::Value;
use streamlearn::cli::registry::{self, Params};
use streamlearn::{Classifier, DetectionStatus, DriftDetector, Instance, Stream};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Bad UTF-8, malformed JSON or a buffer of the wrong length.
    InvalidArgument = 2,
    /// Unknown component name or parameter.
    Config = 3,
    /// Instance or prediction does not fit the declared layout.
    Schema = 4,
    /// A numeric parameter or input outside its domain.
    Domain = 5,
    /// Unparseable data in a file-backed stream.
    Parse = 6,
    Io = 7,
    /// The library panicked; the handle should be freed.
    Panic = 8,
}

/// Detector output of [`sl_detector_update`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlDetection {
    Normal = 0,
    Warning = 1,
    Drift = 2,
}

pub struct SlStream(Box<dyn Stream>);
pub struct SlModel(Box<dyn Classifier>);
pub struct SlDetector(Box<dyn DriftDetector>);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(SlStatus, String);

impl From<streamlearn::Error> for Failure {
    fn from(e: streamlearn::Error) -> Self {
        use streamlearn::Error as E;
        let status = match &e {
            E::FeatureArity { .. }
            | E::TargetArity { .. }
            | E::UndeclaredClass { .. }
            | E::Schema(_) => SlStatus::Schema,
            E::Domain { .. } | E::InvalidParameter { .. } => SlStatus::Domain,
            E::Parse { .. } => SlStatus::Parse,
            E::Config(_) => SlStatus::Config,
            E::Io(_) => SlStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

impl From<registry::ConfigError> for Failure {
    fn from(e: registry::ConfigError) -> Self {
        Failure(SlStatus::Config, e.0)
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure(SlStatus::InvalidArgument, message.into())
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SlStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            SlStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            SlStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(SlStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

unsafe fn params(json: *const c_char, context: &str) -> Result<Params, Failure> {
    if json.is_null() {
        return Ok(Params::from_value(context, None)?);
    }
    let value: Value =
        serde_json::from_str(text(json, "params")?).map_err(|e| invalid(format!("params: {e}")))?;
    Ok(Params::from_value(context, Some(&value))?)
}

unsafe fn handle<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure(SlStatus::NullPointer, format!("{what} is null")))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure(SlStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(Failure(SlStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(SlStatus::NullPointer, format!("{what} is null")));
    }
    out.write(value);
    Ok(())
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call into this library.
#[no_mangle]
pub extern "C" fn sl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

// ---------------------------------------------------------------------------
// streams

/// Creates a stream. `params_json` may be null. Relative file paths resolve
/// against the working directory.
///
/// # Safety
/// `kind` and a non-null `params_json` must be NUL-terminated strings and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_stream_new(
    kind: *const c_char,
    params_json: *const c_char,
    seed: u64,
    out: *mut *mut SlStream,
) -> SlStatus {
    guard(|| {
        let kind = text(kind, "kind")?;
        let p = params(params_json, "stream.params")?;
        let stream = registry::build_stream(kind, p, seed, Path::new("."))?;
        write(out, Box::into_raw(Box::new(SlStream(stream))), "out")
    })
}

/// # Safety
/// `stream` must come from [`sl_stream_new`] and `n_features`, `n_targets`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_stream_shape(
    stream: *mut SlStream,
    n_features: *mut usize,
    n_targets: *mut usize,
) -> SlStatus {
    guard(|| {
        let schema = handle(stream, "stream")?.0.schema();
        write(n_features, schema.n_features, "n_features")?;
        write(n_targets, schema.n_targets(), "n_targets")
    })
}

/// Number of classes of each target, written to `out[0..n_targets]`.
///
/// # Safety
/// `out` must hold `n_targets` values.
#[no_mangle]
pub unsafe extern "C" fn sl_stream_cardinality(
    stream: *mut SlStream,
    out: *mut usize,
    n_targets: usize,
) -> SlStatus {
    guard(|| {
        let card = &handle(stream, "stream")?.0.schema().target_cardinality;
        if card.len() != n_targets {
            return Err(invalid(format!(
                "stream has {} targets, buffer holds {n_targets}",
                card.len()
            )));
        }
        slice_mut(out, n_targets, "out")?.copy_from_slice(card);
        Ok(())
    })
}

/// Draws the next instance. Sets `*produced` to false once the stream is
/// exhausted, leaving the buffers untouched.
///
/// # Safety
/// `features` must hold `n_features` values and `targets` `n_targets`
/// values, matching [`sl_stream_shape`].
#[no_mangle]
pub unsafe extern "C" fn sl_stream_next(
    stream: *mut SlStream,
    features: *mut f64,
    n_features: usize,
    targets: *mut usize,
    n_targets: usize,
    produced: *mut bool,
) -> SlStatus {
    guard(|| {
        let stream = handle(stream, "stream")?;
        let schema = stream.0.schema();
        if schema.n_features != n_features || schema.n_targets() != n_targets {
            return Err(invalid(format!(
                "buffers hold {n_features} features and {n_targets} targets, stream has {} and {}",
                schema.n_features,
                schema.n_targets()
            )));
        }
        let features = slice_mut(features, n_features, "features")?;
        let targets = slice_mut(targets, n_targets, "targets")?;
        match stream.0.next_instance()? {
            Some(inst) => {
                features.copy_from_slice(&inst.features);
                targets.copy_from_slice(&inst.targets);
                write(produced, true, "produced")
            }
            None => write(produced, false, "produced"),
        }
    })
}

/// # Safety
/// `stream` must come from [`sl_stream_new`].
#[no_mangle]
pub unsafe extern "C" fn sl_stream_restart(stream: *mut SlStream) -> SlStatus {
    guard(|| Ok(handle(stream, "stream")?.0.restart()?))
}

/// # Safety
/// `stream` must come from [`sl_stream_new`] or be null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn sl_stream_free(stream: *mut SlStream) {
    if !stream.is_null() {
        drop(Box::from_raw(stream));
    }
}

// ---------------------------------------------------------------------------
// models

/// Creates a classifier. `params_json` may be null.
///
/// # Safety
/// As for [`sl_stream_new`].
#[no_mangle]
pub unsafe extern "C" fn sl_model_new(
    kind: *const c_char,
    params_json: *const c_char,
    seed: u64,
    out: *mut *mut SlModel,
) -> SlStatus {
    guard(|| {
        let kind = text(kind, "kind")?;
        let p = params(params_json, "model.params")?;
        let model = registry::build_model(kind, p, seed)?;
        write(out, Box::into_raw(Box::new(SlModel(model))), "out")
    })
}

/// Trains on `n_rows` instances stored row-major: `features` holds
/// `n_rows * n_features` values and `targets` `n_rows * n_targets` labels.
/// `classes` (per-target class counts, `n_targets` of them) may be null; it
/// only matters on the first call.
///
/// # Safety
/// Buffers must hold the stated number of elements.
#[no_mangle]
pub unsafe extern "C" fn sl_model_partial_fit(
    model: *mut SlModel,
    features: *const f64,
    targets: *const usize,
    n_rows: usize,
    n_features: usize,
    n_targets: usize,
    classes: *const usize,
) -> SlStatus {
    guard(|| {
        let model = handle(model, "model")?;
        let xs = slice(features, n_rows * n_features, "features")?;
        let ys = slice(targets, n_rows * n_targets, "targets")?;
        let classes = if classes.is_null() {
            None
        } else {
            Some(slice(classes, n_targets, "classes")?)
        };
        let batch: Vec<Instance> = (0..n_rows)
            .map(|r| {
                Instance::new(
                    xs[r * n_features..(r + 1) * n_features].to_vec(),
                    ys[r * n_targets..(r + 1) * n_targets].to_vec(),
                )
            })
            .collect();
        Ok(model.0.partial_fit(&batch, classes)?)
    })
}

/// Predicted label of each target for one instance.
///
/// # Safety
/// `x` must hold `n_features` values and `out` `n_targets` values.
#[no_mangle]
pub unsafe extern "C" fn sl_model_predict(
    model: *mut SlModel,
    x: *const f64,
    n_features: usize,
    out: *mut usize,
    n_targets: usize,
) -> SlStatus {
    guard(|| {
        let model = handle(model, "model")?;
        let labels = model.0.predict(slice(x, n_features, "x")?)?;
        if labels.len() != n_targets {
            return Err(invalid(format!(
                "model predicts {} targets, buffer holds {n_targets}",
                labels.len()
            )));
        }
        slice_mut(out, n_targets, "out")?.copy_from_slice(&labels);
        Ok(())
    })
}

/// Class probabilities of target `target` for one instance.
///
/// # Safety
/// `x` must hold `n_features` values and `out` `n_classes` values.
#[no_mangle]
pub unsafe extern "C" fn sl_model_predict_proba(
    model: *mut SlModel,
    x: *const f64,
    n_features: usize,
    target: usize,
    out: *mut f64,
    n_classes: usize,
) -> SlStatus {
    guard(|| {
        let model = handle(model, "model")?;
        let dists = model.0.predict_proba(slice(x, n_features, "x")?)?;
        let dist = dists.get(target).ok_or_else(|| {
            invalid(format!(
                "target {target} out of range ({} targets)",
                dists.len()
            ))
        })?;
        if dist.len() != n_classes {
            return Err(invalid(format!(
                "target {target} has {} classes, buffer holds {n_classes}",
                dist.len()
            )));
        }
        slice_mut(out, n_classes, "out")?.copy_from_slice(dist.probs());
        Ok(())
    })
}

/// # Safety
/// `model` must come from [`sl_model_new`].
#[no_mangle]
pub unsafe extern "C" fn sl_model_reset(model: *mut SlModel) -> SlStatus {
    guard(|| {
        handle(model, "model")?.0.reset();
        Ok(())
    })
}

/// # Safety
/// `model` must come from [`sl_model_new`] or be null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn sl_model_free(model: *mut SlModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

// ---------------------------------------------------------------------------
// detectors

/// Creates a drift detector. `params_json` may be null.
///
/// # Safety
/// As for [`sl_stream_new`].
#[no_mangle]
pub unsafe extern "C" fn sl_detector_new(
    kind: *const c_char,
    params_json: *const c_char,
    out: *mut *mut SlDetector,
) -> SlStatus {
    guard(|| {
        let kind = text(kind, "kind")?;
        let p = params(params_json, "detector.params")?;
        let detector = registry::build_detector(kind, p)?;
        write(out, Box::into_raw(Box::new(SlDetector(detector))), "out")
    })
}

/// # Safety
/// `detector` must come from [`sl_detector_new`] and `status` be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_detector_update(
    detector: *mut SlDetector,
    value: f64,
    status: *mut SlDetection,
) -> SlStatus {
    guard(|| {
        let detection = match handle(detector, "detector")?.0.update(value)? {
            DetectionStatus::Normal => SlDetection::Normal,
            DetectionStatus::Warning => SlDetection::Warning,
            DetectionStatus::Drift => SlDetection::Drift,
        };
        write(status, detection, "status")
    })
}

/// Current estimate of the monitored mean.
///
/// # Safety
/// `detector` must come from [`sl_detector_new`] and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_detector_estimation(
    detector: *mut SlDetector,
    out: *mut f64,
) -> SlStatus {
    guard(|| write(out, handle(detector, "detector")?.0.estimation(), "out"))
}

/// # Safety
/// `detector` must come from [`sl_detector_new`].
#[no_mangle]
pub unsafe extern "C" fn sl_detector_reset(detector: *mut SlDetector) -> SlStatus {
    guard(|| {
        handle(detector, "detector")?.0.reset();
        Ok(())
    })
}

/// # Safety
/// `detector` must come from [`sl_detector_new`] or be null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn sl_detector_free(detector: *mut SlDetector) {
    if !detector.is_null() {
        drop(Box::from_raw(detector));
    }
}
