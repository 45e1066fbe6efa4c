//! C ABI for the tentnorm library.
//!
//! Dyadic sequences and step functions live behind opaque handles; every
//! fallible call returns a [`TnStatus`] and writes its result through an out
//! pointer.  On failure a human-readable message is stored per thread and can
//! be fetched with [`tn_last_error_message`].  The companion header
//! `include/tentnorm.h` is regenerated by `build.rs` on every build.

use std::cell::RefCell;
use std::ffi::{c_char, CString};

use tentnorm::haar::{self, OscKind};
use tentnorm::orlicz::{self, YoungFunction};
use tentnorm::xpq;
use tentnorm::{DyadicIndex, DyadicSequence, Error, Exponent, StepFunction};

/// Result code of every fallible call in this ABI.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TnStatus {
    /// The call succeeded and all out parameters are valid.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was malformed: bad index, bad exponent, non-finite value,
    /// wrong length, or an unknown enum code.
    InvalidArgument = 2,
    /// The arguments were well formed but outside the operation's domain.
    Domain = 3,
    /// The input exceeds a hard size or depth limit of the exact algorithms.
    Limit = 4,
    /// An internal invariant failed; this indicates a library bug.
    Internal = 5,
}

/// Oscillation used by [`tn_jnp_norm`]; pass one of these as the `osc` code.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TnOscKind {
    /// Mean absolute deviation from the interval average.
    L1 = 0,
    /// Root-mean-square deviation, computed directly.
    L2Direct = 1,
    /// Root-mean-square deviation, via the Haar coefficient identity.
    L2Haar = 2,
}

/// Young function used by [`tn_luxemburg_norm`]; pass one as the `phi` code.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TnYoung {
    /// `Φ(t) = t·(1 + log⁺t)^{1/2}`.
    LLogHalfL = 0,
    /// `Φ(t) = exp(t²) − 1`.
    ExpSquare = 1,
}

/// Opaque finitely supported sequence on dyadic intervals.
pub struct TnSequence(DyadicSequence);

/// Opaque step function, constant on the dyadic cells of its depth.
pub struct TnStep(StepFunction);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let owned = CString::new(message.replace('\0', "?")).expect("NUL bytes replaced");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(owned));
}

fn fail(status: TnStatus, message: &str) -> TnStatus {
    set_error(message);
    status
}

fn status_of(err: &Error) -> TnStatus {
    match err {
        Error::PositionOutOfRange { .. }
        | Error::LevelTooDeep { .. }
        | Error::InvalidExponent(_)
        | Error::ExponentParse(_)
        | Error::StepLength { .. }
        | Error::InvalidWeight(_)
        | Error::InvalidSign(_)
        | Error::InvalidPoint(_)
        | Error::InvalidRadius(_)
        | Error::UnsupportedDimension(_)
        | Error::Input(_)
        | Error::Json(_)
        | Error::Io(_) => TnStatus::InvalidArgument,
        Error::RootHasNoParent
        | Error::NotAnAntichain { .. }
        | Error::ExponentNotInOpenRange(_)
        | Error::LevelBeyondDepth { .. }
        | Error::CoefficientTooDeep { .. }
        | Error::SignOffChain { .. } => TnStatus::Domain,
        Error::DepthLimitExceeded { .. } | Error::FamilyTooLarge { .. } => TnStatus::Limit,
        Error::Internal(_) => TnStatus::Internal,
    }
}

fn fail_with(err: &Error) -> TnStatus {
    fail(status_of(err), &err.to_string())
}

fn exponent(value: f64, name: &str) -> Result<Exponent, TnStatus> {
    Exponent::new(value).map_err(|e| fail(TnStatus::InvalidArgument, &format!("{name}: {e}")))
}

/// Reads a possibly-null const handle, recording an error when null.
macro_rules! deref {
    ($ptr:expr) => {
        match unsafe { $ptr.as_ref() } {
            Some(handle) => handle,
            None => return fail(TnStatus::NullPointer, concat!(stringify!($ptr), " is null")),
        }
    };
}

/// Checks an out pointer for null without dereferencing it yet.
macro_rules! out {
    ($ptr:expr) => {
        match unsafe { $ptr.as_mut() } {
            Some(slot) => slot,
            None => return fail(TnStatus::NullPointer, concat!(stringify!($ptr), " is null")),
        }
    };
}

/// Version of the underlying library, as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the most recent failure on the calling thread, or null if no
/// call has failed yet.  The pointer stays valid until the next failing call
/// on the same thread.
#[no_mangle]
pub extern "C" fn tn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(message) => message.as_ptr(),
        None => std::ptr::null(),
    })
}

/// Allocates an empty sequence.  Free with [`tn_seq_free`].
#[no_mangle]
pub extern "C" fn tn_seq_new() -> *mut TnSequence {
    Box::into_raw(Box::new(TnSequence(DyadicSequence::new())))
}

/// Frees a sequence handle; a null pointer is ignored.
///
/// # Safety
/// `seq` must be a pointer returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tn_seq_free(seq: *mut TnSequence) {
    if !seq.is_null() {
        drop(unsafe { Box::from_raw(seq) });
    }
}

/// Sets the value on the interval `[position/2^level, (position+1)/2^level)`.
/// Setting 0 removes the entry; non-finite values are rejected.
///
/// # Safety
/// `seq` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn tn_seq_set(
    seq: *mut TnSequence,
    level: u32,
    position: u64,
    value: f64,
) -> TnStatus {
    let handle = match unsafe { seq.as_mut() } {
        Some(handle) => handle,
        None => return fail(TnStatus::NullPointer, "seq is null"),
    };
    let index = match DyadicIndex::new(level, position) {
        Ok(index) => index,
        Err(err) => return fail_with(&err),
    };
    if !value.is_finite() {
        return fail(TnStatus::InvalidArgument, &format!("non-finite value {value}"));
    }
    handle.0.set(index, value);
    TnStatus::Ok
}

/// Reads the value on an interval (0 when absent from the support).
///
/// # Safety
/// `seq` must be a live handle from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tn_seq_get(
    seq: *const TnSequence,
    level: u32,
    position: u64,
    out: *mut f64,
) -> TnStatus {
    let handle = deref!(seq);
    let slot = out!(out);
    let index = match DyadicIndex::new(level, position) {
        Ok(index) => index,
        Err(err) => return fail_with(&err),
    };
    *slot = handle.0.get(index);
    TnStatus::Ok
}

/// Number of intervals with a nonzero value.
///
/// # Safety
/// `seq` must be a live handle from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tn_seq_support_size(seq: *const TnSequence, out: *mut usize) -> TnStatus {
    let handle = deref!(seq);
    let slot = out!(out);
    *slot = handle.0.support_size();
    TnStatus::Ok
}

/// Reads the `i`-th support entry in breadth-first interval order.  Fails
/// with `InvalidArgument` when `i` is past the end.
///
/// # Safety
/// `seq` must be a live handle; the three out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn tn_seq_entry(
    seq: *const TnSequence,
    i: usize,
    out_level: *mut u32,
    out_position: *mut u64,
    out_value: *mut f64,
) -> TnStatus {
    let handle = deref!(seq);
    let level = out!(out_level);
    let position = out!(out_position);
    let value = out!(out_value);
    match handle.0.iter().nth(i) {
        Some((index, v)) => {
            *level = index.level;
            *position = index.position;
            *value = v;
            TnStatus::Ok
        }
        None => fail(
            TnStatus::InvalidArgument,
            &format!("entry {i} is out of range for support of size {}", handle.0.support_size()),
        ),
    }
}

/// Mixed norm `‖g‖_{X^{p,q}}`.  Exponents are doubles in `[1, ∞]`; pass
/// `INFINITY` for `∞`.
///
/// # Safety
/// `seq` must be a live handle from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tn_xpq_norm(
    seq: *const TnSequence,
    p: f64,
    q: f64,
    out: *mut f64,
) -> TnStatus {
    let handle = deref!(seq);
    let slot = out!(out);
    let p = match exponent(p, "p") {
        Ok(p) => p,
        Err(status) => return status,
    };
    let q = match exponent(q, "q") {
        Ok(q) => q,
        Err(status) => return status,
    };
    *slot = xpq::xpq_norm(&handle.0, p, q).value;
    TnStatus::Ok
}

/// Cone formulation of `‖g‖_{X^{∞,q}}`: the maximum over base points of the
/// `ℓ^q` norm along the chain of intervals containing the point.
///
/// # Safety
/// `seq` must be a live handle from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tn_cone_norm(seq: *const TnSequence, q: f64, out: *mut f64) -> TnStatus {
    let handle = deref!(seq);
    let slot = out!(out);
    let q = match exponent(q, "q") {
        Ok(q) => q,
        Err(status) => return status,
    };
    *slot = xpq::max_cone_norm(&handle.0, q);
    TnStatus::Ok
}

/// Duality pairing `Σ_I f_I g_I`.
///
/// # Safety
/// `f` and `g` must be live handles from this library; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn tn_pairing(
    f: *const TnSequence,
    g: *const TnSequence,
    out: *mut f64,
) -> TnStatus {
    let f = deref!(f);
    let g = deref!(g);
    let slot = out!(out);
    *slot = xpq::pairing(&f.0, &g.0);
    TnStatus::Ok
}

/// Builds the sequence `f` with `‖f‖_{X^{p,q}} ≤ 1` whose pairing with `g`
/// attains `‖g‖` in the conjugate norm.  The new handle must be freed with
/// [`tn_seq_free`].
///
/// # Safety
/// `g` must be a live handle from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tn_dual_extremizer(
    g: *const TnSequence,
    p: f64,
    q: f64,
    out: *mut *mut TnSequence,
) -> TnStatus {
    let handle = deref!(g);
    let slot = out!(out);
    let p = match exponent(p, "p") {
        Ok(p) => p,
        Err(status) => return status,
    };
    let q = match exponent(q, "q") {
        Ok(q) => q,
        Err(status) => return status,
    };
    let extremizer = xpq::dual_extremizer(&handle.0, p, q);
    *slot = Box::into_raw(Box::new(TnSequence(extremizer)));
    TnStatus::Ok
}

/// Operator norm of the Haar multiplier with coefficient sequence `a` from
/// `SL^∞` to `L²`, which equals `‖a‖_{X^{2,∞}}`.
///
/// # Safety
/// `a` must be a live handle from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tn_haar_multiplier_norm(a: *const TnSequence, out: *mut f64) -> TnStatus {
    let handle = deref!(a);
    let slot = out!(out);
    *slot = haar::haar_multiplier_norm(&handle.0).norm;
    TnStatus::Ok
}

/// Allocates a step function of the given dyadic depth from `len = 2^depth`
/// cell values.  Free with [`tn_step_free`].
///
/// # Safety
/// `values` must point to `len` readable doubles (it may be null only when
/// `len` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tn_step_new(
    depth: u32,
    values: *const f64,
    len: usize,
    out: *mut *mut TnStep,
) -> TnStatus {
    let slot = out!(out);
    if values.is_null() && len > 0 {
        return fail(TnStatus::NullPointer, "values is null");
    }
    let cells = if len == 0 {
        Vec::new()
    } else {
        unsafe { std::slice::from_raw_parts(values, len) }.to_vec()
    };
    match StepFunction::new(depth, cells) {
        Ok(step) => {
            *slot = Box::into_raw(Box::new(TnStep(step)));
            TnStatus::Ok
        }
        Err(err) => fail_with(&err),
    }
}

/// Frees a step-function handle; a null pointer is ignored.
///
/// # Safety
/// `step` must be a pointer returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tn_step_free(step: *mut TnStep) {
    if !step.is_null() {
        drop(unsafe { Box::from_raw(step) });
    }
}

/// Dyadic `JN_p` norm of a step function: the `X^{p,∞}` norm of its
/// normalized oscillation sequence.  Requires finite `p > 1`; `osc` is a
/// [`TnOscKind`] code.
///
/// # Safety
/// `step` must be a live handle from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tn_jnp_norm(
    step: *const TnStep,
    p: f64,
    osc: i32,
    out: *mut f64,
) -> TnStatus {
    let handle = deref!(step);
    let slot = out!(out);
    let p = match exponent(p, "p") {
        Ok(p) => p,
        Err(status) => return status,
    };
    let kind = match osc {
        0 => OscKind::L1,
        1 => OscKind::L2Direct,
        2 => OscKind::L2Haar,
        other => {
            return fail(TnStatus::InvalidArgument, &format!("unknown oscillation code {other}"))
        }
    };
    match haar::jnp_dyadic_norm(&handle.0, p, kind) {
        Ok(report) => {
            *slot = report.value;
            TnStatus::Ok
        }
        Err(err) => fail_with(&err),
    }
}

/// `SL^∞` norm: the essential supremum of the Haar square function.
///
/// # Safety
/// `step` must be a live handle from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tn_slinfty_norm(step: *const TnStep, out: *mut f64) -> TnStatus {
    let handle = deref!(step);
    let slot = out!(out);
    *slot = haar::slinfty_norm(&handle.0);
    TnStatus::Ok
}

/// Luxemburg norm `inf {λ > 0 : ∫ Φ(|f|/λ) ≤ 1}` for the Young function
/// selected by the [`TnYoung`] code `phi`.
///
/// # Safety
/// `step` must be a live handle from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tn_luxemburg_norm(
    step: *const TnStep,
    phi: i32,
    out: *mut f64,
) -> TnStatus {
    let handle = deref!(step);
    let slot = out!(out);
    let phi = match phi {
        0 => YoungFunction::LLogHalfL,
        1 => YoungFunction::ExpSquare,
        other => {
            return fail(TnStatus::InvalidArgument, &format!("unknown Young-function code {other}"))
        }
    };
    *slot = orlicz::luxemburg_norm(&handle.0, phi);
    TnStatus::Ok
}
