//! C ABI over `pllab`. Objects cross the boundary as opaque handles created
//! by `*_new`/`*_from_json` and released by the matching `*_free`. Every
//! fallible call returns a [`PllabStatus`]; the message of the last failure
//! on the calling thread is available from [`pllab_last_error`].
//!
//! Matrices are passed row-major as separate real and imaginary arrays; a
//! null imaginary pointer means a real matrix.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pllab::cli::{run, Command, Format, InputSource, JobSpec};
use pllab::quant::json::parse_quantization_str;
use pllab::tensor::{l_norm_bracket, pl_norm_bracket, BracketOptions, NormBracket};
use pllab::{AmplifiedElement, Error, PairingMap, Quantization, C64};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PllabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Schema = 3,
    DimensionMismatch = 4,
    InvalidParameter = 5,
    Internal = 6,
}

pub struct PllabQuantization(Quantization);

pub struct PllabElement(AmplifiedElement);

pub struct PllabBracket(NormBracket);

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PllabBracketOptions {
    pub budget: usize,
    pub seed: u64,
    /// Nonzero selects the column-major pairing of `H_n ⊗ H_k`.
    pub column_major: i32,
    pub tolerance: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> PllabStatus {
    match e {
        Error::DimensionMismatch { .. } => PllabStatus::DimensionMismatch,
        Error::Schema { .. } => PllabStatus::Schema,
        _ => PllabStatus::InvalidParameter,
    }
}

fn fail(e: Error) -> PllabStatus {
    set_error(e.to_string());
    status_of(&e)
}

/// Runs `f`, turning panics into [`PllabStatus::Internal`].
fn guard(f: impl FnOnce() -> PllabStatus) -> PllabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "internal error".into());
            set_error(msg);
            PllabStatus::Internal
        }
    }
}

macro_rules! nonnull {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            set_error(concat!("null pointer: ", stringify!($p)));
            return PllabStatus::NullPointer;
        })+
    };
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, PllabStatus> {
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string is not valid UTF-8");
        PllabStatus::InvalidUtf8
    })
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("interior NULs replaced")
        .into_raw()
}

/// Message describing the last failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pllab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn pllab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a quantization from its JSON descriptor.
#[no_mangle]
pub unsafe extern "C" fn pllab_quantization_from_json(
    json: *const c_char,
    out: *mut *mut PllabQuantization,
) -> PllabStatus {
    nonnull!(json, out);
    guard(|| {
        let text = match read_str(json) {
            Ok(s) => s,
            Err(s) => return s,
        };
        match parse_quantization_str(text) {
            Ok(q) => {
                *out = Box::into_raw(Box::new(PllabQuantization(q)));
                PllabStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn pllab_quantization_free(q: *mut PllabQuantization) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

/// Dimension of the underlying space, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn pllab_quantization_dim(q: *const PllabQuantization) -> usize {
    q.as_ref().map_or(0, |q| q.0.dim())
}

/// Creates the element of `H_d(E)` with the given `d × m` coefficients.
#[no_mangle]
pub unsafe extern "C" fn pllab_element_new(
    re: *const f64,
    im: *const f64,
    d: usize,
    m: usize,
    out: *mut *mut PllabElement,
) -> PllabStatus {
    nonnull!(re, out);
    guard(|| {
        if d == 0 || m == 0 {
            return fail(Error::InvalidParameter(
                "element dimensions must be positive".into(),
            ));
        }
        let re = std::slice::from_raw_parts(re, d * m);
        let im = (!im.is_null()).then(|| std::slice::from_raw_parts(im, d * m));
        let coeffs = pllab::nalgebra::DMatrix::from_fn(d, m, |r, c| {
            let k = r * m + c;
            C64::new(re[k], im.map_or(0.0, |im| im[k]))
        });
        match AmplifiedElement::new(coeffs) {
            Ok(u) => {
                *out = Box::into_raw(Box::new(PllabElement(u)));
                PllabStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn pllab_element_free(u: *mut PllabElement) {
    if !u.is_null() {
        drop(Box::from_raw(u));
    }
}

/// Certified bracket `[lower, upper]` for the matrix norm of `u` in `q`.
#[no_mangle]
pub unsafe extern "C" fn pllab_amp_norm(
    q: *const PllabQuantization,
    u: *const PllabElement,
    lower: *mut f64,
    upper: *mut f64,
) -> PllabStatus {
    nonnull!(q, u, lower, upper);
    guard(|| match (*q).0.amp_norm(&(*u).0) {
        Ok(v) => {
            *lower = v.lower;
            *upper = v.value;
            PllabStatus::Ok
        }
        Err(e) => fail(e),
    })
}

#[no_mangle]
pub extern "C" fn pllab_bracket_options_default() -> PllabBracketOptions {
    let d = BracketOptions::default();
    PllabBracketOptions {
        budget: d.budget,
        seed: d.seed,
        column_major: 0,
        tolerance: d.tolerance,
    }
}

fn bracket_options(o: &PllabBracketOptions) -> BracketOptions {
    BracketOptions {
        budget: o.budget.max(1),
        seed: o.seed,
        pairing: if o.column_major != 0 {
            PairingMap::ColumnMajor
        } else {
            PairingMap::RowMajor
        },
        tolerance: o.tolerance,
    }
}

unsafe fn bracket(
    pl: bool,
    e: *const PllabQuantization,
    f: *const PllabQuantization,
    u: *const PllabElement,
    opts: *const PllabBracketOptions,
    out: *mut *mut PllabBracket,
) -> PllabStatus {
    nonnull!(e, f, u, out);
    guard(|| {
        let o = opts
            .as_ref()
            .copied()
            .unwrap_or_else(|| pllab_bracket_options_default());
        if o.tolerance.is_nan() || o.tolerance <= 0.0 {
            return fail(Error::InvalidParameter("tolerance must be positive".into()));
        }
        let o = bracket_options(&o);
        let r = if pl {
            pl_norm_bracket(&(*e).0, &(*f).0, &(*u).0, &o)
        } else {
            l_norm_bracket(&(*e).0, &(*f).0, &(*u).0, &o)
        };
        match r {
            Ok(b) => {
                *out = Box::into_raw(Box::new(PllabBracket(b)));
                PllabStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Bracket for the pl-norm of `u ∈ H_d(E ⊗ F)`. `opts` may be null for defaults.
#[no_mangle]
pub unsafe extern "C" fn pllab_pl_bracket(
    e: *const PllabQuantization,
    f: *const PllabQuantization,
    u: *const PllabElement,
    opts: *const PllabBracketOptions,
    out: *mut *mut PllabBracket,
) -> PllabStatus {
    bracket(true, e, f, u, opts, out)
}

/// Bracket for the l-norm of `u ∈ H_d(E ⊗ F)`. `opts` may be null for defaults.
#[no_mangle]
pub unsafe extern "C" fn pllab_l_bracket(
    e: *const PllabQuantization,
    f: *const PllabQuantization,
    u: *const PllabElement,
    opts: *const PllabBracketOptions,
    out: *mut *mut PllabBracket,
) -> PllabStatus {
    bracket(false, e, f, u, opts, out)
}

#[no_mangle]
pub unsafe extern "C" fn pllab_bracket_free(b: *mut PllabBracket) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Lower end of the bracket, NaN for a null handle.
#[no_mangle]
pub unsafe extern "C" fn pllab_bracket_lower(b: *const PllabBracket) -> f64 {
    b.as_ref().map_or(f64::NAN, |b| b.0.lower)
}

/// Upper end of the bracket, NaN for a null handle.
#[no_mangle]
pub unsafe extern "C" fn pllab_bracket_upper(b: *const PllabBracket) -> f64 {
    b.as_ref().map_or(f64::NAN, |b| b.0.upper)
}

/// 1 when the bracket did not close within the tolerance, 0 when it did,
/// -1 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn pllab_bracket_gap(b: *const PllabBracket) -> i32 {
    b.as_ref().map_or(-1, |b| b.0.gap as i32)
}

/// The bracket with both witnesses as JSON; free with [`pllab_string_free`].
#[no_mangle]
pub unsafe extern "C" fn pllab_bracket_to_json(
    b: *const PllabBracket,
    out: *mut *mut c_char,
) -> PllabStatus {
    nonnull!(b, out);
    guard(|| {
        *out = into_c_string((*b).0.to_json().to_string());
        PllabStatus::Ok
    })
}

/// Runs a CLI job and returns its JSON report and exit code (0 pass, 1
/// violation, 2 gap). `input_json` may be null for the suites.
#[no_mangle]
pub unsafe extern "C" fn pllab_run(
    command: *const c_char,
    input_json: *const c_char,
    budget: usize,
    seed: u64,
    trials: usize,
    report: *mut *mut c_char,
    exit_code: *mut i32,
) -> PllabStatus {
    nonnull!(command, report, exit_code);
    guard(|| {
        let cmd = match read_str(command) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let Some(cmd) = Command::parse(cmd) else {
            return fail(Error::InvalidParameter(format!("unknown command {cmd:?}")));
        };
        let mut job = JobSpec::new(cmd);
        job.budget = budget;
        job.seed = seed;
        job.trials = trials;
        job.format = Format::Json;
        if !input_json.is_null() {
            match read_str(input_json) {
                Ok(s) => job.input = Some(InputSource::Inline(s.to_string())),
                Err(s) => return s,
            }
        }
        match run(&job) {
            Ok(r) => {
                *exit_code = r.exit_code();
                *report = into_c_string(r.render(Format::Json));
                PllabStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}
