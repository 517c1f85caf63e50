//! C ABI for hyperharm.
//!
//! Every fallible function returns an [`HhStatus`] code and writes results
//! through out-pointers. Handles are opaque and must be released with the
//! matching `*_free` function. Points are arrays of `n` doubles.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use hyperharm::clifford::MultiVector;
use hyperharm::harmonic::{poisson_kernel, AtomicHarmonic, ScalarField};
use hyperharm::lab::{check_main_sharp, liu_constant, liu_constant_n3, sharp_gradient_constant};
use hyperharm::mobius::{hyperbolic_metric, mobius_map, pseudo_metric};
use hyperharm::point::{require_interior, same_dim};
use hyperharm::Error;

/// Status codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HhStatus {
    Ok = 0,
    NullPointer = 1,
    DimensionMismatch = 2,
    OutsideDomain = 3,
    Singular = 4,
    Invalid = 5,
    Precondition = 6,
    Unsupported = 7,
    Panic = 8,
}

/// Outcome of an inequality check: passes when `margin >= -tol`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HhCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Positive harmonic function `sum w_k P(x, xi_k)`.
pub struct HhAtomicHarmonic(AtomicHarmonic);

/// Element of the Clifford algebra with `m` generators.
pub struct HhMultiVector(MultiVector);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> HhStatus {
    match e {
        Error::DimensionMismatch { .. } | Error::AlgebraMismatch { .. } => HhStatus::DimensionMismatch,
        Error::NotOnSphere { .. } | Error::NotInBall { .. } | Error::NearBoundary { .. } => HhStatus::OutsideDomain,
        Error::Singular { .. } => HhStatus::Singular,
        Error::Precondition { .. } => HhStatus::Precondition,
        Error::UnsupportedDimension { .. } | Error::TooManyGenerators(_) => HhStatus::Unsupported,
        Error::Invalid(_) => HhStatus::Invalid,
    }
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), HhStatus>) -> HhStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error(String::new());
            HhStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => {
            set_last_error("internal panic".into());
            HhStatus::Panic
        }
    }
}

fn fail(e: Error) -> HhStatus {
    let s = status_of(&e);
    set_last_error(e.to_string());
    s
}

fn null(what: &str) -> HhStatus {
    set_last_error(format!("null pointer: {what}"));
    HhStatus::NullPointer
}

/// Borrows `len` doubles; `len == 0` accepts a null pointer.
unsafe fn input<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], HhStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn output<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, HhStatus> {
    p.as_mut().ok_or_else(|| null(what))
}

/// Message for the last failing call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn hh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// `2 |B_{n-1}| / |B_n|`; NaN for `n == 0`.
#[no_mangle]
pub extern "C" fn hh_liu_constant(n: usize) -> f64 {
    if n == 0 {
        f64::NAN
    } else {
        liu_constant(n)
    }
}

/// `8 / (3 sqrt 3)`.
#[no_mangle]
pub extern "C" fn hh_liu_constant_n3() -> f64 {
    liu_constant_n3()
}

/// Sharp gradient constant for bounded real harmonic functions on `B_n`;
/// NaN for `n == 0`.
#[no_mangle]
pub extern "C" fn hh_sharp_gradient_constant(n: usize) -> f64 {
    if n == 0 {
        f64::NAN
    } else {
        sharp_gradient_constant(n)
    }
}

/// `phi_a(x)` written to `out[0..n]`.
///
/// # Safety
/// `a`, `x` and `out` must point to `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn hh_mobius_map(n: usize, a: *const f64, x: *const f64, out: *mut f64) -> HhStatus {
    guard(|| {
        let a = input(a, n, "a")?;
        let x = input(x, n, "x")?;
        if out.is_null() {
            return Err(null("out"));
        }
        require_interior(a).map_err(fail)?;
        require_interior(x).map_err(fail)?;
        let y = mobius_map(a, x);
        slice::from_raw_parts_mut(out, n).copy_from_slice(&y);
        Ok(())
    })
}

/// Hyperbolic distance `2 artanh |phi_y(x)|`.
///
/// # Safety
/// `x` and `y` must point to `n` doubles; `out` to one.
#[no_mangle]
pub unsafe extern "C" fn hh_hyperbolic_metric(n: usize, x: *const f64, y: *const f64, out: *mut f64) -> HhStatus {
    guard(|| {
        let (x, y) = (input(x, n, "x")?, input(y, n, "y")?);
        *output(out, "out")? = hyperbolic_metric(x, y).map_err(fail)?;
        Ok(())
    })
}

/// Pseudo-hyperbolic distance `|phi_y(x)|`.
///
/// # Safety
/// `x` and `y` must point to `n` doubles; `out` to one.
#[no_mangle]
pub unsafe extern "C" fn hh_pseudo_metric(n: usize, x: *const f64, y: *const f64, out: *mut f64) -> HhStatus {
    guard(|| {
        let (x, y) = (input(x, n, "x")?, input(y, n, "y")?);
        *output(out, "out")? = pseudo_metric(x, y).map_err(fail)?;
        Ok(())
    })
}

/// `P(x, xi) = (1 - |x|^2) / |x - xi|^n`.
///
/// # Safety
/// `x` and `xi` must point to `n` doubles; `out` to one.
#[no_mangle]
pub unsafe extern "C" fn hh_poisson_kernel(n: usize, x: *const f64, xi: *const f64, out: *mut f64) -> HhStatus {
    guard(|| {
        let (x, xi) = (input(x, n, "x")?, input(xi, n, "xi")?);
        *output(out, "out")? = poisson_kernel(x, xi).map_err(fail)?;
        Ok(())
    })
}

/// Builds `sum_k weights[k] P(x, sites[k])`; `sites` is row-major
/// `count x n`. On success `*out` owns a new handle.
///
/// # Safety
/// `weights` must point to `count` doubles, `sites` to `count * n`, `out`
/// to a writable handle pointer.
#[no_mangle]
pub unsafe extern "C" fn hh_atomic_new(
    n: usize,
    count: usize,
    weights: *const f64,
    sites: *const f64,
    out: *mut *mut HhAtomicHarmonic,
) -> HhStatus {
    guard(|| {
        let out = output(out, "out")?;
        *out = ptr::null_mut();
        let w = input(weights, count, "weights")?;
        let s = input(sites, count.checked_mul(n).ok_or(HhStatus::Invalid)?, "sites")?;
        let atoms = w.iter().zip(s.chunks_exact(n.max(1))).map(|(&w, xi)| (w, xi.to_vec())).collect();
        let f = AtomicHarmonic::new(n, atoms).map_err(fail)?;
        *out = Box::into_raw(Box::new(HhAtomicHarmonic(f)));
        Ok(())
    })
}

/// Releases a handle from [`hh_atomic_new`]; null is ignored.
///
/// # Safety
/// `h` must come from [`hh_atomic_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hh_atomic_free(h: *mut HhAtomicHarmonic) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// `f(x)`.
///
/// # Safety
/// `h` must be a live handle, `x` must point to `n` doubles where `n` is the
/// handle's dimension, `out` to one.
#[no_mangle]
pub unsafe extern "C" fn hh_atomic_value(h: *const HhAtomicHarmonic, x: *const f64, out: *mut f64) -> HhStatus {
    guard(|| {
        let f = &h.as_ref().ok_or_else(|| null("handle"))?.0;
        let x = input(x, f.dim(), "x")?;
        require_interior(x).map_err(fail)?;
        *output(out, "out")? = f.value(x);
        Ok(())
    })
}

/// `grad f(x)` written to `out[0..n]`.
///
/// # Safety
/// As [`hh_atomic_value`], with `out` pointing to `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn hh_atomic_gradient(h: *const HhAtomicHarmonic, x: *const f64, out: *mut f64) -> HhStatus {
    guard(|| {
        let f = &h.as_ref().ok_or_else(|| null("handle"))?.0;
        let x = input(x, f.dim(), "x")?;
        if out.is_null() {
            return Err(null("out"));
        }
        require_interior(x).map_err(fail)?;
        slice::from_raw_parts_mut(out, f.dim()).copy_from_slice(&f.gradient(x));
        Ok(())
    })
}

/// Sharp gradient estimate `|(|x|^2 - 1) grad f + (n - 2) x f| <= n f`.
///
/// # Safety
/// As [`hh_atomic_value`], with `out` pointing to one [`HhCheck`].
#[no_mangle]
pub unsafe extern "C" fn hh_atomic_check_main_sharp(
    h: *const HhAtomicHarmonic,
    x: *const f64,
    out: *mut HhCheck,
) -> HhStatus {
    guard(|| {
        let f = &h.as_ref().ok_or_else(|| null("handle"))?.0;
        let x = input(x, f.dim(), "x")?;
        let r = check_main_sharp(f, x).map_err(fail)?;
        *output(out, "out")? = HhCheck {
            lhs: r.lhs,
            rhs: r.rhs,
            margin: r.margin,
            tol: r.tol,
            pass: r.pass,
        };
        Ok(())
    })
}

fn store_mv(out: *mut *mut HhMultiVector, v: MultiVector) -> Result<(), HhStatus> {
    let out = unsafe { output(out, "out")? };
    *out = Box::into_raw(Box::new(HhMultiVector(v)));
    Ok(())
}

unsafe fn mv<'a>(h: *const HhMultiVector, what: &str) -> Result<&'a MultiVector, HhStatus> {
    h.as_ref().map(|v| &v.0).ok_or_else(|| null(what))
}

/// Multivector with `m` generators from `2^m` blade coefficients (blade
/// index = bit set of generators).
///
/// # Safety
/// `coeffs` must point to `len` doubles and `out` to a writable handle
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn hh_mv_new(
    m: usize,
    coeffs: *const f64,
    len: usize,
    out: *mut *mut HhMultiVector,
) -> HhStatus {
    guard(|| {
        let c = input(coeffs, len, "coeffs")?;
        let v = MultiVector::from_coeffs(m, c.to_vec()).map_err(fail)?;
        store_mv(out, v)
    })
}

/// Paravector `x_0 + sum x_i e_i` with `len - 1` generators.
///
/// # Safety
/// `x` must point to `len` doubles and `out` to a writable handle pointer.
#[no_mangle]
pub unsafe extern "C" fn hh_mv_paravector(x: *const f64, len: usize, out: *mut *mut HhMultiVector) -> HhStatus {
    guard(|| {
        let x = input(x, len, "x")?;
        let v = MultiVector::paravector(x).map_err(fail)?;
        store_mv(out, v)
    })
}

/// Releases a multivector handle; null is ignored.
///
/// # Safety
/// `h` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hh_mv_free(h: *mut HhMultiVector) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of coefficients, `2^m`; zero for null.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hh_mv_len(h: *const HhMultiVector) -> usize {
    h.as_ref().map_or(0, |v| v.0.coeffs().len())
}

/// Copies the coefficients into `buf`, which must hold [`hh_mv_len`] doubles.
///
/// # Safety
/// `h` must be a live handle and `buf` must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn hh_mv_coeffs(h: *const HhMultiVector, buf: *mut f64, len: usize) -> HhStatus {
    guard(|| {
        let v = mv(h, "handle")?;
        same_dim(v.coeffs().len(), len).map_err(fail)?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        slice::from_raw_parts_mut(buf, len).copy_from_slice(v.coeffs());
        Ok(())
    })
}

/// Clifford product `a b`.
///
/// # Safety
/// `a`, `b` must be live handles and `out` a writable handle pointer.
#[no_mangle]
pub unsafe extern "C" fn hh_mv_mul(
    a: *const HhMultiVector,
    b: *const HhMultiVector,
    out: *mut *mut HhMultiVector,
) -> HhStatus {
    guard(|| {
        let p = mv(a, "a")?.try_mul(mv(b, "b")?).map_err(fail)?;
        store_mv(out, p)
    })
}

/// Clifford conjugate.
///
/// # Safety
/// `a` must be a live handle and `out` a writable handle pointer.
#[no_mangle]
pub unsafe extern "C" fn hh_mv_conj(a: *const HhMultiVector, out: *mut *mut HhMultiVector) -> HhStatus {
    guard(|| {
        let c = mv(a, "a")?.conj();
        store_mv(out, c)
    })
}

/// Two-sided inverse; `Singular` when the condition estimate exceeds `1e12`.
///
/// # Safety
/// `a` must be a live handle and `out` a writable handle pointer.
#[no_mangle]
pub unsafe extern "C" fn hh_mv_inverse(a: *const HhMultiVector, out: *mut *mut HhMultiVector) -> HhStatus {
    guard(|| {
        let inv = mv(a, "a")?.inverse().map_err(fail)?;
        store_mv(out, inv)
    })
}

/// Euclidean norm of the coefficient vector.
///
/// # Safety
/// `a` must be a live handle and `out` point to one double.
#[no_mangle]
pub unsafe extern "C" fn hh_mv_norm(a: *const HhMultiVector, out: *mut f64) -> HhStatus {
    guard(|| {
        let v = mv(a, "a")?;
        *output(out, "out")? = v.norm();
        Ok(())
    })
}
