//! C ABI for `greedy-riesz`.
//!
//! Every fallible function returns a [`GrStatus`] and writes its result
//! through an out-pointer. On failure the message is available from
//! [`gr_last_error_message`] on the same thread. Handles are opaque and must
//! be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use greedy_riesz::asymptotics::{self, Sequence};
use greedy_riesz::binary::{self, ThetaVector};
use greedy_riesz::energy::{self, EnergyParams};
use greedy_riesz::limits::{self, ScanResult, ScanTarget};
use greedy_riesz::{arith, special, Error, Rational};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrStatus {
    Ok = 0,
    Domain = 1,
    Pole = 2,
    Structure = 3,
    Construction = 4,
    Tolerance = 5,
    Degenerate = 6,
    NullPointer = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

/// Function scanned by [`gr_scan`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrTarget {
    /// 𝓗(·, s).
    H = 0,
    /// 𝓚.
    K = 1,
    /// 𝓡.
    R = 2,
}

/// Opaque vector of normalized binary parts.
pub struct GrTheta(ThetaVector);

/// Opaque grid-scan result.
pub struct GrScan(ScanResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> GrStatus {
    match e {
        Error::Domain(_) => GrStatus::Domain,
        Error::Pole(_) => GrStatus::Pole,
        Error::Structure(_) => GrStatus::Structure,
        Error::Construction(_) => GrStatus::Construction,
        Error::Tolerance(_) => GrStatus::Tolerance,
        Error::Degenerate(_) => GrStatus::Degenerate,
    }
}

/// Runs `f`, storing its value in `out`, and maps errors and panics to
/// status codes.
fn guard<T>(out: *mut T, f: impl FnOnce() -> Result<T, Error>) -> GrStatus {
    if out.is_null() {
        set_error("null output pointer");
        return GrStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(v)) => {
            unsafe { out.write(v) };
            set_error("");
            GrStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            GrStatus::Panic
        }
    }
}

unsafe fn theta_ref<'a>(theta: *const GrTheta) -> Result<&'a ThetaVector, Error> {
    theta
        .as_ref()
        .map(|t| &t.0)
        .ok_or_else(|| Error::Domain("null theta handle".into()))
}

/// Message for the last failure on this thread; empty after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn gr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gr_version() -> *const c_char {
    static VERSION: &CStr =
        match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
            Ok(v) => v,
            Err(_) => panic!("version string"),
        };
    VERSION.as_ptr()
}

/// η(N) for N ≥ 1.
#[no_mangle]
pub extern "C" fn gr_theta_eta(n: u64, out: *mut *mut GrTheta) -> GrStatus {
    guard(out, || {
        Ok(Box::into_raw(Box::new(GrTheta(binary::eta(n)?))))
    })
}

/// Vector from explicit components (which must have dyadic ratios).
///
/// # Safety
/// `components` must point to `len` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn gr_theta_from_components(
    components: *const f64,
    len: usize,
    out: *mut *mut GrTheta,
) -> GrStatus {
    guard(out, || {
        if components.is_null() {
            return Err(Error::Domain("null components".into()));
        }
        let slice = std::slice::from_raw_parts(components, len);
        Ok(Box::into_raw(Box::new(GrTheta(
            ThetaVector::from_components(slice)?,
        ))))
    })
}

/// Vector of the binary expansion of 1/x with x = num/den in [1/2, 1].
/// `prefer_finite` selects the terminating expansion when two exist.
#[no_mangle]
pub extern "C" fn gr_theta_from_abscissa(
    num: u64,
    den: u64,
    prefer_finite: bool,
    out: *mut *mut GrTheta,
) -> GrStatus {
    guard(out, || {
        if den == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        let x = Rational::new(num, den);
        let sv = binary::expand_reciprocal(x, prefer_finite, binary::DEFAULT_MAX_TERMS)?;
        Ok(Box::into_raw(Box::new(GrTheta(sv.into_theta()))))
    })
}

/// Number of stored components.
///
/// # Safety
/// `theta` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gr_theta_len(theta: *const GrTheta, out: *mut usize) -> GrStatus {
    guard(out, || Ok(theta_ref(theta)?.len()))
}

/// Copies the stored components into `buf`. `out_len` receives the number
/// of components; returns `BufferTooSmall` if `cap` is less than that.
///
/// # Safety
/// `theta` must be a live handle and `buf` must have room for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn gr_theta_components(
    theta: *const GrTheta,
    buf: *mut f64,
    cap: usize,
    out_len: *mut usize,
) -> GrStatus {
    let comps = match theta_ref(theta) {
        Ok(t) => t.components(),
        Err(e) => {
            set_error(&e.to_string());
            return GrStatus::NullPointer;
        }
    };
    let status = guard(out_len, || Ok(comps.len()));
    if status != GrStatus::Ok {
        return status;
    }
    if cap < comps.len() {
        set_error("buffer too small");
        return GrStatus::BufferTooSmall;
    }
    if buf.is_null() && !comps.is_empty() {
        set_error("null buffer");
        return GrStatus::NullPointer;
    }
    ptr::copy_nonoverlapping(comps.as_ptr(), buf, comps.len());
    GrStatus::Ok
}

/// Releases a vector handle. Null is ignored.
///
/// # Safety
/// `theta` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gr_theta_free(theta: *mut GrTheta) {
    if !theta.is_null() {
        drop(Box::from_raw(theta));
    }
}

/// H(θ; s).
///
/// # Safety
/// `theta` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gr_h(theta: *const GrTheta, s: f64, tol: f64, out: *mut f64) -> GrStatus {
    guard(out, || arith::h(theta_ref(theta)?, s, tol))
}

/// K(θ).
///
/// # Safety
/// `theta` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gr_k(theta: *const GrTheta, tol: f64, out: *mut f64) -> GrStatus {
    guard(out, || arith::k(theta_ref(theta)?, tol))
}

/// R(θ).
///
/// # Safety
/// `theta` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gr_r(theta: *const GrTheta, tol: f64, out: *mut f64) -> GrStatus {
    guard(out, || arith::r(theta_ref(theta)?, tol))
}

/// G(θ; s).
///
/// # Safety
/// `theta` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gr_g(theta: *const GrTheta, s: f64, tol: f64, out: *mut f64) -> GrStatus {
    guard(out, || arith::g(theta_ref(theta)?, s, tol))
}

/// Λ(θ).
///
/// # Safety
/// `theta` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gr_lambda(theta: *const GrTheta, tol: f64, out: *mut f64) -> GrStatus {
    guard(out, || arith::lambda(theta_ref(theta)?, tol))
}

/// Riesz s-energy of the N-th roots of unity.
#[no_mangle]
pub extern "C" fn gr_roots_energy(n: u64, s: f64, out: *mut f64) -> GrStatus {
    guard(out, || energy::roots_energy(n, EnergyParams::new(s)))
}

/// Energy of the first N points of the greedy sequence.
#[no_mangle]
pub extern "C" fn gr_greedy_energy(n: u64, s: f64, out: *mut f64) -> GrStatus {
    guard(out, || energy::greedy_energy(n, EnergyParams::new(s)))
}

/// Potential of the first N greedy points at the next point.
#[no_mangle]
pub extern "C" fn gr_extremal_potential(n: u64, s: f64, out: *mut f64) -> GrStatus {
    guard(out, || energy::extremal_potential(n, EnergyParams::new(s)))
}

/// T_{N,s}.
#[no_mangle]
pub extern "C" fn gr_t_sequence(n: u64, s: f64, out: *mut f64) -> GrStatus {
    guard(out, || asymptotics::t_sequence(n, s))
}

/// F_{N,s}.
#[no_mangle]
pub extern "C" fn gr_f_sequence(n: u64, s: f64, out: *mut f64) -> GrStatus {
    guard(out, || asymptotics::f_sequence(n, s))
}

/// Predicted value of T_{N,s} (or F_{N,s} if `f_sequence`) and the scale
/// of its remainder.
///
/// # Safety
/// `scale` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn gr_predict(
    n: u64,
    s: f64,
    f_sequence: bool,
    value: *mut f64,
    scale: *mut f64,
) -> GrStatus {
    let mut remainder_scale = f64::NAN;
    let status = guard(value, || {
        let seq = if f_sequence { Sequence::F } else { Sequence::T };
        let p = match seq {
            Sequence::T => asymptotics::predict_t(n, s)?,
            Sequence::F => asymptotics::predict_f(n, s)?,
        };
        remainder_scale = p.remainder_scale;
        Ok(p.value)
    });
    if status == GrStatus::Ok && !scale.is_null() {
        scale.write(remainder_scale);
    }
    status
}

/// Asymptotic expansion of the greedy energy.
#[no_mangle]
pub extern "C" fn gr_expansion_energy(n: u64, s: f64, out: *mut f64) -> GrStatus {
    guard(out, || asymptotics::expansion_e(n, s))
}

/// Cesàro mean of the greedy energy sequence.
#[no_mangle]
pub extern "C" fn gr_cesaro_mean(n: u64, s: f64, out: *mut f64) -> GrStatus {
    guard(out, || asymptotics::cesaro_mean(n, s))
}

/// Riemann ζ(s).
#[no_mangle]
pub extern "C" fn gr_zeta(s: f64, out: *mut f64) -> GrStatus {
    guard(out, || special::zeta(s))
}

/// Digamma ψ(x).
#[no_mangle]
pub extern "C" fn gr_digamma(x: f64, out: *mut f64) -> GrStatus {
    guard(out, || special::digamma(x))
}

/// v(s), the s-energy of normalized arclength.
#[no_mangle]
pub extern "C" fn gr_v(s: f64, out: *mut f64) -> GrStatus {
    guard(out, || special::v_s(s))
}

/// Constant C_M of the odd-s expansion.
#[no_mangle]
pub extern "C" fn gr_c_constant(m: usize, out: *mut f64) -> GrStatus {
    guard(out, || special::c_constant(m))
}

/// Scans `target` over the grid of order M. `s` is used only for `H`.
#[no_mangle]
pub extern "C" fn gr_scan(m: u32, target: GrTarget, s: f64, out: *mut *mut GrScan) -> GrStatus {
    guard(out, || {
        let t = match target {
            GrTarget::H => ScanTarget::H(s),
            GrTarget::K => ScanTarget::K,
            GrTarget::R => ScanTarget::R,
        };
        Ok(Box::into_raw(Box::new(GrScan(limits::scan_extremum(
            m, t,
        )?))))
    })
}

unsafe fn scan_ref<'a>(scan: *const GrScan) -> Result<&'a ScanResult, Error> {
    scan.as_ref()
        .map(|s| &s.0)
        .ok_or_else(|| Error::Domain("null scan handle".into()))
}

/// Number of grid points in a scan.
///
/// # Safety
/// `scan` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gr_scan_len(scan: *const GrScan, out: *mut usize) -> GrStatus {
    guard(out, || Ok(scan_ref(scan)?.values.len()))
}

/// Extremal value and its abscissa num/den.
///
/// # Safety
/// `scan` must be a live handle; `num` and `den` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn gr_scan_extremum(
    scan: *const GrScan,
    value: *mut f64,
    num: *mut u64,
    den: *mut u64,
) -> GrStatus {
    let mut arg = None;
    let status = guard(value, || {
        let r = scan_ref(scan)?;
        arg = Some(r.arg);
        Ok(r.extremum)
    });
    if let Some(a) = arg {
        if !num.is_null() {
            num.write(*a.numer());
        }
        if !den.is_null() {
            den.write(*a.denom());
        }
    }
    status
}

/// Certified distance from the grid extremum to the extremal constant.
/// `Domain` for targets without a bound (K and R).
///
/// # Safety
/// `scan` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gr_scan_error_bound(scan: *const GrScan, out: *mut f64) -> GrStatus {
    guard(out, || {
        scan_ref(scan)?
            .error_bound
            .ok_or_else(|| Error::Domain("no error bound for this target".into()))
    })
}

/// Copies abscissae and values into `xs` and `values` (either may be null).
/// `out_len` receives the number of points; returns `BufferTooSmall` if
/// `cap` is less than that.
///
/// # Safety
/// `scan` must be a live handle; non-null buffers must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn gr_scan_values(
    scan: *const GrScan,
    xs: *mut f64,
    values: *mut f64,
    cap: usize,
    out_len: *mut usize,
) -> GrStatus {
    let r = match scan_ref(scan) {
        Ok(r) => r,
        Err(e) => {
            set_error(&e.to_string());
            return GrStatus::NullPointer;
        }
    };
    let status = guard(out_len, || Ok(r.values.len()));
    if status != GrStatus::Ok {
        return status;
    }
    if cap < r.values.len() {
        set_error("buffer too small");
        return GrStatus::BufferTooSmall;
    }
    for (i, (x, v)) in r.values.iter().enumerate() {
        if !xs.is_null() {
            xs.add(i).write(*x.numer() as f64 / *x.denom() as f64);
        }
        if !values.is_null() {
            values.add(i).write(*v);
        }
    }
    GrStatus::Ok
}

/// Releases a scan handle. Null is ignored.
///
/// # Safety
/// `scan` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gr_scan_free(scan: *mut GrScan) {
    if !scan.is_null() {
        drop(Box::from_raw(scan));
    }
}
