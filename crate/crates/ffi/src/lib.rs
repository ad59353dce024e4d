//! C ABI over the `dcd-rtls` filters and closed-form predictors.
//!
//! Filters are exposed as opaque handles. Every fallible call returns a
//! [`DcdRtlsStatus`]; the message of the most recent failure on the calling
//! thread is available from [`dcd_rtls_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dcd_rtls::complexity::{predicted_ops, Algo, OpCounts};
use dcd_rtls::dcd::DcdParams;
use dcd_rtls::error::Error;
use dcd_rtls::filters::{AdaptiveFilter, DcdRtls, FilterConfig};
use dcd_rtls::linalg::SymMatrix;
use dcd_rtls::theory::{stability_lambda_bound, TheoryModel};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DcdRtlsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    DegenerateDenominator = 4,
    InvalidModel = 5,
    Numerical = 6,
    Panic = 7,
}

impl From<&Error> for DcdRtlsStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidInput(_) => Self::InvalidArgument,
            Error::Config(_) => Self::Config,
            Error::DegenerateDenominator { .. } => Self::DegenerateDenominator,
            Error::InvalidModel(_) | Error::DivergentMoments => Self::InvalidModel,
            Error::Singular(_) | Error::NonGenericTls(_) | Error::NotConverged { .. } | Error::Numerical(_) => {
                Self::Numerical
            }
        }
    }
}

/// Algorithms covered by the operation-count model.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DcdRtlsAlgo {
    DcdRtls = 0,
    Aip = 1,
    XRtls = 2,
    KRtls = 3,
}

/// Arithmetic operations per iteration.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DcdRtlsOpCounts {
    pub mul: u64,
    pub add: u64,
    pub div: u64,
    pub sqrt: u64,
}

impl From<OpCounts> for DcdRtlsOpCounts {
    fn from(c: OpCounts) -> Self {
        Self {
            mul: c.mul,
            add: c.add,
            div: c.div,
            sqrt: c.sqrt,
        }
    }
}

/// Filter settings. `lambda = 1 − 2^-p_exponent`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DcdRtlsConfig {
    pub order: usize,
    pub p_exponent: u32,
    pub gamma: f64,
    pub delta: f64,
    pub structured: bool,
    pub dcd_n: usize,
    pub dcd_m: u32,
    pub dcd_h: f64,
}

/// Opaque filter handle.
pub struct DcdRtlsFilter {
    inner: DcdRtls,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), DcdRtlsStatus>) -> DcdRtlsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DcdRtlsStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            DcdRtlsStatus::Panic
        }
    }
}

fn fail(e: Error) -> DcdRtlsStatus {
    set_error(&e.to_string());
    DcdRtlsStatus::from(&e)
}

fn null(what: &str) -> DcdRtlsStatus {
    set_error(&format!("{what} is null"));
    DcdRtlsStatus::NullPointer
}

/// Message of the last failure on this thread. The pointer stays valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dcd_rtls_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Eight taps, `λ = 1 − 2⁻¹⁰`, `γ = 1`, `δ = 10⁻²`, unstructured input, `N = 1`,
/// `M = 16`, `H = 1`.
#[no_mangle]
pub extern "C" fn dcd_rtls_config_default() -> DcdRtlsConfig {
    let dcd = DcdParams::default();
    DcdRtlsConfig {
        order: 8,
        p_exponent: 10,
        gamma: 1.0,
        delta: 1e-2,
        structured: false,
        dcd_n: dcd.n_max,
        dcd_m: dcd.m_bits,
        dcd_h: dcd.h_range,
    }
}

/// Creates a filter; on success `*out` owns it and must be released with
/// [`dcd_rtls_filter_free`].
///
/// # Safety
/// `config` must point to a valid config and `out` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn dcd_rtls_filter_new(config: *const DcdRtlsConfig, out: *mut *mut DcdRtlsFilter) -> DcdRtlsStatus {
    guard(|| {
        if config.is_null() {
            return Err(null("config"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let c = *config;
        let build = || -> Result<DcdRtls, Error> {
            let cfg = FilterConfig::new(c.order, c.p_exponent, c.gamma)?
                .delta(c.delta)
                .structured(c.structured);
            DcdRtls::new(cfg, DcdParams::new(c.dcd_n, c.dcd_m, c.dcd_h)?)
        };
        let inner = build().map_err(fail)?;
        *out = Box::into_raw(Box::new(DcdRtlsFilter { inner }));
        Ok(())
    })
}

/// Releases a filter. Null is ignored.
///
/// # Safety
/// `filter` must come from [`dcd_rtls_filter_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dcd_rtls_filter_free(filter: *mut DcdRtlsFilter) {
    if !filter.is_null() {
        drop(Box::from_raw(filter));
    }
}

/// Filter length, or 0 for a null handle.
///
/// # Safety
/// `filter` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dcd_rtls_filter_order(filter: *const DcdRtlsFilter) -> usize {
    filter.as_ref().map_or(0, |f| f.inner.config().order)
}

/// Processes one regressor `x[0..len]` and output sample `y`.
///
/// After a failure other than a length mismatch the filter state is
/// unspecified and the handle should be recreated.
///
/// # Safety
/// `filter` must be a live handle and `x` must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn dcd_rtls_filter_step(
    filter: *mut DcdRtlsFilter,
    x: *const f64,
    len: usize,
    y: f64,
) -> DcdRtlsStatus {
    guard(|| {
        let f = filter.as_mut().ok_or_else(|| null("filter"))?;
        if x.is_null() {
            return Err(null("x"));
        }
        let x = std::slice::from_raw_parts(x, len);
        f.inner.step(x, y).map_err(fail)
    })
}

/// Copies the current weights into `out[0..len]`; `len` must equal the order.
///
/// # Safety
/// `filter` must be a live handle and `out` must have room for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn dcd_rtls_filter_weights(filter: *const DcdRtlsFilter, out: *mut f64, len: usize) -> DcdRtlsStatus {
    guard(|| {
        let f = filter.as_ref().ok_or_else(|| null("filter"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let w = f.inner.weights();
        if len != w.len() {
            return Err(fail(Error::InvalidInput(format!("buffer has length {len}, expected {}", w.len()))));
        }
        ptr::copy_nonoverlapping(w.as_ptr(), out, len);
        Ok(())
    })
}

/// Operations spent by the most recent step.
///
/// # Safety
/// `filter` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dcd_rtls_filter_last_counts(
    filter: *const DcdRtlsFilter,
    out: *mut DcdRtlsOpCounts,
) -> DcdRtlsStatus {
    guard(|| {
        let f = filter.as_ref().ok_or_else(|| null("filter"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = f.inner.last_counts().total.into();
        Ok(())
    })
}

/// Predicted operations per iteration for order `l`, `n` DCD updates and an
/// `m`-bit step ladder.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dcd_rtls_predicted_ops(
    algo: DcdRtlsAlgo,
    l: u64,
    n: u64,
    m: u64,
    structured: bool,
    out: *mut DcdRtlsOpCounts,
) -> DcdRtlsStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let algo = match algo {
            DcdRtlsAlgo::DcdRtls => Algo::DcdRtls,
            DcdRtlsAlgo::Aip => Algo::Aip,
            DcdRtlsAlgo::XRtls => Algo::XRtls,
            DcdRtlsAlgo::KRtls => Algo::KRtls,
        };
        *out = predicted_ops(algo, l, n, m, structured).into();
        Ok(())
    })
}

/// `1 − 2/(tr{R⁻¹}ζ_max + (1 − η/ζ_min)² + 1)`.
#[no_mangle]
pub extern "C" fn dcd_rtls_stability_lambda_bound(trace_r_inv: f64, zeta_max: f64, zeta_min: f64, eta: f64) -> f64 {
    stability_lambda_bound(trace_r_inv, zeta_max, zeta_min, eta)
}

/// Closed-form predictions for a model given by a row-major `l × l` input
/// covariance `r`, system `h`, noise variances and forgetting factor.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DcdRtlsTheory {
    pub steady_state_msd: f64,
    pub noise_drive: f64,
    pub mean_convergence_rate: f64,
    pub s_bar_spectral_radius: f64,
    pub lambda_bound: f64,
    pub lambda_exact: f64,
}

/// Evaluates every closed-form prediction for one model.
///
/// # Safety
/// `r` must point to `l * l` doubles, `h` to `l` doubles and `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn dcd_rtls_theory(
    r: *const f64,
    h: *const f64,
    l: usize,
    eta: f64,
    xi: f64,
    lambda: f64,
    out: *mut DcdRtlsTheory,
) -> DcdRtlsStatus {
    guard(|| {
        if r.is_null() {
            return Err(null("r"));
        }
        if h.is_null() {
            return Err(null("h"));
        }
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let rows = std::slice::from_raw_parts(r, l * l);
        let h = std::slice::from_raw_parts(h, l).to_vec();
        let dense: Vec<Vec<f64>> = rows.chunks(l.max(1)).map(<[f64]>::to_vec).collect();
        let m = SymMatrix::from_rows(&dense)
            .and_then(|r| TheoryModel::new(r, h, eta, xi, lambda))
            .map_err(fail)?;
        *out = DcdRtlsTheory {
            steady_state_msd: m.steady_state_msd(),
            noise_drive: m.noise_drive_g(),
            mean_convergence_rate: m.mean_convergence_rate(),
            s_bar_spectral_radius: m.s_bar_spectral_radius(),
            lambda_bound: m.stability_lambda_bound(),
            lambda_exact: m.stability_lambda_exact(),
        };
        Ok(())
    })
}
