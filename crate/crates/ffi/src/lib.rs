//! C ABI over `eomconv`.
//!
//! Every fallible function returns an [`EomStatus`] and writes its result
//! through an out-pointer. On failure the out-pointer is left untouched and
//! [`eom_last_error_message`] describes what went wrong on the calling
//! thread. Objects are opaque handles created by `*_new` and released by the
//! matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;

use eomconv::conversion::{self, Direction, Regime};
use eomconv::dynamics::{self, PropagatorCoefficients, ToleranceSpec};
use eomconv::fock::{oracle_conversion, InitialState, OracleOptions};
use eomconv::model::CouplingConfig;
use eomconv::states::EntangledCoherentState;
use eomconv::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EomStatus {
    Ok = 0,
    InvalidParameter = 1,
    UnsupportedRegime = 2,
    IntegrationFailure = 3,
    DegenerateState = 4,
    InvalidOverlap = 5,
    UndefinedRate = 6,
    Precondition = 7,
    DegenerateRatio = 8,
    ResourceLimit = 9,
    Truncation = 10,
    InvalidChannel = 11,
    NullPointer = 12,
    Panic = 13,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EomDirection {
    OpticalToMicrowave = 0,
    MicrowaveToOptical = 1,
}

/// `Enhancing` when the factor is below 1: entanglement raises the rate.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EomRegime {
    Enhancing = 0,
    Suppressing = 1,
    Neutral = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EomComplex {
    pub re: f64,
    pub im: f64,
}

/// `b(t) = f1 b + f2 c_w + f3 c_o†`, `c_o(t) = g1 c_o + g2 c_w† + g3 b†`,
/// `c_w(t) = h1 c_w + h2 c_o† + h3 b`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EomCoefficients {
    pub time: f64,
    pub f: [EomComplex; 3],
    pub g: [EomComplex; 3],
    pub h: [EomComplex; 3],
}

/// Truncated-Fock-space conversion at a dark instant.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EomOracleResult {
    pub rate: f64,
    pub time: f64,
    /// `<b>` at the start and at the dark instant.
    pub mechanical_initial: EomComplex,
    pub mechanical_final: EomComplex,
    pub preparation_leakage: f64,
    pub max_boundary_population: f64,
    pub norm_drift: f64,
}

/// Opaque coupling configuration.
pub struct EomCoupling(CouplingConfig);

/// Opaque entangled coherent state.
pub struct EomState(EntangledCoherentState);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> EomStatus {
    match e {
        Error::InvalidChannel(_) => EomStatus::InvalidChannel,
        Error::InvalidParameter(_) => EomStatus::InvalidParameter,
        Error::UnsupportedRegime { .. } => EomStatus::UnsupportedRegime,
        Error::IntegrationFailure { .. } => EomStatus::IntegrationFailure,
        Error::DegenerateState { .. } => EomStatus::DegenerateState,
        Error::InvalidOverlap { .. } => EomStatus::InvalidOverlap,
        Error::UndefinedRate => EomStatus::UndefinedRate,
        Error::Precondition(_) => EomStatus::Precondition,
        Error::DegenerateRatio => EomStatus::DegenerateRatio,
        Error::ResourceLimit { .. } => EomStatus::ResourceLimit,
        Error::Truncation { .. } => EomStatus::Truncation,
    }
}

enum Fault {
    Library(Error),
    Null(&'static str),
}

impl From<Error> for Fault {
    fn from(e: Error) -> Self {
        Fault::Library(e)
    }
}

/// Runs `body`, recording failures and converting panics.
fn guard(body: impl FnOnce() -> Result<(), Fault>) -> EomStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => EomStatus::Ok,
        Ok(Err(Fault::Library(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fault::Null(what))) => {
            set_last_error(format!("null pointer passed for {what}"));
            EomStatus::NullPointer
        }
        Err(_) => {
            set_last_error("internal panic".to_owned());
            EomStatus::Panic
        }
    }
}

/// # Safety
/// `p` must be null or valid for reads.
unsafe fn borrow<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fault> {
    unsafe { p.as_ref() }.ok_or(Fault::Null(what))
}

/// # Safety
/// `p` must be null or valid for writes.
unsafe fn store<T>(p: *mut T, value: T, what: &'static str) -> Result<(), Fault> {
    if p.is_null() {
        return Err(Fault::Null(what));
    }
    unsafe { p.write(value) };
    Ok(())
}

fn to_complex(z: EomComplex) -> Complex64 {
    Complex64::new(z.re, z.im)
}

fn from_complex(z: Complex64) -> EomComplex {
    EomComplex { re: z.re, im: z.im }
}

fn to_coefficients(p: &PropagatorCoefficients) -> EomCoefficients {
    EomCoefficients { time: p.time, f: p.f.map(from_complex), g: p.g.map(from_complex), h: p.h.map(from_complex) }
}

fn from_coefficients(p: &EomCoefficients) -> PropagatorCoefficients {
    PropagatorCoefficients { time: p.time, f: p.f.map(to_complex), g: p.g.map(to_complex), h: p.h.map(to_complex) }
}

fn direction(d: EomDirection) -> Direction {
    match d {
        EomDirection::OpticalToMicrowave => Direction::OpticalToMicrowave,
        EomDirection::MicrowaveToOptical => Direction::MicrowaveToOptical,
    }
}

fn regime(r: Regime) -> EomRegime {
    match r {
        Regime::Enhancing => EomRegime::Enhancing,
        Regime::Suppressing => EomRegime::Suppressing,
        Regime::Neutral => EomRegime::Neutral,
    }
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn eom_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains a NUL"),
    };
    VERSION.as_ptr()
}

/// Message for the last failure on this thread, or null if none. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn eom_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Configuration from the two multiphoton couplings; requires `0 <= g_o < g_w`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn eom_coupling_new(
    optical_coupling: f64,
    microwave_coupling: f64,
    out: *mut *mut EomCoupling,
) -> EomStatus {
    guard(|| {
        let cfg = CouplingConfig::new(optical_coupling, microwave_coupling)?;
        unsafe { store(out, Box::into_raw(Box::new(EomCoupling(cfg))), "out") }
    })
}

/// Configuration from the ratio `k = g_o/g_w` and `g_w`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn eom_coupling_from_ratio(ratio: f64, microwave_coupling: f64, out: *mut *mut EomCoupling) -> EomStatus {
    guard(|| {
        let cfg = CouplingConfig::from_ratio(ratio, microwave_coupling)?;
        unsafe { store(out, Box::into_raw(Box::new(EomCoupling(cfg))), "out") }
    })
}

/// # Safety
/// `handle` must be null or come from `eom_coupling_new`/`eom_coupling_from_ratio`
/// and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn eom_coupling_free(handle: *mut EomCoupling) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Writes `k`, `Omega` and the period `2 pi / Omega`; any out-pointer may be null.
///
/// # Safety
/// `handle` must be a live coupling handle; non-null out-pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn eom_coupling_describe(
    handle: *const EomCoupling,
    ratio: *mut f64,
    omega: *mut f64,
    period: *mut f64,
) -> EomStatus {
    guard(|| {
        let cfg = unsafe { borrow(handle, "handle") }?.0;
        for (p, v) in [(ratio, cfg.ratio()), (omega, cfg.omega()), (period, cfg.period())] {
            if !p.is_null() {
                unsafe { p.write(v) };
            }
        }
        Ok(())
    })
}

/// Closed-form propagator coefficients at time `t`.
///
/// # Safety
/// `handle` must be a live coupling handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn eom_propagator_closed(handle: *const EomCoupling, t: f64, out: *mut EomCoefficients) -> EomStatus {
    guard(|| {
        let cfg = unsafe { borrow(handle, "handle") }?;
        let p = dynamics::closed_form_propagator(&cfg.0, t)?;
        unsafe { store(out, to_coefficients(&p), "out") }
    })
}

/// Coefficients by numerical integration with tolerance in `(0, 1e-4]`.
///
/// # Safety
/// `handle` must be a live coupling handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn eom_propagator_ode(
    handle: *const EomCoupling,
    t: f64,
    tolerance: f64,
    out: *mut EomCoefficients,
) -> EomStatus {
    guard(|| {
        let cfg = unsafe { borrow(handle, "handle") }?;
        let p = dynamics::ode_propagator(&cfg.0, t, ToleranceSpec::new(tolerance)?)?;
        unsafe { store(out, to_coefficients(&p), "out") }
    })
}

/// The first `count` dark instants `t_n = n pi / Omega`, `n = 1, 3, 5, ...`.
///
/// # Safety
/// `handle` must be a live coupling handle and `times` valid for `count` writes.
#[no_mangle]
pub unsafe extern "C" fn eom_dark_times(handle: *const EomCoupling, count: usize, times: *mut f64) -> EomStatus {
    guard(|| {
        let cfg = unsafe { borrow(handle, "handle") }?;
        if times.is_null() {
            return Err(Fault::Null("times"));
        }
        let records = dynamics::dark_mode_times(&cfg.0, count)?;
        let out = unsafe { std::slice::from_raw_parts_mut(times, count) };
        for (slot, rec) in out.iter_mut().zip(records) {
            *slot = rec.time;
        }
        Ok(())
    })
}

/// Rate at a dark instant from coefficients and arbitrary initial field means.
///
/// # Safety
/// `handle` and `coefficients` must be valid for reads, `rate` for writes.
#[no_mangle]
pub unsafe extern "C" fn eom_general_rate(
    handle: *const EomCoupling,
    coefficients: *const EomCoefficients,
    optical_mean: EomComplex,
    microwave_mean: EomComplex,
    dir: EomDirection,
    rate: *mut f64,
) -> EomStatus {
    guard(|| {
        let cfg = unsafe { borrow(handle, "handle") }?;
        let coeffs = from_coefficients(unsafe { borrow(coefficients, "coefficients") }?);
        let means = eomconv::states::FieldMeans::new(to_complex(optical_mean), to_complex(microwave_mean));
        let report =
            conversion::general_rate(&cfg.0, &coeffs, &means, direction(dir), dynamics::DEFAULT_DECOUPLING_TOL)?;
        unsafe { store(rate, report.rate, "rate") }
    })
}

/// # Safety
/// `rate` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn eom_cqc_rate(ratio: f64, rate: *mut f64) -> EomStatus {
    guard(|| unsafe { store(rate, conversion::cqc_rate(ratio)?, "rate") })
}

/// Rate for the symmetric entangled coherent state `alpha = beta = amplitude e^{i phase}`.
///
/// # Safety
/// `rate` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn eom_eaqc_rate(
    ratio: f64,
    theta: f64,
    phase: f64,
    amplitude: f64,
    dir: EomDirection,
    rate: *mut f64,
) -> EomStatus {
    guard(|| unsafe { store(rate, conversion::eaqc_rate(ratio, theta, phase, amplitude, direction(dir))?, "rate") })
}

/// # Safety
/// `rate` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn eom_eaqc_max_entangled(ratio: f64, phase: f64, rate: *mut f64) -> EomStatus {
    guard(|| unsafe { store(rate, conversion::eaqc_max_entangled(ratio, phase)?, "rate") })
}

/// Entanglement-affecting factor and its regime; `regime_out` may be null.
///
/// # Safety
/// `factor` must be valid for writes; `regime_out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn eom_eaf(ratio: f64, phase: f64, factor: *mut f64, regime_out: *mut EomRegime) -> EomStatus {
    guard(|| {
        let r = conversion::eaf(ratio, phase)?;
        unsafe { store(factor, r.factor, "factor") }?;
        if !regime_out.is_null() {
            unsafe { regime_out.write(regime(r.regime)) };
        }
        Ok(())
    })
}

/// Coupling ratio at which the quarter-phase factor equals 1.
#[no_mangle]
pub extern "C" fn eom_critical_coupling() -> f64 {
    conversion::critical_coupling()
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn eom_state_new(theta: f64, alpha: EomComplex, beta: EomComplex, out: *mut *mut EomState) -> EomStatus {
    guard(|| {
        let state = EntangledCoherentState::new(theta, to_complex(alpha), to_complex(beta));
        state.normalization()?;
        unsafe { store(out, Box::into_raw(Box::new(EomState(state))), "out") }
    })
}

/// # Safety
/// `handle` must be null or come from `eom_state_new` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn eom_state_free(handle: *mut EomState) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Normalization `N` and concurrence; either out-pointer may be null.
///
/// # Safety
/// `handle` must be a live state handle; non-null out-pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn eom_state_entanglement(
    handle: *const EomState,
    normalization: *mut f64,
    concurrence: *mut f64,
) -> EomStatus {
    guard(|| {
        let s = unsafe { borrow(handle, "handle") }?.0;
        let values = [(normalization, s.normalization()?), (concurrence, s.concurrence()?)];
        for (p, v) in values {
            if !p.is_null() {
                unsafe { p.write(v) };
            }
        }
        Ok(())
    })
}

/// Initial field means `<c_o(0)>` and `<c_w(0)>`.
///
/// # Safety
/// `handle` must be a live state handle; both out-pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn eom_state_field_means(
    handle: *const EomState,
    optical: *mut EomComplex,
    microwave: *mut EomComplex,
) -> EomStatus {
    guard(|| {
        let means = unsafe { borrow(handle, "handle") }?.0.field_means()?;
        if optical.is_null() || microwave.is_null() {
            return Err(Fault::Null("field mean output"));
        }
        unsafe {
            optical.write(from_complex(means.optical));
            microwave.write(from_complex(means.microwave));
        }
        Ok(())
    })
}

/// Brute-force conversion of `state` (with a coherent mechanical mode) to the
/// odd dark instant `dark_index`, per-mode cutoff `cutoff`.
///
/// # Safety
/// `coupling` and `state` must be live handles; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn eom_oracle_conversion(
    coupling: *const EomCoupling,
    state: *const EomState,
    mechanical: EomComplex,
    dir: EomDirection,
    dark_index: u32,
    cutoff: usize,
    out: *mut EomOracleResult,
) -> EomStatus {
    guard(|| {
        let cfg = unsafe { borrow(coupling, "coupling") }?;
        let st = unsafe { borrow(state, "state") }?;
        let initial = InitialState::Entangled { state: st.0, mechanical: to_complex(mechanical) };
        let options = OracleOptions { cutoff, ..OracleOptions::default() };
        let r = oracle_conversion(&cfg.0, &initial, direction(dir), dark_index, &options)?;
        let result = EomOracleResult {
            rate: r.report.rate,
            time: r.time,
            mechanical_initial: from_complex(r.initial_means[2]),
            mechanical_final: from_complex(r.final_means[2]),
            preparation_leakage: r.preparation_leakage,
            max_boundary_population: r.max_boundary_population,
            norm_drift: r.norm_drift,
        };
        unsafe { store(out, result, "out") }
    })
}
