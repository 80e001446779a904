use std::ffi::CStr;
use std::ptr;

use eomconv_ffi::*;

fn last_error() -> String {
    let p = eom_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn coupling(k: f64) -> *mut EomCoupling {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { eom_coupling_from_ratio(k, 1.0, &mut h) }, EomStatus::Ok);
    h
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(eom_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn dark_instant_coefficients() {
    let k = 0.5;
    let h = coupling(k);
    let mut omega = 0.0;
    assert_eq!(unsafe { eom_coupling_describe(h, ptr::null_mut(), &mut omega, ptr::null_mut()) }, EomStatus::Ok);
    assert!((omega - (1.0 - k * k).sqrt()).abs() < 1e-15);

    let mut times = [0.0; 2];
    assert_eq!(unsafe { eom_dark_times(h, 2, times.as_mut_ptr()) }, EomStatus::Ok);
    assert!((times[1] - 3.0 * std::f64::consts::PI / omega).abs() < 1e-12);

    let mut c = EomCoefficients::default();
    assert_eq!(unsafe { eom_propagator_closed(h, times[0], &mut c) }, EomStatus::Ok);
    let g1 = (1.0 + k * k) / (1.0 - k * k);
    assert!((c.f[0].re + 1.0).abs() < 1e-12);
    assert!((c.g[0].re - g1).abs() < 1e-12);
    assert!((c.h[1].re + 2.0 * k / (1.0 - k * k)).abs() < 1e-12);

    let mut ode = EomCoefficients::default();
    assert_eq!(unsafe { eom_propagator_ode(h, times[0], 1e-10, &mut ode) }, EomStatus::Ok);
    for (a, b) in c.g.iter().zip(ode.g.iter()) {
        assert!((a.re - b.re).abs() < 1e-7 && (a.im - b.im).abs() < 1e-7);
    }
    unsafe { eom_coupling_free(h) };
}

#[test]
fn rates_and_factor() {
    let mut cqc = 0.0;
    assert_eq!(unsafe { eom_cqc_rate(0.5, &mut cqc) }, EomStatus::Ok);
    assert!((cqc - 1.0 / 0.5625).abs() < 1e-12);

    let mut max = 0.0;
    assert_eq!(unsafe { eom_eaqc_max_entangled(0.5, 0.0, &mut max) }, EomStatus::Ok);
    assert!((max - 2.25 * 2.25 / 0.5625).abs() < 1e-12);

    let kc = eom_critical_coupling();
    assert!((kc - (2.0 - 3f64.sqrt())).abs() < 1e-12);
    let (mut r, mut regime) = (0.0, EomRegime::Neutral);
    assert_eq!(unsafe { eom_eaf(0.1, std::f64::consts::FRAC_PI_2, &mut r, &mut regime) }, EomStatus::Ok);
    assert!(r < 1.0);
    assert_eq!(regime, EomRegime::Enhancing);
    assert_eq!(unsafe { eom_eaf(0.5, std::f64::consts::FRAC_PI_2, &mut r, ptr::null_mut()) }, EomStatus::Ok);
    assert!(r > 1.0);
}

#[test]
fn general_rate_agrees_with_eaqc() {
    let (k, theta, phase, amp): (f64, f64, f64, f64) = (0.3, 0.7, 0.4, 0.5);
    let h = coupling(k);
    let mut times = [0.0];
    unsafe { eom_dark_times(h, 1, times.as_mut_ptr()) };
    let mut c = EomCoefficients::default();
    unsafe { eom_propagator_closed(h, times[0], &mut c) };
    let a = EomComplex { re: amp * phase.cos(), im: amp * phase.sin() };
    let mut state = ptr::null_mut();
    assert_eq!(unsafe { eom_state_new(theta, a, a, &mut state) }, EomStatus::Ok);
    let (mut o, mut w) = (EomComplex::default(), EomComplex::default());
    assert_eq!(unsafe { eom_state_field_means(state, &mut o, &mut w) }, EomStatus::Ok);

    let (mut general, mut closed) = (0.0, 0.0);
    let dir = EomDirection::OpticalToMicrowave;
    assert_eq!(unsafe { eom_general_rate(h, &c, o, w, dir, &mut general) }, EomStatus::Ok);
    assert_eq!(unsafe { eom_eaqc_rate(k, theta, phase, amp, dir, &mut closed) }, EomStatus::Ok);
    assert!((general - closed).abs() < 1e-10 * closed.max(1.0), "{general} vs {closed}");
    unsafe {
        eom_state_free(state);
        eom_coupling_free(h);
    }
}

#[test]
fn state_entanglement() {
    let one = EomComplex { re: 1.0, im: 0.0 };
    let minus = EomComplex { re: -1.0, im: 0.0 };
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { eom_state_new(std::f64::consts::FRAC_PI_4, one, minus, &mut s) }, EomStatus::Ok);
    let (mut n, mut c) = (0.0, 0.0);
    assert_eq!(unsafe { eom_state_entanglement(s, &mut n, &mut c) }, EomStatus::Ok);
    assert!(n > 0.0 && c > 0.0 && c <= 1.0);
    unsafe { eom_state_free(s) };
}

#[test]
fn oracle_matches_closed_form_at_weak_coupling() {
    let h = coupling(0.2);
    let a = EomComplex { re: 0.5, im: 0.0 };
    let mut s = ptr::null_mut();
    unsafe { eom_state_new(std::f64::consts::FRAC_PI_4, a, a, &mut s) };
    let mut out = EomOracleResult::default();
    let mech = EomComplex { re: 0.3, im: 0.0 };
    let dir = EomDirection::OpticalToMicrowave;
    assert_eq!(unsafe { eom_oracle_conversion(h, s, mech, dir, 1, 14, &mut out) }, EomStatus::Ok);
    let mut expect = 0.0;
    unsafe { eom_eaqc_rate(0.2, std::f64::consts::FRAC_PI_4, 0.0, 0.5, dir, &mut expect) };
    assert!((out.rate - expect).abs() < 1e-4);
    assert!((out.mechanical_final.re + 0.3).abs() < 1e-4);
    assert!(out.max_boundary_population < 1e-6);

    assert_eq!(unsafe { eom_oracle_conversion(h, s, mech, dir, 1, 40, &mut out) }, EomStatus::ResourceLimit);
    assert!(!last_error().is_empty());
    unsafe {
        eom_state_free(s);
        eom_coupling_free(h);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { eom_coupling_new(2.0, 1.0, &mut h) }, EomStatus::UnsupportedRegime);
    assert!(h.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { eom_coupling_from_ratio(f64::NAN, 1.0, &mut h) }, EomStatus::InvalidParameter);

    let mut r = 0.0;
    assert_eq!(unsafe { eom_eaf(0.0, 0.0, &mut r, ptr::null_mut()) }, EomStatus::DegenerateRatio);
    assert_eq!(unsafe { eom_cqc_rate(0.5, ptr::null_mut()) }, EomStatus::NullPointer);
    assert!(last_error().contains("rate"));

    let mut c = EomCoefficients::default();
    assert_eq!(unsafe { eom_propagator_closed(ptr::null(), 1.0, &mut c) }, EomStatus::NullPointer);

    let zero = EomComplex::default();
    let mut s = ptr::null_mut();
    let status = unsafe { eom_state_new(-std::f64::consts::FRAC_PI_4, zero, zero, &mut s) };
    assert_ne!(status, EomStatus::Ok);
    assert!(s.is_null());
}

#[test]
fn freeing_null_is_harmless() {
    unsafe {
        eom_coupling_free(ptr::null_mut());
        eom_state_free(ptr::null_mut());
    }
}
