use num_bigint::BigInt;

use bellcert::bigmath::{ExactRat, PrecReal};
use bellcert::quadrature::*;
use bellcert::specfun::bessel_kernel;
use bellcert::Result;

fn rat(n: i64, d: i64) -> ExactRat {
    ExactRat::new(BigInt::from(n), BigInt::from(d))
}

fn kernel_integrand(k: u32) -> impl Fn(&PrecReal, u32) -> Result<PrecReal> + Sync {
    move |t: &PrecReal, p: u32| {
        bessel_kernel(t, p)?
            .value
            .mul(&t.powi(k, p)?, p)?
            .mul(&t.neg().exp(p)?, p)
    }
}

fn kernel_majorant(k: u32) -> TailMajorant {
    let mut poly = vec![0.0; k as usize + 1];
    poly[k as usize] = 1.0;
    TailMajorant {
        scale: 1.0,
        sqrt_growth: 2.0,
        decay: 1.0,
        poly,
    }
}

#[test]
fn tail_soundness_doubling_t() {
    for k in [0u32, 3] {
        let maj = kernel_majorant(k);
        let cfg = QuadConfig::new(1e-10, default_truncation(k, 1.0), &maj, 128).unwrap();
        let a = integrate_semi_infinite(&kernel_integrand(k), &maj, &cfg).unwrap();
        let mut wide = cfg.clone();
        wide.truncation_point = cfg.truncation_point.mul_pow2(1).unwrap();
        wide.panel_count *= 2;
        let b = integrate_semi_infinite(&kernel_integrand(k), &maj, &wide).unwrap();
        let d = a.value.sub(&b.value, 160).unwrap().abs();
        assert!(d <= a.error_bound, "k = {k}");
    }
}

#[test]
fn refinement_soundness_halving_width() {
    let maj = kernel_majorant(2);
    let cfg = QuadConfig::new(1e-10, default_truncation(2, 1.0), &maj, 128).unwrap();
    let a = integrate_semi_infinite(&kernel_integrand(2), &maj, &cfg).unwrap();
    let mut fine = cfg.clone();
    fine.panel_count = a.terms_used * 2;
    let b = integrate_semi_infinite(&kernel_integrand(2), &maj, &fine).unwrap();
    let d = a.value.sub(&b.value, 160).unwrap().abs();
    assert!(
        d <= a.error_bound,
        "{} vs {} panels {} {}",
        d,
        a.error_bound,
        a.terms_used,
        b.terms_used
    );
}

#[test]
fn kernel_series_agrees_with_bessel_form() {
    for t in [rat(1, 4), rat(1, 1), rat(9, 1), rat(0, 1), rat(4, 1)] {
        let r = verify_k0_kernel_pointwise(&t, 128).unwrap();
        assert!(r.pass, "t = {t}");
    }
}

#[test]
fn spec_examples() {
    let r = verify_hk_integral(0, &rat(1, 1), 1e-10, 128).unwrap();
    assert!(r.pass && r.quadrature_bound_heuristic);
    assert!(verify_hk_integral(3, &rat(2, 1), 1e-10, 128).unwrap().pass);
    assert!(verify_final_identity(6, 1e-10, 128).unwrap().pass);
    assert!(verify_bell_integral(5, 1e-8, 128).unwrap().pass);
}

#[test]
fn hk_is_positive_and_decreasing_in_k() {
    let z = PrecReal::from_rational(&rat(3, 2), 64);
    let values: Vec<PrecReal> = (0..6)
        .map(|k| hk_direct(k, &z, 128).unwrap().value.value)
        .collect();
    assert!(values.iter().all(|v| v.signum() > 0));
    assert!(values.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn invalid_inputs() {
    assert!(verify_hk_integral(1, &rat(-1, 1), 1e-10, 128).is_err());
    assert!(verify_hk_integral(1, &rat(1, 1), 0.0, 128).is_err());
    assert!(verify_bell_integral(0, 1e-8, 128).is_err());
    assert!(verify_k0_kernel_pointwise(&rat(-1, 1), 64).is_err());
}

#[test]
fn concurrent_reports_match_sequential() {
    use rayon::prelude::*;
    let ks: Vec<u32> = (1..=4).collect();
    let par: Vec<QuadReport> = ks
        .par_iter()
        .map(|&k| verify_final_identity(k, 1e-10, 128).unwrap())
        .collect();
    let seq: Vec<QuadReport> = ks
        .iter()
        .map(|&k| verify_final_identity(k, 1e-10, 128).unwrap())
        .collect();
    assert_eq!(par, seq);
}
