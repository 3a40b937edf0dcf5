use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{integrate_semi_infinite, QuadConfig, TailMajorant};
use crate::bigmath::{
    abs_upper, add_upper, mul_upper, rat_to_prec, ApproxResult, ExactInt, ExactRat, PrecReal,
};
use crate::combinat::{bell_recurrence, factorial};
use crate::error::{Error, Result};
use crate::specfun::{bessel_i, bessel_kernel, const_e, hyper_pfq, kummer_1f1, HypParams};
use crate::theorem::faadibruno_poly;

const BOOK: u32 = 64;
// 2·log2(e), rounded up
const TWO_LOG2_E: f64 = 2.885_390_081_777_927;

/// Which identity a [`QuadReport`] checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IdentityId {
    /// `H_k(z) = 1/(k!(k+1)!) ∫ 1F2(1;k+1,k+2;t) t^k e^{-zt} dt`
    HkIntegral,
    /// `e^{1/z} = 1 + ∫ I_1(2√t)/√t e^{-zt} dt`
    K0Specialization,
    /// `1F2(1;1,2;t) = I_1(2√t)/√t` at one point
    K0KernelPointwise,
    /// `(-1)^n e B_n = ∫ I_1(2√t)/√t e^{-t} Σ (-t)^k S(n,k) dt`
    BellIntegral,
    /// `∫ I_1(2√t) t^(k-1/2) e^{-t} dt = k! 1F1(k+1;2;1)`
    FinalIdentity,
}

impl IdentityId {
    pub fn name(self) -> &'static str {
        match self {
            IdentityId::HkIntegral => "hk-integral",
            IdentityId::K0Specialization => "k0-specialization",
            IdentityId::K0KernelPointwise => "k0-kernel-pointwise",
            IdentityId::BellIntegral => "bell-integral",
            IdentityId::FinalIdentity => "final-identity",
        }
    }
}

/// Outcome of checking one identity: `pass = residual ≤ tolerance`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadReport {
    pub identity: IdentityId,
    pub params: Vec<(&'static str, String)>,
    pub lhs: ApproxResult,
    pub rhs: ApproxResult,
    pub residual: PrecReal,
    pub tolerance: PrecReal,
    pub pass: bool,
    /// True when a side carries the empirical quadrature estimate.
    pub quadrature_bound_heuristic: bool,
}

impl QuadReport {
    /// `(quadrature side, closed-form side)`.
    pub fn sides(&self) -> (&ApproxResult, &ApproxResult) {
        match self.identity {
            IdentityId::FinalIdentity => (&self.lhs, &self.rhs),
            _ => (&self.rhs, &self.lhs),
        }
    }

    fn new(
        identity: IdentityId,
        params: Vec<(&'static str, String)>,
        lhs: ApproxResult,
        rhs: ApproxResult,
        tolerance: PrecReal,
        quadrature_bound_heuristic: bool,
    ) -> Self {
        let diff = (lhs.value.to_rational() - rhs.value.to_rational()).abs();
        let residual = PrecReal::from_rational(&diff, BOOK);
        let residual = if diff.is_zero() {
            residual
        } else {
            add_upper(&residual, &residual.ulp(), BOOK)
        };
        QuadReport {
            identity,
            params,
            pass: residual <= tolerance,
            lhs,
            rhs,
            residual,
            tolerance,
            quadrature_bound_heuristic,
        }
    }
}

/// `H_k(z) = e^{1/z} - Σ_{m=0}^k z^{-m}/m!`.
#[derive(Clone, Debug, PartialEq)]
pub struct HkValue {
    pub k: u32,
    pub z: PrecReal,
    pub value: ApproxResult,
}

/// `max(80, 40/z·(k+2))`, the starting truncation point.
pub fn default_truncation(k: u32, z: f64) -> f64 {
    (40.0 / z * f64::from(k + 2)).max(80.0)
}

/// `H_k(z)` to absolute accuracy about `2^-precision_bits`, for `z > 0`.
pub fn hk_direct(k: u32, z: &PrecReal, precision_bits: u32) -> Result<HkValue> {
    if z.is_zero() || z.is_negative() {
        return Err(Error::Domain("H_k(z) needs z > 0".into()));
    }
    let y = z.to_rational().recip();
    let exp_y = exp_rational(&y, precision_bits + 2)?;
    let mut head = ExactRat::zero();
    let mut power = ExactRat::one();
    for m in 0..=k {
        head += &power / ExactRat::from_integer(factorial(m));
        power *= &y;
    }
    let wp = precision_bits + 8;
    let head = rat_to_prec(&head, wp + exp_y.value.top().unwrap_or(0).max(0) as u32);
    let value = exp_y.value.sub(&head.value, wp)?;
    let bound = add_upper(
        &add_upper(&exp_y.error_bound, &head.error_bound, BOOK),
        &value.ulp(),
        BOOK,
    );
    Ok(HkValue {
        k,
        z: z.clone(),
        value: ApproxResult {
            value,
            error_bound: bound,
            terms_used: exp_y.terms_used,
        },
    })
}

// e^y = 0F0(;;y) to absolute accuracy 2^-precision
fn exp_rational(y: &ExactRat, precision: u32) -> Result<ApproxResult> {
    let params = HypParams::new(vec![], vec![], y.clone())?;
    hyper_pfq(
        &params,
        precision,
        &PrecReal::pow2(-(precision as i64), BOOK),
    )
}

fn positive_z(z: &ExactRat) -> Result<f64> {
    if !z.is_positive() {
        return Err(Error::Domain("z must be positive".into()));
    }
    Ok(PrecReal::from_rational(z, 64).to_f64())
}

fn kernel_majorant(decay: f64, poly: Vec<f64>) -> TailMajorant {
    // Σ t^j/(j!(j+1)!) ≤ cosh(2√t) ≤ e^{2√t}
    TailMajorant {
        scale: 1.0,
        sqrt_growth: 2.0,
        decay,
        poly,
    }
}

fn monomial(k: u32) -> Vec<f64> {
    let mut poly = vec![0.0; k as usize + 1];
    poly[k as usize] = 1.0;
    poly
}

fn tolerance_prec(tolerance: f64) -> Result<PrecReal> {
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(Error::Precondition(
            "tolerance must be a positive number".into(),
        ));
    }
    PrecReal::from_f64(tolerance, BOOK)
}

/// Compares [`hk_direct`] with the quadrature of the `1F2` integrand.
pub fn verify_hk_integral(
    k: u32,
    z: &ExactRat,
    tolerance: f64,
    precision_bits: u32,
) -> Result<QuadReport> {
    let zf = positive_z(z)?;
    let tol = tolerance_prec(tolerance)?;
    let lhs = hk_direct(
        k,
        &PrecReal::from_rational(z, precision_bits.max(64) * 2),
        precision_bits,
    )?
    .value;
    // 1F2(1;k+1,k+2;t)/(k!(k+1)!) · t^k = Σ_{m≥k} t^m/(m!(m+1)!) ≤ the kernel
    let majorant = kernel_majorant(zf, vec![1.0]);
    let config = QuadConfig::new(
        tolerance,
        default_truncation(k, zf),
        &majorant,
        precision_bits,
    )?;
    let norm = factorial(k) * factorial(k + 1);
    let upper = vec![ExactRat::one()];
    let lower = vec![
        ExactRat::from_integer(BigInt::from(k + 1)),
        ExactRat::from_integer(BigInt::from(k + 2)),
    ];
    let integrand = |t: &PrecReal, wp: u32| -> Result<PrecReal> {
        let params = HypParams::new(upper.clone(), lower.clone(), t.to_rational())?;
        let magnitude_bits = (TWO_LOG2_E * t.to_f64().abs().sqrt()).ceil() as i64 + 1;
        let eps = PrecReal::pow2(magnitude_bits - wp as i64, BOOK);
        let f = hyper_pfq(&params, wp, &eps)?.value;
        let zt = PrecReal::from_rational(z, wp).mul(t, wp)?;
        f.mul(&t.powi(k, wp)?, wp)?
            .mul(&zt.neg().exp(wp)?, wp)?
            .div_int(&norm, wp)
    };
    let rhs = integrate_semi_infinite(&integrand, &majorant, &config)?;
    Ok(QuadReport::new(
        IdentityId::HkIntegral,
        vec![("k", k.to_string()), ("z", z.to_string())],
        lhs,
        rhs,
        tol,
        true,
    ))
}

/// `e^{1/z}` against `1 + ∫ I_1(2√t)/√t e^{-zt} dt`.
pub fn verify_k0_specialization(
    z: &ExactRat,
    tolerance: f64,
    precision_bits: u32,
) -> Result<QuadReport> {
    let zf = positive_z(z)?;
    let tol = tolerance_prec(tolerance)?;
    let lhs = exp_rational(&z.recip(), precision_bits)?;
    let majorant = kernel_majorant(zf, vec![1.0]);
    let config = QuadConfig::new(
        tolerance,
        default_truncation(0, zf),
        &majorant,
        precision_bits,
    )?;
    let integrand = |t: &PrecReal, wp: u32| -> Result<PrecReal> {
        let zt = PrecReal::from_rational(z, wp).mul(t, wp)?;
        bessel_kernel(t, wp)?.value.mul(&zt.neg().exp(wp)?, wp)
    };
    let integral = integrate_semi_infinite(&integrand, &majorant, &config)?;
    let rhs = ApproxResult {
        value: integral
            .value
            .add(&PrecReal::one(precision_bits), precision_bits + 8)?,
        error_bound: add_upper(&integral.error_bound, &integral.value.ulp(), BOOK),
        terms_used: integral.terms_used,
    };
    Ok(QuadReport::new(
        IdentityId::K0Specialization,
        vec![("k", "0".into()), ("z", z.to_string())],
        lhs,
        rhs,
        tol,
        true,
    ))
}

/// `1F2(1;1,2;t)` against `I_1(2√t)/√t` (its limit 1 at `t = 0`), for `t ≥ 0`.
///
/// The tolerance is the sum of both error bounds.
pub fn verify_k0_kernel_pointwise(t: &ExactRat, precision_bits: u32) -> Result<QuadReport> {
    if t.is_negative() {
        return Err(Error::Domain("the Bessel form needs t >= 0".into()));
    }
    let params = HypParams::new(
        vec![ExactRat::one()],
        vec![ExactRat::one(), ExactRat::from_integer(BigInt::from(2))],
        t.clone(),
    )?;
    let tf = PrecReal::from_rational(t, 64).to_f64();
    let magnitude_bits = (TWO_LOG2_E * tf.sqrt()).ceil() as i64 + 1;
    let eps = PrecReal::pow2(magnitude_bits - precision_bits as i64, BOOK);
    let lhs = hyper_pfq(&params, precision_bits, &eps)?;
    let rhs = if t.is_zero() {
        ApproxResult::exact(PrecReal::one(precision_bits))
    } else {
        bessel_form(t, tf, precision_bits)?
    };
    let tol = add_upper(&lhs.error_bound, &rhs.error_bound, BOOK);
    Ok(QuadReport::new(
        IdentityId::K0KernelPointwise,
        vec![("t", t.to_string())],
        lhs,
        rhs,
        tol,
        false,
    ))
}

// I_1(2s)/s with s = √t rounded; the perturbation of s is charged through
// |I_1'| ≤ I_0 ≤ e^x and |d(1/s)| ≤ ulp/s²
fn bessel_form(t: &ExactRat, tf: f64, precision_bits: u32) -> Result<ApproxResult> {
    let wp = precision_bits + 32 + (TWO_LOG2_E * tf.sqrt()).ceil() as u32;
    let s = PrecReal::from_rational(t, wp + 8).sqrt(wp)?;
    // from_rational and sqrt each cost at most one ulp of s
    let ds = s.ulp().mul_pow2(1)?;
    let x = s.mul_pow2(1)?;
    let i1 = bessel_i(1, &x, wp)?;
    let grow = PrecReal::from_f64((x.to_f64() + 1.0).exp() * 1.01, BOOK)?;
    let arg_err = mul_upper(&grow, &ds.mul_pow2(1)?, BOOK);
    let numer_err = add_upper(&i1.error_bound, &arg_err, BOOK);
    let s_low = s.sub(&ds, wp)?;
    let value = i1.value.div(&s, wp)?;
    let inv_s = upper_div(&PrecReal::one(BOOK), &s_low)?;
    let e1 = mul_upper(&numer_err, &inv_s, BOOK);
    let i_up = add_upper(&abs_upper(&i1.value, BOOK), &numer_err, BOOK);
    let e2 = mul_upper(
        &mul_upper(&i_up, &ds, BOOK),
        &mul_upper(&inv_s, &inv_s, BOOK),
        BOOK,
    );
    let bound = add_upper(&add_upper(&e1, &e2, BOOK), &value.ulp(), BOOK);
    Ok(ApproxResult {
        value: value.with_precision(precision_bits),
        error_bound: add_upper(&bound, &value.with_precision(precision_bits).ulp(), BOOK),
        terms_used: i1.terms_used,
    })
}

fn upper_div(a: &PrecReal, b: &PrecReal) -> Result<PrecReal> {
    let q = a.div(b, BOOK)?;
    Ok(add_upper(&q, &q.ulp(), BOOK))
}

/// `(-1)^n e B_n` from the exact Bell number against the quadrature of the
/// Faà di Bruno derivative polynomial times the kernel.
pub fn verify_bell_integral(n: u32, tolerance: f64, precision_bits: u32) -> Result<QuadReport> {
    let poly = faadibruno_poly(n)?;
    let tol = tolerance_prec(tolerance)?;
    let bell: ExactInt = bell_recurrence(n)
        .get(n as usize)
        .cloned()
        .expect("sequence covers n");
    let signed = if n.is_multiple_of(2) {
        bell.clone()
    } else {
        -bell.clone()
    };
    let extra = bell.bits() as u32 + 8;
    let e = const_e(precision_bits + extra);
    let value = e.value.mul_int(&signed, precision_bits + extra)?;
    let lhs = ApproxResult {
        error_bound: add_upper(
            &mul_upper(&e.error_bound, &PrecReal::from_int(&bell, BOOK), BOOK),
            &value.ulp(),
            BOOK,
        ),
        value,
        terms_used: e.terms_used,
    };
    let majorant = kernel_majorant(1.0, poly.abs_coeffs_f64());
    let config = QuadConfig::new(
        tolerance,
        default_truncation(n, 1.0),
        &majorant,
        precision_bits,
    )?;
    let integrand = |t: &PrecReal, wp: u32| -> Result<PrecReal> {
        let g = bessel_kernel(t, wp)?.value;
        g.mul(&t.neg().exp(wp)?, wp)?.mul(&poly.eval(t, wp)?, wp)
    };
    let rhs = integrate_semi_infinite(&integrand, &majorant, &config)?;
    Ok(QuadReport::new(
        IdentityId::BellIntegral,
        vec![("n", n.to_string())],
        lhs,
        rhs,
        tol,
        true,
    ))
}

/// `∫ I_1(2√t) t^(k-1/2) e^{-t} dt`, written as `∫ g(t) t^k e^{-t} dt` with the
/// kernel `g`, against `k!·1F1(k+1;2;1)`.
pub fn verify_final_identity(k: u32, tolerance: f64, precision_bits: u32) -> Result<QuadReport> {
    if k == 0 {
        return Err(Error::Precondition(
            "the final identity needs k >= 1".into(),
        ));
    }
    let tol = tolerance_prec(tolerance)?;
    let majorant = kernel_majorant(1.0, monomial(k));
    let config = QuadConfig::new(
        tolerance,
        default_truncation(k, 1.0),
        &majorant,
        precision_bits,
    )?;
    let integrand = |t: &PrecReal, wp: u32| -> Result<PrecReal> {
        let g = bessel_kernel(t, wp)?.value;
        g.mul(&t.powi(k, wp)?, wp)?.mul(&t.neg().exp(wp)?, wp)
    };
    let lhs = integrate_semi_infinite(&integrand, &majorant, &config)?;
    let k_fact = factorial(k);
    let extra = k_fact.bits() as u32 + 8;
    let f = kummer_1f1(
        &ExactRat::from_integer(BigInt::from(k + 1)),
        &ExactRat::from_integer(BigInt::from(2)),
        &ExactRat::one(),
        precision_bits + extra,
    )?;
    let value = f.value.mul_int(&k_fact, precision_bits + extra)?;
    let rhs = ApproxResult {
        error_bound: add_upper(
            &mul_upper(&f.error_bound, &PrecReal::from_int(&k_fact, BOOK), BOOK),
            &value.ulp(),
            BOOK,
        ),
        value,
        terms_used: f.terms_used,
    };
    Ok(QuadReport::new(
        IdentityId::FinalIdentity,
        vec![("k", k.to_string())],
        lhs,
        rhs,
        tol,
        true,
    ))
}
