use num_bigint::BigInt;

use super::accum::{geometric_tail, refine_to, FloatSum};
use crate::bigmath::{ApproxResult, PrecReal};
use crate::combinat::factorial;
use crate::error::{Error, Result};

// log2(e), rounded up
const LOG2_E: f64 = 1.442_695_040_888_963_5;

/// Modified Bessel function of the first kind `I_ν(z)` for integer `ν ≥ 0`
/// and real `z ≥ 0`, to absolute accuracy `2^-precision_bits`.
///
/// Sums `Σ (z/2)^(2k+ν) / (k! (ν+k)!)`; once the term ratio
/// `(z/2)² / ((k+1)(k+ν+1))` is at most 1/2 it only decreases, so the tail
/// is bounded by twice the first omitted term. `z` is taken as exact.
pub fn bessel_i(order: u32, z: &PrecReal, precision_bits: u32) -> Result<ApproxResult> {
    if z.is_negative() {
        return Err(Error::Domain("bessel_i needs z >= 0".into()));
    }
    if z.is_zero() {
        let v = if order == 0 {
            PrecReal::one(precision_bits)
        } else {
            PrecReal::zero(precision_bits)
        };
        return Ok(ApproxResult {
            terms_used: 1,
            ..ApproxResult::exact(v)
        });
    }
    // I_ν(z) ≤ e^z
    let magnitude_bits = (z.to_f64() * LOG2_E).ceil().max(0.0) as u32;
    let eps = PrecReal::pow2(-(precision_bits as i64), 64);
    refine_to(precision_bits, &eps, 32 + magnitude_bits, |wp| {
        bessel_series(order, z, wp, &eps)
    })
}

fn bessel_series(order: u32, z: &PrecReal, wp: u32, eps: &PrecReal) -> Result<ApproxResult> {
    let half_z = z.mul_pow2(-1)?;
    let h2 = half_z.mul(&half_z, wp)?;
    let first = half_z.powi(order, wp)?.div_int(&factorial(order), wp)?;
    let mut acc = FloatSum::new(
        wp,
        PrecReal::zero(wp),
        PrecReal::zero(64),
        first,
        u64::from(order) + 2,
    );
    let quarter_eps = eps.mul_pow2(-2)?;
    let half = PrecReal::pow2(-1, 64);
    let mut k = 0u64;
    loop {
        if k as usize >= super::MAX_TERMS {
            return Err(Error::Divergence { terms: k as usize });
        }
        let denom = BigInt::from((k + 1) * (k + u64::from(order) + 1));
        // inflate the rounded ratio so the comparison stays conservative
        let ratio = h2.div_int(&denom, wp)?;
        let ratio_up = ratio.add(&ratio.ulp().mul_pow2(2)?, wp)?;
        let t_up = acc.term_upper();
        if t_up < quarter_eps && ratio_up <= half {
            return Ok(acc.finish(geometric_tail(&t_up), k as usize));
        }
        acc.accumulate()?;
        acc.advance(3, |t, wp| t.mul(&ratio, wp))?;
        k += 1;
    }
}

/// `Σ t^j / (j! (j+1)!)`, which equals `I_1(2√t)/√t` for `t > 0` and 1 at `t = 0`.
///
/// Entire in `t`, so there is no singularity at the origin. The error bound is
/// at most `2^-precision_bits · max(1, e^(2√|t|))`, a relative accuracy of
/// about `precision_bits` bits.
pub fn bessel_kernel(t: &PrecReal, precision_bits: u32) -> Result<ApproxResult> {
    if t.is_zero() {
        return Ok(ApproxResult {
            terms_used: 1,
            ..ApproxResult::exact(PrecReal::one(precision_bits))
        });
    }
    let magnitude_bits = (2.0 * t.to_f64().abs().sqrt() * LOG2_E).ceil() as u32;
    let eps = PrecReal::pow2(magnitude_bits as i64 - precision_bits as i64, 64);
    refine_to(precision_bits, &eps, 32, |wp| kernel_series(t, wp, &eps))
}

fn kernel_series(t: &PrecReal, wp: u32, eps: &PrecReal) -> Result<ApproxResult> {
    let mut acc = FloatSum::new(
        wp,
        PrecReal::zero(wp),
        PrecReal::zero(64),
        PrecReal::one(wp),
        0,
    );
    let quarter_eps = eps.mul_pow2(-2)?;
    let half = PrecReal::pow2(-1, 64);
    let t_abs = t.abs();
    let mut j = 0u64;
    loop {
        if j as usize >= super::MAX_TERMS {
            return Err(Error::Divergence { terms: j as usize });
        }
        let denom = BigInt::from((j + 1) * (j + 2));
        // |t| / ((j+1)(j+2)) is exact enough to compare: decreasing in j
        let ratio_abs = t_abs.div_int(&denom, 64)?;
        let ratio_up = ratio_abs.add(&ratio_abs.ulp().mul_pow2(2)?, 64)?;
        let t_up = acc.term_upper();
        if t_up < quarter_eps && ratio_up <= half {
            return Ok(acc.finish(geometric_tail(&t_up), j as usize));
        }
        acc.accumulate()?;
        acc.advance(2, |term, wp| term.mul(t, wp)?.div_int(&denom, wp))?;
        j += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigmath::{to_decimal, ExactRat};
    use num_traits::{One, Signed};

    fn p(x: f64) -> PrecReal {
        PrecReal::from_f64(x, 64).unwrap()
    }

    // Σ_{k<terms} (z/2)^(2k+ν) / (k!(k+ν)!) exactly, for rational z
    fn partial_sum(order: u32, z: &ExactRat, terms: u32) -> ExactRat {
        let h = z / ExactRat::from_integer(BigInt::from(2));
        (0..terms)
            .map(|k| {
                h.pow((2 * k + order) as i32)
                    / ExactRat::from_integer(factorial(k) * factorial(k + order))
            })
            .sum()
    }

    #[test]
    fn i1_at_two() {
        let v = bessel_i(1, &p(2.0), 128).unwrap();
        assert!(to_decimal(&v.value, 13).starts_with("1.590636854637"));
        let oracle = partial_sum(1, &ExactRat::from_integer(BigInt::from(2)), 200);
        let d = (v.value.to_rational() - oracle).abs();
        assert!(d <= v.error_bound.to_rational());
        assert!(v.error_bound <= PrecReal::pow2(-128, 64));
    }

    #[test]
    fn values_at_zero() {
        assert!(bessel_i(1, &p(0.0), 64).unwrap().value.is_zero());
        assert_eq!(bessel_i(0, &p(0.0), 64).unwrap().value, PrecReal::one(64));
    }

    #[test]
    fn negative_argument_is_a_domain_error() {
        assert!(matches!(bessel_i(1, &p(-1.0), 64), Err(Error::Domain(_))));
    }

    #[test]
    fn larger_orders_and_arguments() {
        for (order, z) in [(0u32, 7.5f64), (3, 0.25), (5, 30.0)] {
            let v = bessel_i(order, &p(z), 96).unwrap();
            let q = p(z).to_rational();
            let oracle = partial_sum(order, &q, 300);
            let d = (v.value.to_rational() - oracle).abs();
            assert!(d <= v.error_bound.to_rational(), "I_{order}({z})");
        }
    }

    #[test]
    fn kernel_matches_bessel_composition() {
        for t in [0.25f64, 1.0, 9.0] {
            let k = bessel_kernel(&p(t), 128).unwrap();
            let two_sqrt_t = p(2.0 * t.sqrt());
            let i1 = bessel_i(1, &two_sqrt_t, 128).unwrap();
            let via_bessel = i1.value.div(&p(t.sqrt()), 160).unwrap();
            let d = (k.value.to_rational() - via_bessel.to_rational()).abs();
            let slack = ExactRat::new(BigInt::one(), BigInt::one() << 120usize);
            assert!(
                d <= k.error_bound.to_rational()
                    + i1.error_bound.to_rational() * ExactRat::from_integer(BigInt::from(4))
                    + slack
            );
        }
        assert_eq!(
            bessel_kernel(&PrecReal::zero(64), 64).unwrap().value,
            PrecReal::one(64)
        );
        assert!(bessel_kernel(&p(-4.0), 64).unwrap().error_bound > PrecReal::zero(64));
        assert!(!bessel_kernel(&p(400.0), 64).unwrap().value.is_zero());
    }
}
