//! Rising factorials, generalized hypergeometric series, Kummer's `1F1`,
//! the constant `e` and the modified Bessel function `I_ν` for integer
//! order, each returned with a rigorous bound on its truncation and
//! rounding error.

mod accum;
mod bessel;
mod hyper;

use num_bigint::BigInt;
use num_traits::One;

pub use bessel::{bessel_i, bessel_kernel};
pub use hyper::{
    hyper_pfq, hyper_pfq_with, kummer_1f1, rising_factorial, HypParams, SeriesOptions,
};

use crate::bigmath::{add_upper, rat_to_prec, ApproxResult, ExactRat, PrecReal};

pub(crate) const MAX_TERMS: usize = 100_000;

/// `e = Σ 1/k!` with `error_bound ≤ 2^-precision_bits`.
///
/// After `K` terms the tail is below `2/(K+1)!`.
pub fn const_e(precision_bits: u32) -> ApproxResult {
    let precision_bits = precision_bits.max(crate::bigmath::MIN_PRECISION);
    // Σ_{k≤K} 1/k! = P/K! with P_K = K·P_{K-1} + 1
    let target = BigInt::one() << (precision_bits as usize + 1);
    let mut p = BigInt::one();
    let mut k_fact = BigInt::one();
    let mut k = 0u64;
    loop {
        // 2/(K+1)! ≤ 2^-(p+1)  ⇔  (K+1)! ≥ 2^(p+2)
        if &k_fact * (k + 1) >= &target * 2 {
            break;
        }
        k += 1;
        k_fact *= k;
        p = p * k + 1;
    }
    let sum = rat_to_prec(&ExactRat::new(p, k_fact.clone()), precision_bits + 8);
    let tail = PrecReal::from_rational(&ExactRat::new(BigInt::from(2), k_fact * (k + 1)), 64);
    let tail = add_upper(&tail, &tail.ulp(), 64);
    ApproxResult {
        value: sum.value,
        error_bound: add_upper(&sum.error_bound, &tail, 64),
        terms_used: k as usize + 1,
    }
}
