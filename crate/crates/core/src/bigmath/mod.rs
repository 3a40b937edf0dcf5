//! Exact integers and rationals, plus a binary floating type with explicit
//! precision and results that carry a rigorous error bound.

pub mod decimal;
mod prec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

pub use decimal::{parse_rational, rational_string, to_decimal, to_decimal_upper};
pub use prec::{round_to, PrecReal, MAX_EXPONENT, MIN_PRECISION};

/// Unbounded signed integer.
pub type ExactInt = BigInt;

/// Rational in lowest terms with a positive denominator.
pub type ExactRat = BigRational;

/// An approximate value with a bound on its distance from the true quantity.
///
/// The true value lies in `[value - error_bound, value + error_bound]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxResult {
    pub value: PrecReal,
    pub error_bound: PrecReal,
    pub terms_used: usize,
}

impl ApproxResult {
    pub fn exact(value: PrecReal) -> Self {
        let p = value.precision();
        ApproxResult {
            value,
            error_bound: PrecReal::zero(p),
            terms_used: 0,
        }
    }

    /// Whether `q` lies inside the enclosure.
    pub fn contains(&self, q: &ExactRat) -> bool {
        let diff = (self.value.to_rational() - q).abs();
        diff <= self.error_bound.to_rational()
    }

    /// Whether the enclosures of `self` and `other` intersect.
    pub fn overlaps(&self, other: &ApproxResult) -> bool {
        let diff = (self.value.to_rational() - other.value.to_rational()).abs();
        diff <= self.error_bound.to_rational() + other.error_bound.to_rational()
    }
}

/// Nearest `precision`-bit value of `q`, with a bound of half an ulp
/// (zero when `q` is representable).
pub fn rat_to_prec(q: &ExactRat, precision: u32) -> ApproxResult {
    let value = PrecReal::from_rational(q, precision);
    let error_bound = if value.to_rational() == *q {
        PrecReal::zero(precision)
    } else {
        value.ulp().mul_pow2(-1).expect("half ulp in range")
    };
    ApproxResult {
        value,
        error_bound,
        terms_used: 0,
    }
}

/// Magnitude bound helper: `|x|` rounded up to `bits` significant bits.
pub(crate) fn abs_upper(x: &PrecReal, bits: u32) -> PrecReal {
    let r = x.abs().with_precision(bits);
    if r.to_rational() >= x.abs().to_rational() {
        r
    } else {
        r.add(&r.ulp(), bits).expect("in range")
    }
}

/// Sum of two nonnegative bounds, rounded up.
pub(crate) fn add_upper(a: &PrecReal, b: &PrecReal, bits: u32) -> PrecReal {
    let exact = a
        .add(b, a.precision().max(b.precision()) + 8)
        .expect("in range");
    let s = abs_upper(&exact, bits);
    s.add(&s.ulp(), bits).expect("in range")
}

/// Product of two nonnegative bounds, rounded up.
pub(crate) fn mul_upper(a: &PrecReal, b: &PrecReal, bits: u32) -> PrecReal {
    let p = a.mul(b, bits).expect("in range").abs();
    p.add(&p.ulp(), bits).expect("in range")
}
