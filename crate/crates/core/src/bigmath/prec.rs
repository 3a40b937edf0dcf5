//! Binary floating values with an explicit working precision.
//!
//! A [`PrecReal`] is `mantissa · 2^exponent`. Every rounding goes to the
//! nearest representable value, ties to even, so results are reproducible
//! bit-for-bit on any platform.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ExactRat;
use crate::error::{Error, Result};

/// Largest magnitude allowed for the binary exponent of the leading bit.
pub const MAX_EXPONENT: i64 = 1 << 31;

/// Smallest working precision accepted anywhere.
pub const MIN_PRECISION: u32 = 2;

#[derive(Clone, Debug)]
pub struct PrecReal {
    // Kept odd (or zero with exponent 0) so the representation of a value is unique.
    mantissa: BigInt,
    exponent: i64,
    precision: u32,
}

impl PrecReal {
    pub fn zero(precision: u32) -> Self {
        PrecReal {
            mantissa: BigInt::zero(),
            exponent: 0,
            precision: precision.max(MIN_PRECISION),
        }
    }

    pub fn one(precision: u32) -> Self {
        Self::from_int(&BigInt::one(), precision)
    }

    /// Rounds `mantissa · 2^exponent` to `precision` bits.
    pub fn from_parts(mantissa: BigInt, exponent: i64, precision: u32) -> Result<Self> {
        let precision = precision.max(MIN_PRECISION);
        let (m, e) = round_nearest_even(mantissa, exponent, precision);
        Self::canonical(m, e, precision)
    }

    pub fn from_int(n: &BigInt, precision: u32) -> Self {
        Self::from_parts(n.clone(), 0, precision).expect("integer exponent in range")
    }

    pub fn from_i64(n: i64, precision: u32) -> Self {
        Self::from_int(&BigInt::from(n), precision)
    }

    /// Exact conversion of a finite double (then rounded to `precision`).
    pub fn from_f64(x: f64, precision: u32) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::Domain(format!("non-finite value {x}")));
        }
        if x == 0.0 {
            return Ok(Self::zero(precision));
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Self::from_parts(BigInt::from(m) * sign, e, precision)
    }

    /// Correctly rounded quotient `num / den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, precision: u32) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        divide_scaled(num, 0, den, 0, precision.max(MIN_PRECISION))
    }

    pub fn from_rational(q: &ExactRat, precision: u32) -> Self {
        Self::from_ratio(q.numer(), q.denom(), precision).expect("rational exponent in range")
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    /// Exponent `t` with `|self| < 2^t`, `None` for zero.
    pub fn top(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exponent + self.mantissa.bits() as i64)
        }
    }

    /// Unit in the last place at this value's precision: `2^(top - precision)`.
    pub fn ulp(&self) -> PrecReal {
        match self.top() {
            None => PrecReal::zero(self.precision),
            Some(t) => PrecReal::pow2(t - self.precision as i64, self.precision),
        }
    }

    pub fn pow2(exponent: i64, precision: u32) -> PrecReal {
        PrecReal::from_parts(BigInt::one(), exponent, precision).expect("power of two in range")
    }

    pub fn with_precision(&self, precision: u32) -> PrecReal {
        round_to(self, precision)
    }

    pub fn abs(&self) -> PrecReal {
        PrecReal {
            mantissa: self.mantissa.abs(),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> PrecReal {
        PrecReal {
            mantissa: -self.mantissa.clone(),
            ..self.clone()
        }
    }

    /// Exact multiplication by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Result<PrecReal> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        Self::canonical(self.mantissa.clone(), self.exponent + k, self.precision)
    }

    /// Exact rational value.
    pub fn to_rational(&self) -> ExactRat {
        if self.exponent >= 0 {
            ExactRat::from_integer(&self.mantissa << self.exponent as usize)
        } else {
            ExactRat::new(
                self.mantissa.clone(),
                BigInt::one() << (-self.exponent) as usize,
            )
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = round_to(self, 53);
        let m = r.mantissa.to_f64().unwrap_or(f64::NAN);
        let e = r.exponent.clamp(-2200, 2200) as i32;
        // split so that neither factor under/overflows prematurely
        m * 2f64.powi(e / 2) * 2f64.powi(e - e / 2)
    }

    pub fn add(&self, rhs: &PrecReal, precision: u32) -> Result<PrecReal> {
        add_rounded(self, rhs, precision)
    }

    pub fn sub(&self, rhs: &PrecReal, precision: u32) -> Result<PrecReal> {
        add_rounded(self, &rhs.neg(), precision)
    }

    pub fn mul(&self, rhs: &PrecReal, precision: u32) -> Result<PrecReal> {
        if self.is_zero() || rhs.is_zero() {
            return Ok(PrecReal::zero(precision));
        }
        Self::from_parts(
            &self.mantissa * &rhs.mantissa,
            self.exponent + rhs.exponent,
            precision,
        )
    }

    pub fn div(&self, rhs: &PrecReal, precision: u32) -> Result<PrecReal> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        divide_scaled(
            &self.mantissa,
            self.exponent,
            &rhs.mantissa,
            rhs.exponent,
            precision.max(MIN_PRECISION),
        )
    }

    /// Product with a small exact integer.
    pub fn mul_int(&self, n: &BigInt, precision: u32) -> Result<PrecReal> {
        Self::from_parts(&self.mantissa * n, self.exponent, precision)
    }

    /// Quotient by a small exact integer.
    pub fn div_int(&self, n: &BigInt, precision: u32) -> Result<PrecReal> {
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        divide_scaled(
            &self.mantissa,
            self.exponent,
            n,
            0,
            precision.max(MIN_PRECISION),
        )
    }

    pub fn powi(&self, k: u32, precision: u32) -> Result<PrecReal> {
        let mut acc = PrecReal::one(precision);
        let mut base = self.clone();
        let mut k = k;
        let wp = precision + 2 * (32 - k.leading_zeros()) + 4;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, wp)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, wp)?;
            }
        }
        Ok(round_to(&acc, precision))
    }

    pub fn sqrt(&self, precision: u32) -> Result<PrecReal> {
        if self.is_negative() {
            return Err(Error::Domain("square root of a negative value".into()));
        }
        if self.is_zero() {
            return Ok(PrecReal::zero(precision));
        }
        let precision = precision.max(MIN_PRECISION);
        let bits = self.mantissa.bits() as i64;
        let mut shift = (2 * precision as i64 + 6 - bits).max(0);
        if (self.exponent - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let scaled: BigUint = self.mantissa.magnitude() << shift as usize;
        let mut root = scaled.sqrt();
        let mut exponent = (self.exponent - shift) / 2;
        if &root * &root != scaled {
            root = (root << 1usize) | BigUint::one();
            exponent -= 1;
        }
        Self::from_parts(BigInt::from(root), exponent, precision)
    }

    /// `e^self`, correct to within one ulp at `precision`.
    pub fn exp(&self, precision: u32) -> Result<PrecReal> {
        let precision = precision.max(MIN_PRECISION);
        let Some(top) = self.top() else {
            return Ok(PrecReal::one(precision));
        };
        if top > 40 {
            return Err(Error::ExponentOverflow);
        }
        // argument reduction x = r · 2^s with |r| < 2^-10, then square s times
        let squarings = (top + 10).max(0);
        let wp = precision + squarings as u32 + 24;
        let r = self.with_precision(wp).mul_pow2(-squarings)?;
        let mut sum = PrecReal::one(wp);
        let mut term = PrecReal::one(wp);
        let mut k = 1u64;
        loop {
            term = term.mul(&r, wp)?.div_int(&BigInt::from(k), wp)?;
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term, wp)?;
            if term.top().unwrap() < sum.top().unwrap_or(0) - wp as i64 - 2 {
                break;
            }
            k += 1;
        }
        for _ in 0..squarings {
            sum = sum.mul(&sum, wp)?;
        }
        Ok(round_to(&sum, precision))
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    fn canonical(mantissa: BigInt, exponent: i64, precision: u32) -> Result<Self> {
        if mantissa.is_zero() {
            return Ok(PrecReal::zero(precision));
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        let mantissa = mantissa >> tz as usize;
        let exponent = exponent + tz as i64;
        let top = exponent + mantissa.bits() as i64;
        if !(-MAX_EXPONENT..=MAX_EXPONENT).contains(&top) {
            return Err(Error::ExponentOverflow);
        }
        Ok(PrecReal {
            mantissa,
            exponent,
            precision,
        })
    }
}

/// Rounds to the nearest value with at most `precision` significant bits,
/// ties to even.
pub fn round_to(x: &PrecReal, precision: u32) -> PrecReal {
    let precision = precision.max(MIN_PRECISION);
    let (m, e) = round_nearest_even(x.mantissa.clone(), x.exponent, precision);
    // rounding only shrinks the mantissa, the leading exponent moves by at most one
    PrecReal::canonical(m, e, precision)
        .unwrap_or_else(|_| panic!("binary exponent overflow while rounding"))
}

fn round_nearest_even(mantissa: BigInt, exponent: i64, precision: u32) -> (BigInt, i64) {
    let bits = mantissa.bits();
    if bits <= precision as u64 {
        return (mantissa, exponent);
    }
    let shift = bits - precision as u64;
    let (sign, mag) = mantissa.into_parts();
    let mut q: BigUint = &mag >> shift as usize;
    let rem: BigUint = mag - (&q << shift as usize);
    let half = BigUint::one() << (shift - 1) as usize;
    match rem.cmp(&half) {
        Ordering::Greater => q += 1u32,
        Ordering::Equal if q.is_odd() => q += 1u32,
        _ => {}
    }
    let mut exponent = exponent + shift as i64;
    if q.bits() > precision as u64 {
        q >>= 1usize;
        exponent += 1;
    }
    (BigInt::from_biguint(sign, q), exponent)
}

fn add_rounded(a: &PrecReal, b: &PrecReal, precision: u32) -> Result<PrecReal> {
    let precision = precision.max(MIN_PRECISION);
    if a.is_zero() {
        return Ok(round_to(b, precision));
    }
    if b.is_zero() {
        return Ok(round_to(a, precision));
    }
    let (hi, lo) = if a.top() >= b.top() { (a, b) } else { (b, a) };
    let hi_top = hi.top().unwrap();
    // Below `floor` the small operand only acts as a sticky bit: replacing it by
    // any value of the same sign under 2^floor leaves the rounded sum unchanged.
    let floor = hi.exponent.min(hi_top - precision as i64 - 4) - 2;
    let (lo_m, lo_e) = if lo.top().unwrap() <= floor {
        (BigInt::from(lo.signum()), floor - 1)
    } else {
        (lo.mantissa.clone(), lo.exponent)
    };
    let e = hi.exponent.min(lo_e);
    let m = (&hi.mantissa << (hi.exponent - e) as usize) + (lo_m << (lo_e - e) as usize);
    PrecReal::from_parts(m, e, precision)
}

// Correctly rounded (na·2^ea) / (nb·2^eb).
fn divide_scaled(na: &BigInt, ea: i64, nb: &BigInt, eb: i64, precision: u32) -> Result<PrecReal> {
    if na.is_zero() {
        return Ok(PrecReal::zero(precision));
    }
    let shift = (precision as i64 + 3 + nb.bits() as i64 - na.bits() as i64).max(0);
    let num: BigUint = na.magnitude() << shift as usize;
    let (mut q, r) = num.div_rem(nb.magnitude());
    let mut exponent = ea - eb - shift;
    if !r.is_zero() {
        q = (q << 1usize) | BigUint::one();
        exponent -= 1;
    }
    let negative = na.is_negative() != nb.is_negative();
    let m = BigInt::from_biguint(if negative { Sign::Minus } else { Sign::Plus }, q);
    PrecReal::from_parts(m, exponent, precision)
}

impl PartialEq for PrecReal {
    fn eq(&self, other: &Self) -> bool {
        self.mantissa == other.mantissa && self.exponent == other.exponent
    }
}

impl Eq for PrecReal {}

impl PartialOrd for PrecReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PrecReal {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb || sa == 0 {
            return sa.cmp(&sb);
        }
        let (ta, tb) = (self.top().unwrap(), other.top().unwrap());
        if ta != tb {
            let by_magnitude = ta.cmp(&tb);
            return if sa > 0 {
                by_magnitude
            } else {
                by_magnitude.reverse()
            };
        }
        let e = self.exponent.min(other.exponent);
        let ma = &self.mantissa << (self.exponent - e) as usize;
        let mb = &other.mantissa << (other.exponent - e) as usize;
        ma.cmp(&mb)
    }
}

impl fmt::Display for PrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = super::decimal::faithful_digits(self.precision);
        f.write_str(&super::decimal::to_decimal(self, digits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> ExactRat {
        ExactRat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn zero_rounds_to_zero() {
        for p in [2, 3, 53, 1000] {
            assert!(round_to(&PrecReal::zero(64), p).is_zero());
        }
    }

    #[test]
    fn exact_values_survive_rounding() {
        let x = PrecReal::from_i64(0b1011_0000, 64);
        assert_eq!(round_to(&x, 4), x);
        assert_eq!(round_to(&x, 200), x);
    }

    #[test]
    fn ties_go_to_even() {
        // 0b1011 at 3 bits: tie between 0b101 and 0b110, even wins
        let x = PrecReal::from_i64(11, 64);
        assert_eq!(round_to(&x, 3), PrecReal::from_i64(12, 64));
        // 0b1001 at 3 bits: tie between 0b100 and 0b101
        let y = PrecReal::from_i64(9, 64);
        assert_eq!(round_to(&y, 3), PrecReal::from_i64(8, 64));
        // carry out of the top bit
        let z = PrecReal::from_i64(0b1111, 64);
        assert_eq!(round_to(&z, 3), PrecReal::from_i64(16, 64));
    }

    #[test]
    fn one_third_rounds_consistently() {
        let wide = PrecReal::from_rational(&rat(1, 3), 256);
        let narrow = round_to(&wide, 53);
        let direct = PrecReal::from_rational(&rat(1, 3), 53);
        assert_eq!(narrow, direct);
        assert_eq!(narrow.to_f64(), 1.0 / 3.0);
        let again = round_to(&PrecReal::from_rational(&rat(1, 3), 256), 53);
        assert_eq!(again.mantissa(), narrow.mantissa());
    }

    #[test]
    fn arithmetic_basics() {
        let p = 64;
        let a = PrecReal::from_f64(1.5, p).unwrap();
        let b = PrecReal::from_f64(-0.25, p).unwrap();
        assert_eq!(a.add(&b, p).unwrap().to_f64(), 1.25);
        assert_eq!(a.sub(&b, p).unwrap().to_f64(), 1.75);
        assert_eq!(a.mul(&b, p).unwrap().to_f64(), -0.375);
        assert_eq!(a.div(&b, p).unwrap().to_f64(), -6.0);
        assert_eq!(
            PrecReal::from_i64(2, p).sqrt(p).unwrap().to_f64(),
            2f64.sqrt()
        );
        assert_eq!(
            PrecReal::from_i64(49, p).sqrt(p).unwrap(),
            PrecReal::from_i64(7, p)
        );
        assert!(a.sub(&a, p).unwrap().is_zero());
    }

    #[test]
    fn tiny_addend_acts_as_sticky_bit() {
        let p = 10;
        let one = PrecReal::one(p);
        let tiny = PrecReal::pow2(-5000, p);
        let exact_sum = one.add(&tiny, 6000).unwrap();
        assert_eq!(one.add(&tiny, p).unwrap(), round_to(&exact_sum, p));
        // just above a tie: 1 + 2^-10 + tiny rounds up at 10 bits
        let tie = PrecReal::one(p).add(&PrecReal::pow2(-10, p), 20).unwrap();
        assert_eq!(
            tie.add(&tiny, p).unwrap(),
            PrecReal::one(p).add(&PrecReal::pow2(-9, p), p).unwrap()
        );
        assert_eq!(tie.sub(&tiny, p).unwrap(), PrecReal::one(p));
    }

    #[test]
    fn exp_matches_double() {
        for x in [-400.0, -3.5, -1.0, 0.0, 1e-9, 0.5, 1.0, 7.25] {
            let v = PrecReal::from_f64(x, 53).unwrap().exp(53).unwrap().to_f64();
            let want = f64::exp(x);
            assert!(
                ((v - want) / want).abs() < 4e-16,
                "exp({x}) = {v} vs {want}"
            );
        }
    }

    #[test]
    fn exp_of_one_is_e() {
        let e = PrecReal::one(200).exp(200).unwrap();
        let s = super::super::decimal::to_decimal(&e, 58);
        assert!(s.starts_with("2.71828182845904523536028747135266249775724709369995"));
    }

    #[test]
    fn ordering() {
        let p = 32;
        let xs: Vec<PrecReal> = [-3.0, -0.5, 0.0, 1e-30, 0.75, 2.0]
            .iter()
            .map(|&x| PrecReal::from_f64(x, p).unwrap())
            .collect();
        for w in xs.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn exponent_overflow_is_an_error() {
        let big = PrecReal::pow2(MAX_EXPONENT - 2, 8);
        assert_eq!(big.mul(&big, 8), Err(Error::ExponentOverflow));
    }
}
