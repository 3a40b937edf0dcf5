//! Generalized hypergeometric series `pFq` at exact rational parameters.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::accum::{geometric_tail, refine_to, FloatSum};
use crate::bigmath::{abs_upper, rat_to_prec, ApproxResult, ExactRat, PrecReal};
use crate::error::{Error, Result};

/// `(a)_n = a (a+1) ⋯ (a+n-1)`, with `(a)_0 = 1`.
pub fn rising_factorial(a: &ExactRat, n: u32) -> ExactRat {
    let mut acc = ExactRat::one();
    let mut factor = a.clone();
    for _ in 0..n {
        acc *= &factor;
        factor += ExactRat::one();
    }
    acc
}

/// Parameters of `pFq(a_1..a_p; b_1..b_q; x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypParams {
    upper: Vec<ExactRat>,
    lower: Vec<ExactRat>,
    argument: ExactRat,
}

impl HypParams {
    pub fn new(upper: Vec<ExactRat>, lower: Vec<ExactRat>, argument: ExactRat) -> Result<Self> {
        if let Some(b) = lower.iter().find(|b| b.is_integer() && !b.is_positive()) {
            return Err(Error::Domain(format!(
                "lower parameter {b} is a nonpositive integer"
            )));
        }
        Ok(HypParams {
            upper,
            lower,
            argument,
        })
    }

    pub fn upper(&self) -> &[ExactRat] {
        &self.upper
    }

    pub fn lower(&self) -> &[ExactRat] {
        &self.lower
    }

    pub fn argument(&self) -> &ExactRat {
        &self.argument
    }

    /// `t_{n+1} / t_n = Π(a_i+n) / Π(b_j+n) · x/(n+1)`.
    fn ratio(&self, n: usize) -> ExactRat {
        let n_q = ExactRat::from_integer(BigInt::from(n));
        let mut num = self.argument.clone();
        for a in &self.upper {
            num *= a + &n_q;
        }
        let mut den = ExactRat::from_integer(BigInt::from(n + 1));
        for b in &self.lower {
            den *= b + &n_q;
        }
        num / den
    }

    /// An upper bound on `|t_{m+1}/t_m|` over all `m ≥ n`, if one is available.
    ///
    /// Uses `|a+m| ≤ m+|a|` and `|b+m| ≥ m-|b|`; each numerator is paired with
    /// a denominator, and `(m+A)/(m+C)` is monotone in `m`, so its supremum is
    /// either its value at `n` or its limit 1.
    fn sup_ratio(&self, n: usize) -> Option<ExactRat> {
        let n_q = ExactRat::from_integer(BigInt::from(n));
        let mut dens: Vec<ExactRat> = self.lower.iter().map(|b| &n_q - b.abs()).collect();
        dens.push(&n_q + ExactRat::one());
        if self.upper.len() > dens.len() || dens.iter().any(|d| !d.is_positive()) {
            return None;
        }
        let one = ExactRat::one();
        let mut bound = self.argument.abs();
        for (i, d) in dens.iter().enumerate() {
            match self.upper.get(i) {
                Some(a) => {
                    let f = (&n_q + a.abs()) / d;
                    if f > one {
                        bound *= f;
                    }
                }
                None => bound /= d,
            }
        }
        Some(bound)
    }
}

/// Tuning knobs for series summation.
#[derive(Clone, Debug)]
pub struct SeriesOptions {
    /// Give up with a divergence error after this many terms.
    pub max_terms: usize,
    /// Terms stay exact rationals until numerator or denominator exceeds
    /// this multiple of the working precision in bits.
    pub exact_size_factor: u32,
    /// Guard bits on top of the requested precision.
    pub guard_bits: u32,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions {
            max_terms: 100_000,
            exact_size_factor: 4,
            guard_bits: 32,
        }
    }
}

/// `pFq(a; b; x)` with `|value - true sum| ≤ error_bound ≤ eps`.
pub fn hyper_pfq(params: &HypParams, precision_bits: u32, eps: &PrecReal) -> Result<ApproxResult> {
    hyper_pfq_with(params, precision_bits, eps, &SeriesOptions::default())
}

pub fn hyper_pfq_with(
    params: &HypParams,
    precision_bits: u32,
    eps: &PrecReal,
    opts: &SeriesOptions,
) -> Result<ApproxResult> {
    refine_to(precision_bits, eps, opts.guard_bits, |wp| {
        sum_series(params, wp, eps, opts)
    })
}

fn sum_series(
    params: &HypParams,
    wp: u32,
    eps: &PrecReal,
    opts: &SeriesOptions,
) -> Result<ApproxResult> {
    let quarter_eps = eps.to_rational() / ExactRat::from_integer(BigInt::from(4));
    let half = ExactRat::new(BigInt::one(), BigInt::from(2));
    let size_limit = u64::from(opts.exact_size_factor) * u64::from(wp);

    let mut term = ExactRat::one();
    let mut sum = ExactRat::zero();
    let mut n = 0usize;
    // exact phase
    loop {
        if n >= opts.max_terms {
            return Err(Error::Divergence { terms: n });
        }
        if term.is_zero() {
            return Ok(rat_to_prec(&sum, wp)).map(|mut r| {
                r.terms_used = n;
                r
            });
        }
        if term.abs() < quarter_eps && params.sup_ratio(n).is_some_and(|u| u <= half) {
            let mut r = rat_to_prec(&sum, wp);
            let tail = geometric_tail(&abs_upper(&PrecReal::from_rational(&term.abs(), 64), 64));
            r.error_bound = crate::bigmath::add_upper(&r.error_bound, &tail, 64);
            r.terms_used = n;
            return Ok(r);
        }
        sum += &term;
        term *= params.ratio(n);
        n += 1;
        let too_big = |q: &ExactRat| q.numer().bits().max(q.denom().bits()) > size_limit;
        if too_big(&term) || too_big(&sum) {
            break;
        }
    }

    // floating phase
    let start = rat_to_prec(&sum, wp);
    let first = rat_to_prec(&term, wp);
    let mut acc = FloatSum::new(wp, start.value, start.error_bound, first.value, 1);
    loop {
        if n >= opts.max_terms {
            return Err(Error::Divergence { terms: n });
        }
        if acc.term.is_zero() {
            return Ok(acc.finish(PrecReal::zero(64), n));
        }
        let t_up = acc.term_upper();
        if t_up.to_rational() < quarter_eps && params.sup_ratio(n).is_some_and(|u| u <= half) {
            return Ok(acc.finish(geometric_tail(&t_up), n));
        }
        acc.accumulate()?;
        let ratio = PrecReal::from_rational(&params.ratio(n), wp);
        acc.advance(2, |t, wp| t.mul(&ratio, wp))?;
        n += 1;
    }
}

/// Kummer's `1F1(a; b; z)` to absolute accuracy `2^-precision_bits`.
pub fn kummer_1f1(
    a: &ExactRat,
    b: &ExactRat,
    z: &ExactRat,
    precision_bits: u32,
) -> Result<ApproxResult> {
    let params = HypParams::new(vec![a.clone()], vec![b.clone()], z.clone())?;
    hyper_pfq(
        &params,
        precision_bits,
        &PrecReal::pow2(-(precision_bits as i64), 64),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> ExactRat {
        ExactRat::new(BigInt::from(n), BigInt::from(d))
    }

    fn eps(p: u32) -> PrecReal {
        PrecReal::pow2(-(p as i64), 64)
    }

    // Σ_{n<terms} Π(a_i)_n / Π(b_j)_n · x^n/n!, each Pochhammer product kept separately
    fn partial_sum(params: &HypParams, terms: usize) -> ExactRat {
        let mut s = ExactRat::zero();
        let mut uppers = vec![ExactRat::one(); params.upper.len()];
        let mut lowers = vec![ExactRat::one(); params.lower.len()];
        let mut power = ExactRat::one();
        let mut fact = ExactRat::one();
        for n in 0..terms {
            let num: ExactRat = uppers.iter().product::<ExactRat>() * &power;
            let den: ExactRat = lowers.iter().product::<ExactRat>() * &fact;
            s += num / den;
            let n_q = r(n as i64, 1);
            for (u, a) in uppers.iter_mut().zip(&params.upper) {
                *u *= a + &n_q;
            }
            for (l, b) in lowers.iter_mut().zip(&params.lower) {
                *l *= b + &n_q;
            }
            power *= &params.argument;
            fact *= r(n as i64 + 1, 1);
        }
        s
    }

    #[test]
    fn rising_factorial_values() {
        assert_eq!(rising_factorial(&r(7, 3), 0), r(1, 1));
        assert_eq!(rising_factorial(&r(1, 1), 5), r(120, 1));
        assert_eq!(rising_factorial(&r(3, 1), 4), r(360, 1));
        assert_eq!(rising_factorial(&r(-2, 1), 3), r(0, 1));
        assert_eq!(rising_factorial(&r(1, 2), 2), r(3, 4));
    }

    #[test]
    fn parameter_cancellation_gives_e() {
        let v = kummer_1f1(&r(2, 1), &r(2, 1), &r(1, 1), 128).unwrap();
        assert!(v.error_bound <= eps(128));
        assert!(
            crate::bigmath::to_decimal(&v.value, 30).starts_with("2.71828182845904523536028747135")
        );
    }

    #[test]
    fn spot_values_against_partial_sums() {
        let cases = [
            (vec![r(1, 1)], vec![r(2, 1)], r(1, 1)),
            (vec![r(3, 1)], vec![r(2, 1)], r(1, 1)),
            (vec![r(4, 1)], vec![r(2, 1)], r(1, 1)),
            (vec![r(1, 1)], vec![r(1, 1), r(2, 1)], r(1, 1)),
            (vec![r(1, 2)], vec![r(5, 3)], r(-7, 2)),
        ];
        for (a, b, x) in cases {
            let params = HypParams::new(a, b, x).unwrap();
            let v = hyper_pfq(&params, 128, &eps(128)).unwrap();
            // the oracle's own truncation error is far below 2^-300
            let oracle = partial_sum(&params, 150);
            let d = (v.value.to_rational() - &oracle).abs();
            assert!(
                d <= v.error_bound.to_rational()
                    + ExactRat::new(BigInt::one(), BigInt::one() << 300usize)
            );
        }
        let v = hyper_pfq(
            &HypParams::new(vec![r(3, 1)], vec![r(2, 1)], r(1, 1)).unwrap(),
            64,
            &eps(64),
        )
        .unwrap();
        assert!((v.value.to_f64() - 4.077422742688568).abs() < 1e-14);
        let v = kummer_1f1(&r(4, 1), &r(2, 1), &r(1, 1), 64).unwrap();
        assert!((v.value.to_f64() - 5.889610628327931).abs() < 1e-14);
    }

    #[test]
    fn terminating_series_is_exact() {
        // 1F1(-3; 2; 1) = 1 - 3/2 + 3/6·... is a polynomial
        let params = HypParams::new(vec![r(-3, 1)], vec![r(2, 1)], r(1, 1)).unwrap();
        let v = hyper_pfq(&params, 64, &eps(64)).unwrap();
        assert!(v.contains(&partial_sum(&params, 10)));
        assert!(v.error_bound <= v.value.ulp());
        assert_eq!(v.terms_used, 4);
    }

    #[test]
    fn domain_and_divergence_errors() {
        assert!(matches!(
            HypParams::new(vec![r(1, 1)], vec![r(-2, 1)], r(1, 1)),
            Err(Error::Domain(_))
        ));
        assert!(HypParams::new(vec![], vec![r(0, 1)], r(1, 1)).is_err());
        // 2F0 never settles
        let params = HypParams::new(vec![r(1, 1), r(1, 1)], vec![], r(1, 1)).unwrap();
        let opts = SeriesOptions {
            max_terms: 500,
            ..SeriesOptions::default()
        };
        assert!(matches!(
            hyper_pfq_with(&params, 64, &eps(64), &opts),
            Err(Error::Divergence { .. })
        ));
    }

    #[test]
    fn zero_argument() {
        let params = HypParams::new(vec![r(5, 1)], vec![r(3, 7)], r(0, 1)).unwrap();
        let v = hyper_pfq(&params, 64, &eps(64)).unwrap();
        assert_eq!(v.value, PrecReal::one(64));
        assert!(v.error_bound.is_zero());
    }

    #[test]
    fn float_phase_engages_for_long_series() {
        // z = 30 needs ~100 terms; the exact phase hands over early at 8 bits of precision
        let params = HypParams::new(vec![r(1, 3)], vec![r(5, 2)], r(30, 1)).unwrap();
        let opts = SeriesOptions {
            exact_size_factor: 1,
            ..SeriesOptions::default()
        };
        let v = hyper_pfq_with(&params, 100, &eps(60), &opts).unwrap();
        let oracle = partial_sum(&params, 250);
        let d = (v.value.to_rational() - oracle).abs();
        assert!(d <= v.error_bound.to_rational());
        assert!(v.error_bound <= eps(60));
    }
}
