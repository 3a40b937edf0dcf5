//! Certified evaluation of
//!
//! ```text
//! B_n = (1/e) Σ_{k=1}^n (-1)^(n-k) S(n,k) k! 1F1(k+1; 2; 1)
//! ```
//!
//! against exact Bell numbers, together with the derivative polynomials
//! `d^n/dx^n e^{-e^x t} |_{x=0} = e^{-t} Σ_k c_k t^k` obtained two ways.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::bigmath::{abs_upper, add_upper, mul_upper, ApproxResult, ExactInt, ExactRat, PrecReal};
use crate::combinat::{
    bell_recurrence, factorial, partial_bell, shared_table, PartialBellInput, SeriesPoly,
};
use crate::error::{Error, Result};
use crate::specfun::{const_e, kummer_1f1};

const BOOK: u32 = 64;

/// Coefficients `c_1..c_n` of `d^n/dx^n e^{-e^x t}|_{x=0} = e^{-t} Σ c_k t^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivPoly {
    pub n: u32,
    /// `coeffs[k-1] = c_k`
    pub coeffs: Vec<ExactInt>,
}

impl DerivPoly {
    pub fn coeff(&self, k: u32) -> &ExactInt {
        &self.coeffs[k as usize - 1]
    }

    /// `Σ c_k t^k` at `t`.
    pub fn eval(&self, t: &PrecReal, precision: u32) -> Result<PrecReal> {
        // Horner on c_n t + c_{n-1}, …, then one more factor of t
        let mut acc = PrecReal::zero(precision);
        for c in self.coeffs.iter().rev() {
            acc = acc
                .add(&PrecReal::from_int(c, precision), precision)?
                .mul(t, precision)?;
        }
        Ok(acc)
    }

    /// `Σ |c_k| t^k` coefficients as doubles, for tail majorants.
    pub fn abs_coeffs_f64(&self) -> Vec<f64> {
        std::iter::once(0.0)
            .chain(
                self.coeffs
                    .iter()
                    .map(|c| PrecReal::from_int(&c.abs(), 64).to_f64()),
            )
            .collect()
    }
}

/// Faà di Bruno route: with `f = exp` and `g(x) = -e^x t`, every derivative
/// `g^(i)(0) = -t`, so `c_k t^k = B_{n,k}(-t, …, -t) = t^k B_{n,k}(-1, …, -1)`.
pub fn faadibruno_poly(n: u32) -> Result<DerivPoly> {
    if n == 0 {
        return Err(Error::Precondition(
            "derivative order must be at least 1".into(),
        ));
    }
    let minus_one = -ExactRat::one();
    let coeffs = (1..=n)
        .map(|k| {
            let v = partial_bell(&PartialBellInput::constant(n, k, minus_one.clone())?);
            if !v.is_integer() {
                return Err(Error::Precondition(format!(
                    "B_{{{n},{k}}}(-1,…) = {v} is not integral"
                )));
            }
            Ok(v.to_integer())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DerivPoly { n, coeffs })
}

/// Independent route: `d/dx [e^{-u} P(u)]` with `u = e^x t`, `u' = u`, maps
/// `P ↦ u (P' - P)`. Starting from `P = 1`, `n` steps give the coefficients.
pub fn deriv_oracle_poly(n: u32) -> Result<DerivPoly> {
    if n == 0 {
        return Err(Error::Precondition(
            "derivative order must be at least 1".into(),
        ));
    }
    // p[i] = coefficient of u^i
    let mut p: Vec<ExactInt> = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = vec![BigInt::zero(); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            // u·P' contributes i·c u^i, -u·P contributes -c u^(i+1)
            next[i] += c * i;
            next[i + 1] -= c;
        }
        p = next;
    }
    debug_assert!(p[0].is_zero());
    Ok(DerivPoly {
        n,
        coeffs: p[1..].to_vec(),
    })
}

/// True iff `n! [x^n] exp(e^{-x} - 1) = (-1)^n B_n` for every `1 ≤ n ≤ n_max`,
/// i.e. the `n`-th derivative of `e^{e^{-x}}` at 0 equals `e (-1)^n B_n`.
///
/// The series is built from `e^{-x} - 1` directly and exponentiated, without
/// reusing the `exp(e^x - 1)` coefficients.
pub fn alternating_genfunc_check(n_max: u32) -> bool {
    let inner = SeriesPoly::exp_minus_one(n_max as usize).reflect();
    let Ok(series) = inner.exp() else {
        return false;
    };
    let Ok(derivs) = series.egf_integers() else {
        return false;
    };
    let bell = bell_recurrence(n_max);
    (1..=n_max as usize).all(|n| {
        let signed = if n % 2 == 0 {
            bell.values[n].clone()
        } else {
            -bell.values[n].clone()
        };
        derivs[n] == signed
    })
}

/// Outcome of checking the formula at one `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremReport {
    pub n: u32,
    pub exact_bell: ExactInt,
    pub formula_value: ApproxResult,
    pub residual: PrecReal,
    pub error_budget: PrecReal,
    pub pass: bool,
    pub precision_used: u32,
}

/// A deliberately altered right-hand side, for negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corruption {
    /// Flip the sign of the `k`-th summand.
    FlipSign { k: u32 },
    /// Keep only the summands `k < m`.
    TruncateBelow { m: u32 },
}

fn ceil_log2(n: u32) -> u32 {
    32 - n.saturating_sub(1).leading_zeros()
}

/// `(1/e) Σ_{k=1}^n w_k · 1F1(k+1; 2; 1)` with exact integer weights.
///
/// Each `1F1` is evaluated so that `|w_k| ε_k ≤ 2^-(p + ⌈log2 n⌉ + 32)`, which
/// keeps the absolute error near `2^-p` despite the cancellation between
/// summands of size `S(n,k) k!`.
fn weighted_rhs(weights: &[(u32, ExactInt)], precision_bits: u32) -> Result<ApproxResult> {
    let n = weights.len().max(1) as u32;
    let margin = ceil_log2(n) + 32;
    let evals = weights
        .iter()
        .map(|(k, w)| {
            let kp1 = ExactRat::from_integer(BigInt::from(k + 1));
            let two = ExactRat::from_integer(BigInt::from(2));
            let wp = precision_bits + w.bits() as u32 + margin;
            kummer_1f1(&kp1, &two, &ExactRat::one(), wp)
        })
        .collect::<Result<Vec<_>>>()?;

    let max_top = weights
        .iter()
        .zip(&evals)
        .map(|((_, w), f)| w.bits() as i64 + f.value.top().unwrap_or(0))
        .max()
        .unwrap_or(0)
        .max(0) as u32;
    let sp = precision_bits + max_top + margin;

    let mut sum = PrecReal::zero(sp);
    let mut propagated = PrecReal::zero(BOOK);
    let mut magnitudes = PrecReal::zero(BOOK);
    let mut terms_used = 0;
    for ((_, w), f) in weights.iter().zip(&evals) {
        let product = f.value.mul_int(w, sp)?;
        sum = sum.add(&product, sp)?;
        let w_abs = PrecReal::from_int(&w.abs(), BOOK);
        let w_abs = add_upper(&w_abs, &w_abs.ulp(), BOOK);
        propagated = add_upper(&propagated, &mul_upper(&w_abs, &f.error_bound, BOOK), BOOK);
        magnitudes = add_upper(
            &magnitudes,
            &add_upper(&abs_upper(&product, BOOK), &abs_upper(&sum, BOOK), BOOK),
            BOOK,
        );
        terms_used += f.terms_used;
    }
    let rounding = mul_upper(&magnitudes, &PrecReal::pow2(1 - sp as i64, BOOK), BOOK);
    let sum_error = add_upper(&propagated, &rounding, BOOK);

    let e = const_e(sp + 8);
    let inv_e = PrecReal::one(sp).div(&e.value, sp)?;
    // |1/e - 1/ê| ≤ ε_e / (e ê) < ε_e, plus the division rounding
    let inv_e_error = add_upper(&e.error_bound, &inv_e.ulp(), BOOK);
    let value = sum.mul(&inv_e, sp)?;

    let inv_e_up = add_upper(&abs_upper(&inv_e, BOOK), &inv_e_error, BOOK);
    let budget = [
        mul_upper(&inv_e_up, &sum_error, BOOK),
        mul_upper(&abs_upper(&sum, BOOK), &inv_e_error, BOOK),
        value.ulp(),
    ]
    .iter()
    .fold(PrecReal::zero(BOOK), |acc, x| add_upper(&acc, x, BOOK));

    Ok(ApproxResult {
        value,
        error_bound: budget,
        terms_used,
    })
}

fn true_weights(n: u32) -> Vec<(u32, ExactInt)> {
    let table = shared_table(n);
    (1..=n)
        .map(|k| {
            let s = table.get(n, k).expect("table covers n");
            let w = s * factorial(k);
            (k, if (n - k).is_multiple_of(2) { w } else { -w })
        })
        .collect()
}

/// Right-hand side of the Bell formula at `n` with its propagated error bound.
pub fn theorem_rhs(n: u32, precision_bits: u32) -> Result<ApproxResult> {
    if n == 0 {
        return Err(Error::Precondition(
            "the formula is stated for n >= 1".into(),
        ));
    }
    weighted_rhs(&true_weights(n), precision_bits)
}

/// Right-hand side with one of the deliberate corruptions applied.
pub fn theorem_rhs_corrupted(
    n: u32,
    precision_bits: u32,
    corruption: Corruption,
) -> Result<ApproxResult> {
    if n == 0 {
        return Err(Error::Precondition(
            "the formula is stated for n >= 1".into(),
        ));
    }
    let weights: Vec<(u32, ExactInt)> = true_weights(n)
        .into_iter()
        .filter_map(|(k, w)| match corruption {
            Corruption::FlipSign { k: flip } if flip == k => Some((k, -w)),
            Corruption::TruncateBelow { m } if k >= m => None,
            _ => Some((k, w)),
        })
        .collect();
    weighted_rhs(&weights, precision_bits)
}

/// Compares a computed right-hand side with the exact `B_n`.
pub fn judge(
    n: u32,
    exact_bell: &ExactInt,
    rhs: ApproxResult,
    precision_used: u32,
) -> TheoremReport {
    let diff = (rhs.value.to_rational() - ExactRat::from_integer(exact_bell.clone())).abs();
    let residual = PrecReal::from_rational(&diff, BOOK);
    let residual = if residual.to_rational() < diff {
        add_upper(&residual, &residual.ulp(), BOOK)
    } else {
        residual
    };
    let pass = diff <= rhs.error_bound.to_rational();
    TheoremReport {
        n,
        exact_bell: exact_bell.clone(),
        error_budget: rhs.error_bound.clone(),
        formula_value: rhs,
        residual,
        pass,
        precision_used,
    }
}

fn check_one(n: u32, bell: &ExactInt, precision_bits: u32) -> Result<TheoremReport> {
    let report = judge(n, bell, theorem_rhs(n, precision_bits)?, precision_bits);
    if report.pass {
        return Ok(report);
    }
    // one retry at doubled precision separates precision shortfall from a false identity
    let p2 = precision_bits * 2;
    Ok(judge(n, bell, theorem_rhs(n, p2)?, p2))
}

/// One report per `n = 1..=n_max`; the `n` are evaluated in parallel and the
/// result is identical to a sequential run.
pub fn verify_theorem(n_max: u32, precision_bits: u32) -> Result<Vec<TheoremReport>> {
    if n_max == 0 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    let bell = bell_recurrence(n_max);
    (1..=n_max)
        .into_par_iter()
        .map(|n| check_one(n, &bell.values[n as usize], precision_bits))
        .collect()
}

/// Reports for a corrupted formula, for showing that the check can fail.
pub fn verify_corrupted(
    n_max: u32,
    precision_bits: u32,
    corruption: Corruption,
) -> Result<Vec<TheoremReport>> {
    let bell = bell_recurrence(n_max);
    (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let rhs = theorem_rhs_corrupted(n, precision_bits, corruption)?;
            Ok(judge(n, &bell.values[n as usize], rhs, precision_bits))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::stirling2_explicit;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn derivative_polys_small() {
        assert_eq!(faadibruno_poly(1).unwrap().coeffs, ints(&[-1]));
        assert_eq!(faadibruno_poly(3).unwrap().coeffs, ints(&[-1, 3, -1]));
        assert_eq!(faadibruno_poly(4).unwrap().coeffs, ints(&[-1, 7, -6, 1]));
        assert_eq!(deriv_oracle_poly(1).unwrap().coeffs, ints(&[-1]));
        assert_eq!(deriv_oracle_poly(2).unwrap().coeffs, ints(&[-1, 1]));
        assert_eq!(deriv_oracle_poly(6).unwrap(), faadibruno_poly(6).unwrap());
        assert!(faadibruno_poly(0).is_err());
    }

    #[test]
    fn derivative_poly_invariants() {
        for n in 1..=12u32 {
            let d = faadibruno_poly(n).unwrap();
            assert_eq!(*d.coeff(1), BigInt::from(-1));
            assert_eq!(
                *d.coeff(n),
                if n % 2 == 0 {
                    BigInt::one()
                } else {
                    -BigInt::one()
                }
            );
            for k in 1..=n {
                let s = stirling2_explicit(n, k);
                assert_eq!(*d.coeff(k), if k % 2 == 0 { s } else { -s });
            }
        }
    }

    #[test]
    fn deriv_poly_eval() {
        let d = deriv_oracle_poly(2).unwrap();
        let t = PrecReal::from_i64(3, 64);
        // -3 + 9
        assert_eq!(d.eval(&t, 64).unwrap(), PrecReal::from_i64(6, 64));
    }

    #[test]
    fn alternating_series() {
        assert!(alternating_genfunc_check(1));
        assert!(alternating_genfunc_check(4));
        assert!(alternating_genfunc_check(30));
    }

    #[test]
    fn rhs_small_n() {
        let one = theorem_rhs(1, 128).unwrap();
        assert!(one.contains(&ExactRat::one()));
        let r = judge(1, &BigInt::one(), one, 128);
        assert!(r.pass);
        assert!(r.residual <= PrecReal::pow2(2 - 128, 64));

        let two = theorem_rhs(2, 128).unwrap();
        assert!(two.contains(&ExactRat::from_integer(BigInt::from(2))));
        let five = theorem_rhs(5, 128).unwrap();
        assert!(five.contains(&ExactRat::from_integer(BigInt::from(52))));
        assert!(theorem_rhs(0, 64).is_err());
    }

    #[test]
    fn verify_small_range() {
        let reports = verify_theorem(12, 128).unwrap();
        assert_eq!(reports.len(), 12);
        assert!(reports.iter().all(|r| r.pass && r.precision_used == 128));
        assert_eq!(reports[4].exact_bell, BigInt::from(52));
    }

    #[test]
    fn corrupted_formula_fails() {
        let reports = verify_corrupted(5, 128, Corruption::FlipSign { k: 1 }).unwrap();
        assert!(reports.iter().any(|r| !r.pass));
        let reports = verify_corrupted(5, 128, Corruption::TruncateBelow { m: 2 }).unwrap();
        assert!(reports.iter().any(|r| !r.pass));
    }
}
