//! Truncated formal power series with exact rational coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::factorial;
use crate::bigmath::{ExactInt, ExactRat};
use crate::error::{Error, Result};

/// Coefficients `c_0..=c_N` of a power series truncated after `x^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesPoly {
    coeffs: Vec<ExactRat>,
}

impl SeriesPoly {
    pub fn zero(order: usize) -> Self {
        SeriesPoly {
            coeffs: vec![ExactRat::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = ExactRat::one();
        s
    }

    /// Pads or truncates `coeffs` to `order`.
    pub fn from_coeffs(mut coeffs: Vec<ExactRat>, order: usize) -> Self {
        coeffs.resize(order + 1, ExactRat::zero());
        SeriesPoly { coeffs }
    }

    /// The series `x` truncated at `order`.
    pub fn x(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = ExactRat::one();
        }
        s
    }

    /// `e^x - 1` truncated at `order`.
    pub fn exp_minus_one(order: usize) -> Self {
        let mut s = Self::zero(order);
        let mut inv_fact = ExactRat::one();
        for n in 1..=order {
            inv_fact /= ExactRat::from_integer(BigInt::from(n));
            s.coeffs[n] = inv_fact.clone();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ExactRat] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &ExactRat {
        &self.coeffs[n]
    }

    pub fn scale(&self, c: &ExactRat) -> Self {
        SeriesPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// The substitution `x → -x`: odd coefficients change sign.
    pub fn reflect(&self) -> Self {
        SeriesPoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| if n % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `n! · c_n` for every `n`, required to be integers.
    pub fn egf_integers(&self) -> Result<Vec<ExactInt>> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                let v = c * ExactRat::from_integer(factorial(n as u32));
                if v.is_integer() {
                    Ok(v.to_integer())
                } else {
                    Err(Error::Precondition(format!(
                        "coefficient {n} times {n}! is not an integer"
                    )))
                }
            })
            .collect()
    }

    /// `exp(s)` for a series with zero constant term.
    ///
    /// Uses `(exp s)' = s' · exp s`, i.e. `(n+1)·c_{n+1} = Σ_j (j+1)·s_{j+1}·c_{n-j}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Precondition(
                "series exponential needs a zero constant term".into(),
            ));
        }
        let order = self.order();
        let deriv: Vec<ExactRat> = (0..order)
            .map(|j| &self.coeffs[j + 1] * ExactRat::from_integer(BigInt::from(j + 1)))
            .collect();
        let mut c = vec![ExactRat::zero(); order + 1];
        c[0] = ExactRat::one();
        for n in 0..order {
            let mut acc = ExactRat::zero();
            for j in 0..=n {
                if !deriv[j].is_zero() {
                    acc += &deriv[j] * &c[n - j];
                }
            }
            c[n + 1] = acc / ExactRat::from_integer(BigInt::from(n + 1));
        }
        Ok(SeriesPoly { coeffs: c })
    }
}

/// Free-function form of [`SeriesPoly::exp`].
pub fn series_exp(s: &SeriesPoly) -> Result<SeriesPoly> {
    s.exp()
}

impl Add for &SeriesPoly {
    type Output = SeriesPoly;

    fn add(self, rhs: &SeriesPoly) -> SeriesPoly {
        let order = self.order().min(rhs.order());
        SeriesPoly {
            coeffs: (0..=order)
                .map(|n| &self.coeffs[n] + &rhs.coeffs[n])
                .collect(),
        }
    }
}

impl Sub for &SeriesPoly {
    type Output = SeriesPoly;

    fn sub(self, rhs: &SeriesPoly) -> SeriesPoly {
        self + &(-rhs)
    }
}

impl Neg for &SeriesPoly {
    type Output = SeriesPoly;

    fn neg(self) -> SeriesPoly {
        SeriesPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &SeriesPoly {
    type Output = SeriesPoly;

    /// Truncated Cauchy product; terms past the shorter order are dropped.
    fn mul(self, rhs: &SeriesPoly) -> SeriesPoly {
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![ExactRat::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        SeriesPoly { coeffs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> ExactRat {
        ExactRat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn exp_of_x() {
        let e = SeriesPoly::x(5).exp().unwrap();
        let want = [r(1, 1), r(1, 1), r(1, 2), r(1, 6), r(1, 24), r(1, 120)];
        assert_eq!(e.coeffs(), &want);
    }

    #[test]
    fn exp_of_zero() {
        let e = SeriesPoly::zero(4).exp().unwrap();
        assert_eq!(e, SeriesPoly::one(4));
    }

    #[test]
    fn exp_of_exp_minus_one_gives_bell() {
        let e = SeriesPoly::exp_minus_one(6).exp().unwrap();
        assert_eq!(e.coeff(4), &r(15, 24));
        let ints: Vec<i64> = e
            .egf_integers()
            .unwrap()
            .iter()
            .map(|v| i64::try_from(v).unwrap())
            .collect();
        assert_eq!(ints, [1, 1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn exp_rejects_constant_term() {
        assert!(SeriesPoly::one(3).exp().is_err());
    }

    #[test]
    fn exp_satisfies_derivative_recurrence() {
        let s = SeriesPoly::from_coeffs(
            vec![r(0, 1), r(2, 3), r(-1, 5), r(7, 2), r(0, 1), r(1, 9)],
            8,
        );
        let c = s.exp().unwrap();
        let n_max = c.order();
        for n in 0..n_max {
            let lhs = c.coeff(n + 1) * r(n as i64 + 1, 1);
            let rhs: ExactRat = (0..=n)
                .map(|j| {
                    let sj = if j < s.order() {
                        s.coeff(j + 1).clone()
                    } else {
                        ExactRat::zero()
                    };
                    sj * r(j as i64 + 1, 1) * c.coeff(n - j)
                })
                .sum();
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }

    #[test]
    fn truncation_keeps_order() {
        let a = SeriesPoly::exp_minus_one(6);
        assert_eq!((&a * &a).order(), 6);
        assert_eq!(a.pow(3).order(), 6);
        // (e^x - 1)^3 starts at x^3
        assert!(a.pow(3).coeffs()[..3].iter().all(Zero::is_zero));
        assert_eq!(a.reflect().reflect(), a);
        assert_eq!(&(&a - &a), &SeriesPoly::zero(6));
    }
}
