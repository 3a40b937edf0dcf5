use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::series::SeriesPoly;
use super::stirling::{binomial_row, StirlingTable};
use crate::bigmath::{ExactInt, ExactRat};
use crate::error::{Error, Result};

/// How a [`BellSequence`] was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BellMethod {
    /// `B_{n+1} = Σ_j C(n,j) B_j`
    Recurrence,
    /// `B_n = Σ_k S(n,k)`
    StirlingSum,
    /// `n! [x^n] exp(e^x - 1)`
    GenFunc,
}

impl BellMethod {
    pub fn name(self) -> &'static str {
        match self {
            BellMethod::Recurrence => "recurrence",
            BellMethod::StirlingSum => "stirling-sum",
            BellMethod::GenFunc => "genfunc",
        }
    }
}

/// `B_0..=B_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BellSequence {
    pub values: Vec<ExactInt>,
    pub method: BellMethod,
}

impl BellSequence {
    pub fn get(&self, n: usize) -> Option<&ExactInt> {
        self.values.get(n)
    }

    pub fn max_n(&self) -> usize {
        self.values.len() - 1
    }
}

/// `Σ_{k=1}^n S(n,k)`, and 1 for `n = 0`.
pub fn bell_stirling_sum(n: u32, table: &StirlingTable) -> Result<ExactInt> {
    let row = table.row(n)?;
    if n == 0 {
        return Ok(BigInt::one());
    }
    Ok(row[1..].iter().sum())
}

pub fn bell_recurrence(max_n: u32) -> BellSequence {
    let mut values: Vec<ExactInt> = vec![BigInt::one()];
    for n in 0..max_n {
        let next = binomial_row(n)
            .iter()
            .zip(&values)
            .map(|(c, b)| c * b)
            .sum();
        values.push(next);
    }
    BellSequence {
        values,
        method: BellMethod::Recurrence,
    }
}

/// Bell numbers read off the exponential generating function `exp(e^x - 1)`.
pub fn genfunc_bell_coeffs(max_n: u32) -> BellSequence {
    let series = SeriesPoly::exp_minus_one(max_n as usize)
        .exp()
        .expect("e^x - 1 has no constant term");
    BellSequence {
        values: series
            .egf_integers()
            .expect("Bell generating function has integral EGF coefficients"),
        method: BellMethod::GenFunc,
    }
}

/// `n! [x^n] exp(e^{-x} - 1)` for `n ≤ N`, obtained from the `exp(e^x - 1)`
/// series under `x → -x`. Each entry equals `(-1)^n B_n`.
pub fn genfunc_bell_alternating(max_n: u32) -> Vec<ExactInt> {
    let series = SeriesPoly::exp_minus_one(max_n as usize)
        .exp()
        .expect("e^x - 1 has no constant term");
    series
        .reflect()
        .egf_integers()
        .expect("integral EGF coefficients")
}

/// `S(n,k)` for `n ≤ N` from `(e^x - 1)^k / k!`.
pub fn genfunc_stirling_row(k: u32, max_n: u32) -> Result<Vec<ExactInt>> {
    if k > max_n {
        return Err(Error::OutOfRange {
            what: "k",
            index: k as usize,
            limit: max_n as usize,
        });
    }
    let inv_k_fact = ExactRat::new(BigInt::one(), super::factorial(k));
    let series = SeriesPoly::exp_minus_one(max_n as usize)
        .pow(k)
        .scale(&inv_k_fact);
    let row = series.egf_integers()?;
    debug_assert!(row[..k as usize].iter().all(Zero::is_zero));
    Ok(row)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn recurrence_small() {
        assert_eq!(bell_recurrence(5).values, ints(&[1, 1, 2, 5, 15, 52]));
        assert_eq!(bell_recurrence(2).values[2], BigInt::from(2));
        assert_eq!(bell_recurrence(0).values, ints(&[1]));
    }

    #[test]
    fn stirling_sum_values() {
        let t = StirlingTable::new(20);
        assert_eq!(bell_stirling_sum(0, &t).unwrap(), BigInt::from(1));
        assert_eq!(bell_stirling_sum(1, &t).unwrap(), BigInt::from(1));
        assert_eq!(bell_stirling_sum(5, &t).unwrap(), BigInt::from(52));
        assert_eq!(bell_stirling_sum(10, &t).unwrap(), BigInt::from(115_975));
        assert_eq!(
            bell_stirling_sum(20, &t).unwrap(),
            bell_recurrence(20).values[20]
        );
        assert!(matches!(
            bell_stirling_sum(21, &t),
            Err(Error::OutOfRange { .. })
        ));
    }

    // Bell triangle: each row starts with the last entry of the previous row
    fn bell_triangle(n: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::one()];
        let mut row = vec![BigInt::one()];
        for _ in 0..n {
            let mut next = vec![row.last().unwrap().clone()];
            for v in &row {
                let x = next.last().unwrap() + v;
                next.push(x);
            }
            out.push(next[0].clone());
            row = next;
        }
        out
    }

    #[test]
    fn bell_triangle_oracle() {
        assert_eq!(bell_recurrence(30).values, bell_triangle(30));
    }

    #[test]
    fn genfunc_values() {
        assert_eq!(genfunc_bell_coeffs(5).values, ints(&[1, 1, 2, 5, 15, 52]));
        assert_eq!(genfunc_bell_coeffs(0).values, ints(&[1]));
        let alt = genfunc_bell_alternating(5);
        assert_eq!(alt[3], BigInt::from(-5));
        assert_eq!(alt, ints(&[1, -1, 2, -5, 15, -52]));
    }

    #[test]
    fn genfunc_stirling_rows() {
        assert_eq!(genfunc_stirling_row(2, 4).unwrap(), ints(&[0, 0, 1, 3, 7]));
        assert_eq!(genfunc_stirling_row(0, 3).unwrap(), ints(&[1, 0, 0, 0]));
        assert_eq!(genfunc_stirling_row(1, 4).unwrap(), ints(&[0, 1, 1, 1, 1]));
        assert!(genfunc_stirling_row(5, 4).is_err());
    }

    #[test]
    fn row_sums_increase() {
        let t = StirlingTable::new(60);
        let sums: Vec<BigInt> = (1..=60)
            .map(|n| bell_stirling_sum(n, &t).unwrap())
            .collect();
        assert!(sums.windows(2).all(|w| w[0] < w[1]));
    }
}
