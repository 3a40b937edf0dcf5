//! Gauss–Legendre nodes and weights at arbitrary precision.

use num_bigint::BigInt;

use crate::bigmath::PrecReal;
use crate::error::Result;

/// `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<PrecReal>,
    weights: Vec<PrecReal>,
}

impl GaussLegendre {
    /// Roots of `P_n` by Newton's method from the usual cosine guesses.
    pub fn new(n: usize, precision: u32) -> Result<Self> {
        assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
        let wp = precision + 16;
        let one = PrecReal::one(wp);
        let tiny = PrecReal::pow2(-(wp as i64) + 2, 64);
        let mut nodes = vec![PrecReal::zero(wp); n];
        let mut weights = vec![PrecReal::zero(wp); n];
        for i in 0..n.div_ceil(2) {
            let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut x = PrecReal::from_f64(guess, wp)?;
            let mut deriv = PrecReal::zero(wp);
            // the guess is good to a few bits; Newton doubles them until the step vanishes
            for _ in 0..64 {
                let (p, dp) = legendre_with_derivative(n, &x, wp)?;
                let step = p.div(&dp, wp)?;
                x = x.sub(&step, wp)?;
                deriv = dp;
                if step.abs() <= tiny {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, &x, wp)?;
            if !dp.is_zero() {
                deriv = dp;
            }
            let one_minus_x2 = one.sub(&x.mul(&x, wp)?, wp)?;
            let w = PrecReal::from_i64(2, wp)
                .div(&one_minus_x2.mul(&deriv.mul(&deriv, wp)?, wp)?, wp)?;
            nodes[i] = x.neg();
            weights[i] = w.clone();
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = PrecReal::zero(wp);
        }
        Ok(GaussLegendre {
            nodes: nodes.iter().map(|x| x.with_precision(precision)).collect(),
            weights: weights
                .iter()
                .map(|w| w.with_precision(precision))
                .collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[PrecReal] {
        &self.nodes
    }

    pub fn weights(&self) -> &[PrecReal] {
        &self.weights
    }
}

// (P_n(x), P_n'(x)) via (j+1) P_{j+1} = (2j+1) x P_j - j P_{j-1}
fn legendre_with_derivative(n: usize, x: &PrecReal, wp: u32) -> Result<(PrecReal, PrecReal)> {
    let mut p_prev = PrecReal::one(wp);
    let mut p = x.clone();
    for j in 1..n {
        let a = x.mul(&p, wp)?.mul_int(&BigInt::from(2 * j + 1), wp)?;
        let b = p_prev.mul_int(&BigInt::from(j), wp)?;
        let next = a.sub(&b, wp)?.div_int(&BigInt::from(j + 1), wp)?;
        p_prev = std::mem::replace(&mut p, next);
    }
    if n == 0 {
        return Ok((PrecReal::one(wp), PrecReal::zero(wp)));
    }
    // P_n' = n (x P_n - P_{n-1}) / (x² - 1)
    let x2m1 = x.mul(x, wp)?.sub(&PrecReal::one(wp), wp)?;
    let dp = x
        .mul(&p, wp)?
        .sub(&p_prev, wp)?
        .mul_int(&BigInt::from(n), wp)?
        .div(&x2m1, wp)?;
    Ok((p, dp))
}
