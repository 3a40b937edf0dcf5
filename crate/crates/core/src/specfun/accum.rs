//! Floating-point series accumulation with a running rounding-error bound.

use crate::bigmath::{abs_upper, add_upper, mul_upper, ApproxResult, PrecReal};
use crate::error::{Error, Result};

// precision of the bookkeeping quantities
const BOOK: u32 = 64;

/// Partial sum `S = Σ t_i` evaluated at working precision `wp`.
///
/// Each term is derived from its predecessor by a few correctly rounded
/// operations, so its relative error is at most `ops · u` (to first order)
/// with `u = 2^(1-wp)`. Summation adds at most `u · |S_i|` per step.
pub(crate) struct FloatSum {
    wp: u32,
    pub sum: PrecReal,
    pub term: PrecReal,
    term_ops: u64,
    abs_terms: PrecReal,
    abs_partials: PrecReal,
    carried: PrecReal,
}

impl FloatSum {
    pub fn new(wp: u32, sum: PrecReal, sum_error: PrecReal, term: PrecReal, term_ops: u64) -> Self {
        FloatSum {
            wp,
            sum,
            term,
            term_ops,
            abs_terms: PrecReal::zero(BOOK),
            abs_partials: PrecReal::zero(BOOK),
            carried: sum_error,
        }
    }

    /// `S += t`.
    pub fn accumulate(&mut self) -> Result<()> {
        self.sum = self.sum.add(&self.term, self.wp)?;
        self.abs_terms = add_upper(&self.abs_terms, &abs_upper(&self.term, BOOK), BOOK);
        self.abs_partials = add_upper(&self.abs_partials, &abs_upper(&self.sum, BOOK), BOOK);
        Ok(())
    }

    /// Replaces the term by `step(term)`, charging `ops` rounding steps.
    pub fn advance<F>(&mut self, ops: u64, step: F) -> Result<()>
    where
        F: FnOnce(&PrecReal, u32) -> Result<PrecReal>,
    {
        self.term = step(&self.term, self.wp)?;
        self.term_ops += ops;
        Ok(())
    }

    /// `|t|` inflated by its own relative error, rounded up.
    pub fn term_upper(&self) -> PrecReal {
        let t = abs_upper(&self.term, BOOK);
        let rel = self.relative_term_error();
        add_upper(&t, &mul_upper(&t, &rel, BOOK), BOOK)
    }

    fn relative_term_error(&self) -> PrecReal {
        // (1+u)^c - 1 <= 2cu while cu <= 1
        PrecReal::from_i64(2 * self.term_ops as i64, BOOK)
            .mul_pow2(1 - self.wp as i64)
            .expect("in range")
    }

    /// Bound on the accumulated rounding error of `sum`.
    pub fn rounding_bound(&self) -> PrecReal {
        let c = PrecReal::from_i64(self.term_ops as i64, BOOK);
        let weighted = add_upper(
            &mul_upper(&c, &self.abs_terms, BOOK),
            &self.abs_partials,
            BOOK,
        );
        let u2 = PrecReal::pow2(2 - self.wp as i64, BOOK);
        add_upper(&mul_upper(&weighted, &u2, BOOK), &self.carried, BOOK)
    }

    /// Closes the sum with a bound `tail` on the discarded terms.
    pub fn finish(self, tail: PrecReal, terms_used: usize) -> ApproxResult {
        let error_bound = add_upper(&self.rounding_bound(), &tail, BOOK);
        ApproxResult {
            value: self.sum,
            error_bound,
            terms_used,
        }
    }
}

/// Geometric tail bound `2·|t|` given all later ratios are at most 1/2.
pub(crate) fn geometric_tail(term_upper: &PrecReal) -> PrecReal {
    term_upper.mul_pow2(1).expect("in range")
}

/// Runs `attempt` with growing guard bits until the reported bound is at most `eps`.
pub(crate) fn refine_to<F>(
    precision: u32,
    eps: &PrecReal,
    initial_guard: u32,
    mut attempt: F,
) -> Result<ApproxResult>
where
    F: FnMut(u32) -> Result<ApproxResult>,
{
    if eps.is_zero() || eps.is_negative() {
        return Err(Error::Precondition(
            "error tolerance must be positive".into(),
        ));
    }
    let mut guard = initial_guard;
    for _ in 0..8 {
        let r = attempt(precision + guard)?;
        if r.error_bound <= *eps {
            return Ok(r);
        }
        let deficit = r.error_bound.top().unwrap_or(0) - eps.top().unwrap_or(0);
        guard += (deficit.max(0) as u32 + 16).max(guard / 2);
    }
    Err(Error::Precondition(format!(
        "error bound could not be brought below the tolerance at {} guard bits",
        guard
    )))
}
