//! Partial (second-kind) Bell polynomials with exact rational arguments.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::factorial;
use crate::bigmath::ExactRat;
use crate::error::{Error, Result};

/// Arguments of `B_{n,k}(x_1, …, x_{n-k+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialBellInput {
    n: u32,
    k: u32,
    x: Vec<ExactRat>,
}

impl PartialBellInput {
    pub fn new(n: u32, k: u32, x: Vec<ExactRat>) -> Result<Self> {
        if k < 1 || n < k {
            return Err(Error::Precondition(format!(
                "partial Bell polynomial needs n >= k >= 1, got n = {n}, k = {k}"
            )));
        }
        let want = (n - k + 1) as usize;
        if x.len() != want {
            return Err(Error::Precondition(format!(
                "B_{{{n},{k}}} takes {want} arguments, got {}",
                x.len()
            )));
        }
        Ok(PartialBellInput { n, k, x })
    }

    /// All arguments equal to `value`.
    pub fn constant(n: u32, k: u32, value: ExactRat) -> Result<Self> {
        let len = n.checked_sub(k).map_or(0, |d| d as usize + 1);
        Self::new(n, k, vec![value; len])
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn x(&self) -> &[ExactRat] {
        &self.x
    }
}

/// `B_{n,k}(x)` summed over all `(ℓ_1, …)` with `Σ i·ℓ_i = n` and `Σ ℓ_i = k`.
pub fn partial_bell(input: &PartialBellInput) -> ExactRat {
    let m = input.x.len();
    // x_i / i!
    let scaled: Vec<ExactRat> = input
        .x
        .iter()
        .enumerate()
        .map(|(i, xi)| xi / ExactRat::from_integer(factorial(i as u32 + 1)))
        .collect();
    let mut total = ExactRat::zero();
    let mut counts = vec![0u32; m];
    descend(
        m,
        input.n,
        input.k,
        &scaled,
        &mut counts,
        &mut |counts: &[u32]| {
            let mut term = ExactRat::from_integer(factorial(input.n));
            for (i, &l) in counts.iter().enumerate() {
                if l > 0 {
                    term /= ExactRat::from_integer(factorial(l));
                    term *= num_traits::pow(scaled[i].clone(), l as usize);
                }
            }
            total += term;
        },
    );
    total
}

// Chooses ℓ_i for i = part, part-1, …, 1 with pruning on both constraints.
fn descend(
    part: usize,
    rem_sum: u32,
    rem_count: u32,
    scaled: &[ExactRat],
    counts: &mut [u32],
    visit: &mut dyn FnMut(&[u32]),
) {
    if rem_count == 0 {
        if rem_sum == 0 {
            visit(counts);
        }
        return;
    }
    if part == 0 || rem_sum < rem_count || rem_sum > part as u32 * rem_count {
        return;
    }
    if part == 1 {
        counts[0] = rem_count;
        visit(counts);
        counts[0] = 0;
        return;
    }
    let size = part as u32;
    let max_l = rem_count.min(rem_sum / size);
    for l in (0..=max_l).rev() {
        // a zero argument kills every term that uses it
        if l > 0 && scaled[part - 1].is_zero() {
            continue;
        }
        counts[part - 1] = l;
        descend(
            part - 1,
            rem_sum - l * size,
            rem_count - l,
            scaled,
            counts,
            visit,
        );
    }
    counts[part - 1] = 0;
}

/// Checks `B_{n,k}(ab·x_1, ab²·x_2, …) = a^k b^n B_{n,k}(x_1, …)` exactly.
pub fn partial_bell_scaling_check(
    n: u32,
    k: u32,
    a: &ExactRat,
    b: &ExactRat,
    x: &[ExactRat],
) -> Result<bool> {
    let plain = PartialBellInput::new(n, k, x.to_vec())?;
    let mut b_pow = ExactRat::one();
    let scaled_x: Vec<ExactRat> = x
        .iter()
        .map(|xi| {
            b_pow *= b;
            a * &b_pow * xi
        })
        .collect();
    let scaled = PartialBellInput::new(n, k, scaled_x)?;
    let lhs = partial_bell(&scaled);
    let rhs = num_traits::pow(a.clone(), k as usize)
        * num_traits::pow(b.clone(), n as usize)
        * partial_bell(&plain);
    Ok(lhs == rhs)
}

/// `B_{n,k}(c, c, …, c)` as an integer when `c` is an integer.
pub fn partial_bell_constant_integer(n: u32, k: u32, c: i64) -> Result<BigInt> {
    let v = partial_bell(&PartialBellInput::constant(
        n,
        k,
        ExactRat::from_integer(BigInt::from(c)),
    )?);
    debug_assert!(v.is_integer());
    Ok(v.to_integer())
}
