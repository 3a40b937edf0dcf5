use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::bigmath::ExactInt;
use crate::error::{Error, Result};

pub fn factorial(n: u32) -> ExactInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Row `n` of Pascal's triangle, `C(n, 0..=n)`.
pub fn binomial_row(n: u32) -> Vec<ExactInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for i in 0..n {
        c = c * (n - i) / (i + 1);
        row.push(c.clone());
    }
    row
}

/// `S(n, k)` from the alternating binomial sum `(1/k!) Σ (-1)^i C(k,i) (k-i)^n`.
///
/// `S(0,0) = 1`, and zero whenever `k > n` or `k = 0 < n`.
pub fn stirling2_explicit(n: u32, k: u32) -> ExactInt {
    if k > n {
        return BigInt::zero();
    }
    let binom = binomial_row(k);
    let mut sum = BigInt::zero();
    for (i, c) in binom.iter().enumerate() {
        // 0^0 = 1 covers S(0,0)
        let term = c * num_traits::pow(BigInt::from(k - i as u32), n as usize);
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let (q, r) = sum.div_rem(&factorial(k));
    assert!(
        r.is_zero(),
        "alternating sum for S({n},{k}) not divisible by {k}!"
    );
    q
}

/// Lower-triangular table of `S(n, k)` for `0 ≤ k ≤ n ≤ N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StirlingTable {
    rows: Vec<Vec<ExactInt>>,
}

impl StirlingTable {
    /// Builds the table with `S(n,k) = k·S(n-1,k) + S(n-1,k-1)`.
    pub fn new(max_n: u32) -> Self {
        let mut rows: Vec<Vec<ExactInt>> = Vec::with_capacity(max_n as usize + 1);
        rows.push(vec![BigInt::one()]);
        for n in 1..=max_n as usize {
            let prev = &rows[n - 1];
            let mut row = vec![BigInt::zero(); n + 1];
            for k in 1..=n {
                let carried = if k < n { &prev[k] * k } else { BigInt::zero() };
                row[k] = carried + &prev[k - 1];
            }
            rows.push(row);
        }
        StirlingTable { rows }
    }

    pub fn max_n(&self) -> u32 {
        (self.rows.len() - 1) as u32
    }

    pub fn covers(&self, n: u32) -> bool {
        (n as usize) < self.rows.len()
    }

    /// `S(n, k)`; zero for `k > n`.
    pub fn get(&self, n: u32, k: u32) -> Result<ExactInt> {
        let row = self.row(n)?;
        Ok(row.get(k as usize).cloned().unwrap_or_else(BigInt::zero))
    }

    pub fn row(&self, n: u32) -> Result<&[ExactInt]> {
        self.rows
            .get(n as usize)
            .map(Vec::as_slice)
            .ok_or(Error::OutOfRange {
                what: "n",
                index: n as usize,
                limit: self.rows.len() - 1,
            })
    }
}

/// Process-wide table covering at least `max_n`, built once and then shared read-only.
///
/// A request beyond the current table replaces it with a larger one;
/// previously handed-out tables stay valid.
pub fn shared_table(max_n: u32) -> Arc<StirlingTable> {
    static TABLE: OnceLock<Mutex<Arc<StirlingTable>>> = OnceLock::new();
    let cell = TABLE.get_or_init(|| Mutex::new(Arc::new(StirlingTable::new(64))));
    let mut guard = cell.lock().unwrap_or_else(|e| e.into_inner());
    if !guard.covers(max_n) {
        *guard = Arc::new(StirlingTable::new(max_n.max(2 * guard.max_n())));
    }
    Arc::clone(&guard)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_values() {
        assert_eq!(stirling2_explicit(4, 2), BigInt::from(7));
        assert_eq!(stirling2_explicit(5, 3), BigInt::from(25));
        for n in [0, 1, 5, 20] {
            assert_eq!(stirling2_explicit(n, n), BigInt::one());
        }
        assert_eq!(stirling2_explicit(3, 0), BigInt::zero());
        assert_eq!(stirling2_explicit(3, 7), BigInt::zero());
    }

    // restricted-growth strings enumerate set partitions of {0..n-1}
    fn count_partitions(n: usize, k: usize) -> u64 {
        fn go(pos: usize, n: usize, blocks: usize, k: usize) -> u64 {
            if pos == n {
                return u64::from(blocks == k);
            }
            if blocks + (n - pos) < k {
                return 0;
            }
            let mut total = 0;
            for b in 0..=blocks {
                if b == blocks && blocks == k {
                    continue;
                }
                total += go(pos + 1, n, blocks.max(b + 1), k);
            }
            total
        }
        go(0, n, 0, k)
    }

    #[test]
    fn explicit_matches_partition_enumeration() {
        for n in 0..=8u32 {
            for k in 0..=n {
                assert_eq!(
                    stirling2_explicit(n, k),
                    BigInt::from(count_partitions(n as usize, k as usize)),
                    "S({n},{k})"
                );
            }
        }
    }

    #[test]
    fn table_rows() {
        let t = StirlingTable::new(4);
        let row4: Vec<i64> = [0, 1, 7, 6, 1].to_vec();
        assert_eq!(
            t.row(4).unwrap(),
            row4.into_iter().map(BigInt::from).collect::<Vec<_>>()
        );
        assert_eq!(StirlingTable::new(0).row(0).unwrap(), &[BigInt::one()]);
        assert_eq!(t.get(2, 3).unwrap(), BigInt::zero());
        assert!(matches!(t.row(5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn table_invariants() {
        let t = StirlingTable::new(40);
        for n in 0..=40u32 {
            let row = t.row(n).unwrap();
            assert_eq!(row[n as usize], BigInt::one());
            if n > 0 {
                assert!(row[0].is_zero());
            }
            assert!(row.iter().all(|v| *v >= BigInt::zero()));
        }
    }

    #[test]
    fn shared_table_grows() {
        let small = shared_table(10);
        assert!(small.covers(10));
        let big = shared_table(300);
        assert!(big.covers(300));
        assert_eq!(big.get(10, 4).unwrap(), small.get(10, 4).unwrap());
    }
}
