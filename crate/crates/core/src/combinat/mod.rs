//! Stirling numbers of the second kind, Bell numbers by three independent
//! routes, partial Bell polynomials and exact generating-function series.

mod bell;
mod partial_bell;
mod series;
mod stirling;

pub use bell::{
    bell_recurrence, bell_stirling_sum, genfunc_bell_alternating, genfunc_bell_coeffs,
    genfunc_stirling_row, BellMethod, BellSequence,
};
pub use partial_bell::{
    partial_bell, partial_bell_constant_integer, partial_bell_scaling_check, PartialBellInput,
};
pub use series::{series_exp, SeriesPoly};
pub use stirling::{binomial_row, factorial, shared_table, stirling2_explicit, StirlingTable};

use crate::error::Result;

/// `B_0..=B_N` as row sums of the Stirling table.
pub fn bell_stirling_sequence(max_n: u32, table: &StirlingTable) -> Result<BellSequence> {
    let values = (0..=max_n)
        .map(|n| bell_stirling_sum(n, table))
        .collect::<Result<Vec<_>>>()?;
    Ok(BellSequence {
        values,
        method: BellMethod::StirlingSum,
    })
}

/// `B_0..=B_N` by the requested method.
pub fn bell_sequence(max_n: u32, method: BellMethod) -> BellSequence {
    match method {
        BellMethod::Recurrence => bell_recurrence(max_n),
        BellMethod::StirlingSum => {
            bell_stirling_sequence(max_n, &shared_table(max_n)).expect("shared table covers max_n")
        }
        BellMethod::GenFunc => genfunc_bell_coeffs(max_n),
    }
}
