//! Semi-infinite quadrature by composite Gauss–Legendre on `[0, T]` plus an
//! analytic tail bound on `[T, ∞)`, and the integral identities built on it.
//!
//! The finite-part error is the successive-refinement delta, an empirical
//! estimate rather than a proof; reports carry `quadrature_bound_heuristic`.

mod gauss;
mod identities;

pub use gauss::GaussLegendre;
pub use identities::{
    default_truncation, hk_direct, verify_bell_integral, verify_final_identity, verify_hk_integral,
    verify_k0_kernel_pointwise, verify_k0_specialization, HkValue, IdentityId, QuadReport,
};

use rayon::prelude::*;

use crate::bigmath::{add_upper, ApproxResult, PrecReal};
use crate::error::{Error, Result};

/// Default Gauss–Legendre nodes per panel.
pub const NODES_PER_PANEL: usize = 32;
/// Refinement stops with a convergence error beyond this many panels.
pub const MAX_PANELS: usize = 1 << 14;
// T is doubled at most this many times while searching for a small tail
const MAX_T_DOUBLINGS: u32 = 24;

/// A real function on `[0, ∞)` evaluated at working precision.
pub trait Integrand: Sync {
    fn eval(&self, t: &PrecReal, precision: u32) -> Result<PrecReal>;
}

impl<F> Integrand for F
where
    F: Fn(&PrecReal, u32) -> Result<PrecReal> + Sync,
{
    fn eval(&self, t: &PrecReal, precision: u32) -> Result<PrecReal> {
        self(t, precision)
    }
}

/// `|f(t)| ≤ scale · e^(sqrt_growth·√t) · Σ poly[j] t^j · e^(-decay·t)` for all `t ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailMajorant {
    pub scale: f64,
    pub sqrt_growth: f64,
    pub decay: f64,
    pub poly: Vec<f64>,
}

impl TailMajorant {
    /// Upper bound on `∫_T^∞` of the majorant, or `+∞` when it cannot be bounded at `T`.
    ///
    /// Concavity gives `a√t ≤ a√T/2 + a t/(2√T)` for `t ≥ T`, leaving
    /// `∫_T^∞ t^m e^(-ct) dt = e^(-cT) Σ_j m!/(m-j)! T^(m-j) / c^(j+1)`
    /// with `c = decay - a/(2√T)`.
    pub fn tail_beyond(&self, t: f64) -> f64 {
        if t <= 0.0 || !t.is_finite() {
            return f64::INFINITY;
        }
        let sqrt_t = t.sqrt();
        let c = self.decay - self.sqrt_growth / (2.0 * sqrt_t);
        if c <= 0.0 {
            return f64::INFINITY;
        }
        let log_front = self.sqrt_growth * sqrt_t / 2.0 - c * t;
        let mut total = 0.0;
        for (m, &coeff) in self.poly.iter().enumerate() {
            if coeff == 0.0 {
                continue;
            }
            // Σ_j m!/(m-j)! T^(m-j) / c^(j+1), built from the j = 0 term
            let mut term = t.powi(m as i32) / c;
            let mut sum = term;
            for j in 1..=m {
                term *= (m + 1 - j) as f64 / (t * c);
                sum += term;
            }
            total += coeff.abs() * sum;
        }
        // margin for the double-precision arithmetic above
        let bound = self.scale.abs() * total * log_front.exp() * (1.0 + 1e-9);
        if bound.is_nan() {
            f64::INFINITY
        } else {
            bound
        }
    }
}

/// Parameters of one semi-infinite integration.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadConfig {
    pub target_tolerance: PrecReal,
    pub truncation_point: PrecReal,
    pub panel_count: usize,
    pub precision_bits: u32,
    pub nodes_per_panel: usize,
    pub max_panels: usize,
}

impl QuadConfig {
    /// Doubles `initial_t` until the tail of `majorant` is below `tolerance/2`.
    pub fn new(
        tolerance: f64,
        initial_t: f64,
        majorant: &TailMajorant,
        precision_bits: u32,
    ) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::Precondition(
                "tolerance must be a positive number".into(),
            ));
        }
        if !(initial_t > 0.0 && initial_t.is_finite()) {
            return Err(Error::Precondition(
                "truncation point must be positive".into(),
            ));
        }
        // keep T an integer so panel endpoints stay dyadic
        let mut t = initial_t.ceil();
        let mut doublings = 0;
        while majorant.tail_beyond(t) >= tolerance / 2.0 {
            doublings += 1;
            if doublings > MAX_T_DOUBLINGS {
                return Err(Error::Convergence { panels: 0 });
            }
            t *= 2.0;
        }
        Ok(QuadConfig {
            target_tolerance: PrecReal::from_f64(tolerance, 64)?,
            truncation_point: PrecReal::from_f64(t, 64)?,
            panel_count: (t / 16.0).ceil().max(1.0) as usize,
            precision_bits,
            nodes_per_panel: NODES_PER_PANEL,
            max_panels: MAX_PANELS,
        })
    }
}

/// `∫_0^∞ f` with `error_bound = 2·(last refinement delta) + tail bound`.
///
/// `terms_used` is the number of panels in the accepted rule.
pub fn integrate_semi_infinite(
    f: &dyn Integrand,
    tail: &TailMajorant,
    config: &QuadConfig,
) -> Result<ApproxResult> {
    if config.panel_count == 0 || config.nodes_per_panel == 0 {
        return Err(Error::Precondition(
            "panel and node counts must be positive".into(),
        ));
    }
    let tail_bound = tail.tail_beyond(config.truncation_point.to_f64());
    if !tail_bound.is_finite() {
        return Err(Error::Precondition(
            "tail majorant is unbounded at the truncation point".into(),
        ));
    }
    let wp = config.precision_bits + 16;
    let rule = GaussLegendre::new(config.nodes_per_panel, wp)?;
    let quarter_tol = config.target_tolerance.mul_pow2(-2)?;
    let mut panels = config.panel_count;
    let mut previous = composite(f, &rule, &config.truncation_point, panels, wp)?;
    loop {
        panels *= 2;
        if panels > config.max_panels {
            return Err(Error::Convergence { panels: panels / 2 });
        }
        let current = composite(f, &rule, &config.truncation_point, panels, wp)?;
        let delta = current.sub(&previous, 64)?.abs();
        let delta = add_upper(&delta, &delta.ulp(), 64);
        if delta < quarter_tol {
            let tail_up = PrecReal::from_f64(tail_bound, 64)?;
            let tail_up = add_upper(&tail_up, &tail_up.ulp(), 64);
            let bound = add_upper(&delta.mul_pow2(1)?, &tail_up, 64);
            let value = current.with_precision(config.precision_bits);
            return Ok(ApproxResult {
                error_bound: add_upper(&bound, &value.ulp(), 64),
                value,
                terms_used: panels,
            });
        }
        previous = current;
    }
}

// Σ over `panels` equal panels of [0, T]; panel sums are added in order
fn composite(
    f: &dyn Integrand,
    rule: &GaussLegendre,
    t_end: &PrecReal,
    panels: usize,
    wp: u32,
) -> Result<PrecReal> {
    let width = t_end.div_int(&panels.into(), wp)?;
    let half = width.mul_pow2(-1)?;
    let sums: Vec<Result<PrecReal>> = (0..panels)
        .into_par_iter()
        .map(|j| {
            let mid = width.mul_int(&j.into(), wp)?.add(&half, wp)?;
            let mut acc = PrecReal::zero(wp);
            for (x, w) in rule.nodes().iter().zip(rule.weights()) {
                let t = mid.add(&half.mul(x, wp)?, wp)?;
                acc = acc.add(&w.mul(&f.eval(&t, wp)?, wp)?, wp)?;
            }
            acc.mul(&half, wp)
        })
        .collect();
    let mut total = PrecReal::zero(wp);
    for s in sums {
        total = total.add(&s?, wp)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_poly(power: u32) -> impl Fn(&PrecReal, u32) -> Result<PrecReal> + Sync {
        move |t: &PrecReal, p: u32| t.powi(power, p)?.mul(&t.neg().exp(p)?, p)
    }

    fn plain_majorant(power: usize) -> TailMajorant {
        let mut poly = vec![0.0; power + 1];
        poly[power] = 1.0;
        TailMajorant {
            scale: 1.0,
            sqrt_growth: 0.0,
            decay: 1.0,
            poly,
        }
    }

    #[test]
    fn gamma_integrals() {
        for (power, want) in [(0u32, 1.0f64), (1, 1.0), (3, 6.0)] {
            let maj = plain_majorant(power as usize);
            let cfg = QuadConfig::new(1e-12, 80.0, &maj, 128).unwrap();
            let r = integrate_semi_infinite(&exp_poly(power), &maj, &cfg).unwrap();
            assert!((r.value.to_f64() - want).abs() < 1e-12, "t^{power}");
            assert!(r.error_bound.to_f64() < 1e-12);
        }
    }

    #[test]
    fn tail_bound_dominates_exact_tail() {
        // ∫_T^∞ t e^{-t} = (T+1) e^{-T}
        let maj = plain_majorant(1);
        for t in [1.0f64, 10.0, 50.0] {
            let exact = (t + 1.0) * (-t).exp();
            let b = maj.tail_beyond(t);
            assert!(b >= exact && b < exact * 1.001);
        }
        let growing = TailMajorant {
            scale: 1.0,
            sqrt_growth: 2.0,
            decay: 0.1,
            poly: vec![1.0],
        };
        assert!(growing.tail_beyond(4.0).is_infinite());
        assert!(growing.tail_beyond(4000.0) < 1e-100);
    }

    #[test]
    fn truncation_point_grows_until_tail_is_small() {
        let maj = plain_majorant(0);
        let cfg = QuadConfig::new(1e-60, 80.0, &maj, 128).unwrap();
        let t = cfg.truncation_point.to_f64();
        assert!(t >= 160.0 && maj.tail_beyond(t) < 0.5e-60);
        assert!(QuadConfig::new(-1.0, 80.0, &maj, 128).is_err());
    }

    #[test]
    fn doubling_t_stays_within_bound() {
        let maj = plain_majorant(2);
        let cfg = QuadConfig::new(1e-10, 40.0, &maj, 128).unwrap();
        let a = integrate_semi_infinite(&exp_poly(2), &maj, &cfg).unwrap();
        let mut wider = cfg.clone();
        wider.truncation_point = cfg.truncation_point.mul_pow2(1).unwrap();
        wider.panel_count *= 2;
        let b = integrate_semi_infinite(&exp_poly(2), &maj, &wider).unwrap();
        let d = a.value.sub(&b.value, 128).unwrap().abs();
        assert!(d <= a.error_bound);
        assert!(a.contains(&crate::bigmath::ExactRat::from_integer(2.into())));
    }

    #[test]
    fn refinement_limit_is_a_convergence_error() {
        let maj = plain_majorant(0);
        let mut cfg = QuadConfig::new(1e-12, 80.0, &maj, 128).unwrap();
        cfg.max_panels = cfg.panel_count;
        assert!(matches!(
            integrate_semi_infinite(&exp_poly(0), &maj, &cfg),
            Err(Error::Convergence { .. })
        ));
    }
}
