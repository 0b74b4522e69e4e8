//! Fourier-type integrals over `[0, inf)` with slowly decaying amplitudes.
//!
//! The half-line is cut into half periods of the asymptotic oscillation,
//! each half period is integrated adaptively, and the alternating sequence
//! of partial sums is accelerated with Wynn's epsilon algorithm.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{try_integrate_interval, IntegralResult, QuadratureConfig};
use crate::error::{Error, Result};

const MAX_CYCLES: usize = 400;
const MIN_CYCLES: usize = 8;
// partial sums fed to the epsilon table; longer windows only add roundoff
const WINDOW: usize = 15;
// per-cycle errors are summed, so cycles run tighter than the caller asked
const CYCLE_REL_FLOOR: f64 = 100.0 * f64::EPSILON;

/// `int_0^inf h(p) dp` where `h` oscillates with angular frequency `omega`
/// (in `p`) at large `p`. `breakpoints` mark narrow features of `h`.
pub fn integrate_oscillatory_half_line<F>(
    h: F,
    omega: f64,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    cfg.validate()?;
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "oscillation frequency must be finite and > 0, got {omega}"
        )));
    }
    let half_period = PI / omega;
    let cycle_cfg = QuadratureConfig {
        rel_tol: (cfg.rel_tol * 1e-3).max(CYCLE_REL_FLOOR),
        abs_tol: cfg.abs_tol * 0.01,
        oscillation_hint: None,
        ..*cfg
    };

    let mut partial = Vec::with_capacity(MAX_CYCLES);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut quad_error = 0.0;
    let mut evaluations = 0;
    let mut estimates: Vec<Complex64> = Vec::new();
    let mut best: Option<(Complex64, f64)> = None;
    let mut small_run = 0;

    for k in 0..MAX_CYCLES {
        let a = half_period * k as f64;
        let r = try_integrate_interval(&h, a, a + half_period, breakpoints, &cycle_cfg)?;
        sum += r.value;
        quad_error += r.error_estimate;
        evaluations += r.evaluations;
        partial.push(sum);

        // amplitude has died out: the plain sum is the answer
        if r.value.norm() <= 1e-3 * cfg.target(sum.norm()) {
            small_run += 1;
            if small_run >= 3 {
                return Ok(IntegralResult {
                    value: sum,
                    error_estimate: quad_error,
                    evaluations,
                });
            }
        } else {
            small_run = 0;
        }

        let window = &partial[partial.len().saturating_sub(WINDOW)..];
        let Some(est) = epsilon_extrapolate(window) else {
            continue;
        };
        estimates.push(est);
        if estimates.len() < 3 {
            continue;
        }
        let n = estimates.len();
        let ext_error = (est - estimates[n - 2]).norm()
            + (est - estimates[n - 3]).norm()
            + 5.0 * f64::EPSILON * est.norm();
        let total_error = ext_error + quad_error;
        if best.is_none_or(|(_, e)| total_error < e) {
            best = Some((est, total_error));
        }
        if k + 1 >= MIN_CYCLES && total_error <= cfg.target(est.norm()) {
            return Ok(IntegralResult {
                value: est,
                error_estimate: total_error,
                evaluations,
            });
        }
    }
    let (value, error_estimate) = best.unwrap_or((sum, f64::INFINITY));
    Err(Error::Convergence {
        best: value,
        error_estimate,
        evaluations,
    })
}

/// Wynn's epsilon algorithm: the newest entry of the highest even column.
/// `None` until at least three partial sums are available.
pub(crate) fn epsilon_extrapolate(s: &[Complex64]) -> Option<Complex64> {
    if s.len() < 3 {
        return None;
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut older: Vec<Complex64> = vec![zero; s.len() + 1];
    let mut current: Vec<Complex64> = s.to_vec();
    let mut best = *s.last().unwrap();
    let mut column = 0;
    while current.len() >= 2 {
        let mut next = Vec::with_capacity(current.len() - 1);
        for j in 0..current.len() - 1 {
            let diff = current[j + 1] - current[j];
            if diff.norm() <= f64::MIN_POSITIVE * 1e3 {
                // exact repeat: the sequence has converged at this column
                return Some(if column % 2 == 0 {
                    current[j + 1]
                } else {
                    best
                });
            }
            next.push(older[j + 1] + diff.inv());
        }
        column += 1;
        older = current;
        current = next;
        if column % 2 == 0 {
            best = *current.last().unwrap();
        }
    }
    Some(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_sums_alternating_harmonic_series() {
        let mut s = Vec::new();
        let mut acc = 0.0;
        for k in 1..=15 {
            acc += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
            s.push(Complex64::new(acc, 0.0));
        }
        let e = epsilon_extrapolate(&s).unwrap();
        assert!((e.re - std::f64::consts::LN_2).abs() < 1e-10, "{e}");
    }

    #[test]
    fn cosine_transform_of_lorentzian() {
        // int_0^inf cos(w p)/(1+p^2) dp = (pi/2) e^{-w}
        let cfg = QuadratureConfig::default();
        for &w in &[0.1, 1.0, 5.0, 20.0] {
            let r = integrate_oscillatory_half_line(
                |p: f64| Ok(Complex64::new((w * p).cos() / (1.0 + p * p), 0.0)),
                w,
                &[],
                &cfg,
            )
            .unwrap();
            let exact = PI / 2.0 * (-w).exp();
            assert!(
                (r.value.re - exact).abs() < 1e-11,
                "w={w}: {} vs {exact}",
                r.value.re
            );
        }
    }

    #[test]
    fn sine_transform_of_inverse_root() {
        // int_0^inf sin(p)/sqrt(p) dp = sqrt(pi/2)
        let cfg = QuadratureConfig::default();
        let r = integrate_oscillatory_half_line(
            |p: f64| {
                Ok(Complex64::new(
                    if p > 0.0 { p.sin() / p.sqrt() } else { 0.0 },
                    0.0,
                ))
            },
            1.0,
            &[],
            &cfg,
        )
        .unwrap();
        assert!(
            (r.value.re - (PI / 2.0).sqrt()).abs() < 1e-9,
            "{}",
            r.value.re
        );
    }
}
