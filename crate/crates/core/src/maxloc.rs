//! Maximally localized states: closed-form overlaps (checked against
//! quadrature, which is treated as ground truth), span sums, and the
//! residual of their defining first-order equation.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::eigenbasis::sinc;
use crate::error::Result;
use crate::operators::{apply_jet, OperatorSpec};
use crate::params::ModelParams;
use crate::quadrature::{inner_product, IntegralResult, QuadratureConfig};
use crate::state::{Measure, StateSpec};

/// Closed-form `<psi^ML_xi | psi^ML_xi'>`:
/// `sin(pi x) / (pi (x - x^3))` with `x = (xi' - xi) / (2 hbar sqrt(beta))`.
///
/// Even in `x`; equals `1` at `x = 0` and `1/2` at `x = +-1`.
pub fn ml_overlap_analytic(xi: f64, xi_prime: f64, params: &ModelParams) -> f64 {
    let x = ((xi_prime - xi) / (2.0 * params.min_length())).abs();
    let u = x - 1.0;
    if u.abs() < 0.5 {
        // sin(pi x)/(pi x (1-x)(1+x)) rewritten around x = 1
        sinc(PI * u) / ((1.0 + u) * (2.0 + u))
    } else {
        sinc(PI * x) / (1.0 - x * x)
    }
}

/// Closed-form `<psi_xi' | psi^ML_xi>` for an eigenstate at `xi_eigen = xi'`
/// and a maximally localized state at `xi_ml = xi`:
/// `2 sqrt(2) cos(d pi / 2) / (pi (1 - d^2))` with `d = (xi - xi') / (hbar sqrt(beta))`.
///
/// At `d = +-1` both numerator and denominator vanish; the limit is `1/sqrt(2)`.
pub fn ml_eigen_overlap_analytic(xi_eigen: f64, xi_ml: f64, params: &ModelParams) -> f64 {
    let d = ((xi_ml - xi_eigen) / params.min_length()).abs();
    let u = d - 1.0;
    if u.abs() < 0.5 {
        SQRT_2 * sinc(0.5 * PI * u) / (2.0 + u)
    } else {
        2.0 * SQRT_2 * (0.5 * PI * d).cos() / (PI * (1.0 - d * d))
    }
}

/// Lattice specialization of [`ml_eigen_overlap_analytic`] at separation
/// `xi - xi' = 2 m hbar sqrt(beta)`: `(-1)^m 2 sqrt(2) / (pi (1 - 4 m^2))`.
/// Positive at `m = 0`.
pub fn ml_eigen_overlap_lattice(m: i64) -> f64 {
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let m = m as f64;
    sign * 2.0 * SQRT_2 / (PI * (1.0 - 4.0 * m * m))
}

/// `<psi^ML_xi | psi^ML_xi'>` by direct quadrature.
pub fn ml_overlap_quadrature(
    xi: f64,
    xi_prime: f64,
    params: &ModelParams,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    inner_product(
        &StateSpec::max_loc(xi),
        &StateSpec::max_loc(xi_prime),
        Measure::Standard,
        params,
        cfg,
    )
}

/// `<psi_xi_eigen | psi^ML_xi_ml>` by direct quadrature.
pub fn ml_eigen_overlap_quadrature(
    xi_eigen: f64,
    xi_ml: f64,
    params: &ModelParams,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    inner_product(
        &StateSpec::sym_eigen(xi_eigen),
        &StateSpec::max_loc(xi_ml),
        Measure::Standard,
        params,
        cfg,
    )
}

/// `sum_{|m| <= N} 8 / (pi^2 (4m^2 - 1)^2)`, summed from `m = 0` outwards.
pub fn ml_span_sum(truncation: u64) -> f64 {
    let term = |m: i64| {
        let d = 4.0 * (m * m) as f64 - 1.0;
        8.0 / (PI * PI * d * d)
    };
    let mut sum = term(0);
    for m in 1..=truncation as i64 {
        sum += term(-m);
        sum += term(m);
    }
    sum
}

/// Squared expansion coefficients of `psi^ML_xi` in the eigenbasis
/// `{psi_(2n hbar sqrt(beta))}`, summed over the `2N + 1` sites nearest `xi`.
pub fn ml_parseval_sum(xi_ml: f64, truncation: u64, params: &ModelParams) -> f64 {
    let l = params.min_length();
    let centre = (xi_ml / (2.0 * l)).round() as i64;
    let coeff = |n: i64| {
        let c = ml_eigen_overlap_analytic(2.0 * n as f64 * l, xi_ml, params);
        c * c
    };
    let mut sum = coeff(centre);
    for k in 1..=truncation as i64 {
        sum += coeff(centre - k);
        sum += coeff(centre + k);
    }
    sum
}

/// `[X_sym - xi + i hbar (1 + beta dp^2)/(2 dp^2) p] psi^ML_xi (p)` at the
/// minimal-length configuration `<p> = 0`, `dp = 1/sqrt(beta)`.
pub fn ml_ode_residual(xi: f64, p: f64, params: &ModelParams) -> Result<Complex64> {
    let state = StateSpec::max_loc(xi);
    let jet = state.jet(params, p)?;
    let dp2 = 1.0 / params.beta();
    let coeff = params.hbar() * (1.0 + params.beta() * dp2) / (2.0 * dp2);
    let x_psi = apply_jet(OperatorSpec::XSym, params, p, jet);
    Ok(x_psi - jet.value * xi + Complex64::new(0.0, coeff * p) * jet.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    const NAT: ModelParams = ModelParams::natural();

    #[test]
    fn ml_overlap_examples() {
        assert_eq!(ml_overlap_analytic(0.0, 0.0, &NAT), 1.0);
        assert!(ml_overlap_analytic(0.0, 4.0, &NAT).abs() < 1e-15);
        assert!((ml_overlap_analytic(0.0, 2.0, &NAT) - 0.5).abs() < 1e-15);
        assert!((ml_overlap_analytic(0.0, -2.0, &NAT) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ml_overlap_branches_agree_with_direct_formula() {
        let direct = |x: f64| (PI * x).sin() / (PI * (x - x * x * x));
        for &x in &[
            0.01, 0.3, 0.49, 0.51, 0.9, 0.999, 1.001, 1.49, 1.51, 2.5, 7.3,
        ] {
            let v = ml_overlap_analytic(0.0, 2.0 * x, &NAT);
            assert!((v - direct(x)).abs() < 1e-12, "x={x}");
        }
        // L'Hopital: close to x = 1 the value tends to 1/2 with slope -3/4
        let u = 1e-7;
        assert!((ml_overlap_analytic(0.0, 2.0 * (1.0 + u), &NAT) - (0.5 - 0.75 * u)).abs() < 1e-12);
    }

    #[test]
    fn ml_eigen_examples() {
        let v0 = ml_eigen_overlap_analytic(0.0, 0.0, &NAT);
        assert!((v0 - 2.0 * SQRT_2 / PI).abs() < 1e-15);
        assert!((v0 - 0.900_316_316_2).abs() < 1e-10);
        let v1 = ml_eigen_overlap_analytic(0.0, 2.0, &NAT);
        assert!((v1.abs() - 2.0 * SQRT_2 / (3.0 * PI)).abs() < 1e-15);
        assert!((v1.abs() - 0.300_105_4).abs() < 1e-7);
        assert!((ml_eigen_overlap_analytic(0.0, 1.0, &NAT) - SQRT_2 / 2.0).abs() < 1e-15);
        for m in -5..=5 {
            let a = ml_eigen_overlap_analytic(0.0, 2.0 * m as f64, &NAT);
            assert!((a - ml_eigen_overlap_lattice(m)).abs() < 1e-15, "m={m}");
        }
    }

    #[test]
    fn ml_eigen_branch_near_half_site() {
        let direct = |d: f64| 2.0 * SQRT_2 * (0.5 * PI * d).cos() / (PI * (1.0 - d * d));
        for &d in &[0.2, 0.6, 0.99, 1.01, 1.4, 1.6, 3.0] {
            assert!(
                (ml_eigen_overlap_analytic(0.0, d, &NAT) - direct(d)).abs() < 1e-12,
                "d={d}"
            );
        }
    }

    #[test]
    fn span_sum_partial_values() {
        assert!((ml_span_sum(0) - 8.0 / (PI * PI)).abs() < 1e-16);
        let oracle: f64 = (-2..=2i32)
            .map(|m| 8.0 / (PI * PI * ((4 * m * m - 1) as f64).powi(2)))
            .sum();
        assert!((ml_span_sum(2) - oracle).abs() < 1e-15);
        assert!((ml_span_sum(2) - 0.997_901_079_784_091).abs() < 1e-12);
    }

    #[test]
    fn span_sum_converges_monotonically() {
        let mut prev = 0.0;
        for n in 0..200 {
            let s = ml_span_sum(n);
            assert!(s > prev && s <= 1.0 + 1e-15);
            prev = s;
        }
        assert!((ml_span_sum(50) - 1.0).abs() <= 1e-5);
    }

    #[test]
    fn parseval_consistency_on_lattice() {
        for n in [-3, 0, 4] {
            let s = ml_parseval_sum(2.0 * n as f64, 50, &NAT);
            assert!((s - 1.0).abs() <= 1e-5, "n={n}: {s}");
        }
    }

    #[test]
    fn ode_residual_vanishes() {
        for &(xi, p) in &[(0.0, 0.0), (0.0, 1.0), (3.0, -2.0), (-7.5, 40.0)] {
            let r = ml_ode_residual(xi, p, &NAT).unwrap();
            assert!(r.norm() <= 1e-12, "xi={xi} p={p}: {r}");
        }
        let params = ModelParams::new(0.3, 2.0).unwrap();
        let l = params.min_length();
        let r = ml_ode_residual(3.0 * l, -2.0 / params.sqrt_beta(), &params).unwrap();
        assert!(r.norm() <= 1e-12);
    }
}
