//! Numerical integration on momentum space.
//!
//! Integrals over the real line are carried out in the angle
//! `t = arctan(sqrt(beta) p)`, which maps the line onto `(-pi/2, pi/2)` and
//! turns the eigenstate phases into plane waves in `t`. Each panel is a
//! 7/15-point Gauss-Kronrod pair and the worst panel is bisected until the
//! summed error meets the tolerance.

mod bessel;
pub(crate) mod inner;
mod kronrod;
mod oscillatory;

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;

pub use bessel::bessel_k0;
pub use inner::{inner_product, norm_squared};
pub use oscillatory::integrate_oscillatory_half_line;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Angular frequency of the integrand's phase in the integration
    /// variable; initial panels are no wider than `pi / hint`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oscillation_hint: Option<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            oscillation_hint: None,
        }
    }
}

impl QuadratureConfig {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let cfg = Self {
            rel_tol,
            abs_tol,
            max_subdivisions,
            oscillation_hint: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol.is_finite() && self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "rel_tol must be > 0, got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol.is_finite() && self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "abs_tol must be > 0, got {}",
                self.abs_tol
            )));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::InvalidParameter(
                "max_subdivisions must be >= 1".into(),
            ));
        }
        if let Some(w) = self.oscillation_hint {
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "oscillation hint must be finite and >= 0, got {w}"
                )));
            }
        }
        Ok(())
    }

    pub fn with_hint(mut self, omega: f64) -> Self {
        self.oscillation_hint = Some(omega);
        self
    }

    pub fn without_hint(mut self) -> Self {
        self.oscillation_hint = None;
        self
    }

    /// Error target for an integral of magnitude `magnitude`.
    pub fn target(&self, magnitude: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * magnitude)
    }

    fn initial_panels(&self, width: f64) -> usize {
        let n = match self.oscillation_hint {
            Some(w) if w > 0.0 => (w * width / std::f64::consts::PI).ceil() as usize,
            _ => 1,
        };
        n.clamp(1, self.max_subdivisions.max(1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl IntegralResult {
    pub(crate) fn scale(self, factor: f64) -> IntegralResult {
        IntegralResult {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            evaluations: self.evaluations,
        }
    }
}

/// Integral of `f` over `[a, b]` with extra initial breakpoints (any order,
/// points outside `(a, b)` ignored).
pub fn try_integrate_interval<F>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "interval [{a}, {b}] must be finite"
        )));
    }
    if a == b {
        return Ok(IntegralResult {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    if b < a {
        return try_integrate_interval(f, b, a, breakpoints, cfg).map(|r| r.scale(-1.0));
    }
    let n = cfg.initial_panels(b - a);
    let mut points: Vec<f64> = (0..=n)
        .map(|i| {
            if i == n {
                b
            } else {
                a + (b - a) * i as f64 / n as f64
            }
        })
        .chain(breakpoints.iter().copied().filter(|&x| x > a && x < b))
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    kronrod::adaptive(&f, &points, cfg)
}

pub fn integrate_interval<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(f64) -> Complex64,
{
    try_integrate_interval(|x| Ok(f(x)), a, b, &[], cfg)
}

/// `int_R f(p) dp`, integrated in `t = arctan(sqrt(beta) p)` over `(-pi/2, pi/2)`.
pub fn try_integrate_real_line<F>(
    f: F,
    params: &ModelParams,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    try_integrate_angle_range(f, params, -FRAC_PI_2, FRAC_PI_2, &[], cfg)
}

/// [`try_integrate_real_line`] with extra breakpoints given as momenta.
pub fn try_integrate_real_line_at<F>(
    f: F,
    params: &ModelParams,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    try_integrate_angle_range(f, params, -FRAC_PI_2, FRAC_PI_2, breakpoints, cfg)
}

pub fn integrate_real_line<F>(
    f: F,
    params: &ModelParams,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult>
where
    F: Fn(f64) -> Complex64,
{
    try_integrate_real_line(|p| Ok(f(p)), params, cfg)
}

/// `int_0^inf f(p) dp` through the same substitution on `[0, pi/2)`.
pub fn try_integrate_half_line<F>(
    f: F,
    params: &ModelParams,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    try_integrate_angle_range(f, params, 0.0, FRAC_PI_2, &[], cfg)
}

/// [`try_integrate_half_line`] with extra breakpoints given as momenta.
pub fn try_integrate_half_line_at<F>(
    f: F,
    params: &ModelParams,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    try_integrate_angle_range(f, params, 0.0, FRAC_PI_2, breakpoints, cfg)
}

pub fn integrate_half_line<F>(
    f: F,
    params: &ModelParams,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult>
where
    F: Fn(f64) -> Complex64,
{
    try_integrate_half_line(|p| Ok(f(p)), params, cfg)
}

fn try_integrate_angle_range<F>(
    f: F,
    params: &ModelParams,
    t0: f64,
    t1: f64,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let sb = params.sqrt_beta();
    let breaks: Vec<f64> = breakpoints.iter().map(|&p| (sb * p).atan()).collect();
    let g = |t: f64| {
        let s = t.tan();
        // dp/dt = sec^2(t)/sqrt(beta)
        Ok(f(s / sb)? * ((1.0 + s * s) / sb))
    };
    try_integrate_interval(g, t0, t1, &breaks, cfg)
}
