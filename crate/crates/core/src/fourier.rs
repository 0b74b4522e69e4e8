//! Position-space amplitudes by numerical Fourier transform, and the
//! closed-form profiles they are compared against.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::quadrature::{
    bessel_k0, integrate_oscillatory_half_line, try_integrate_half_line_at, try_integrate_interval,
    IntegralResult, QuadratureConfig,
};
use crate::state::StateSpec;

/// Closest approach, in units of `hbar sqrt(beta)`, at which the
/// logarithmically singular eigenstate profile is evaluated.
pub const MIN_EIGEN_OFFSET: f64 = 0.05;

/// How the eigenstate phase enters the transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseMode {
    /// Phase `xi arctan(sqrt(beta) p) / (hbar sqrt(beta))`.
    Exact,
    /// Phase linearized to `xi p / hbar`.
    Linearized,
}

impl PhaseMode {
    pub fn name(self) -> &'static str {
        match self {
            PhaseMode::Exact => "exact",
            PhaseMode::Linearized => "linearized",
        }
    }
}

fn momentum_amplitude(
    state: &StateSpec,
    mode: PhaseMode,
    params: &ModelParams,
    p: f64,
) -> Result<Complex64> {
    match (mode, state.xi()) {
        (PhaseMode::Linearized, Some(xi)) => {
            let (env, _) = state.envelope(params, p);
            Ok(Complex64::from_polar(env, -xi * p / params.hbar()))
        }
        _ => state.evaluate(params, p),
    }
}

/// Frequency (in `p`) of the combined phase at large momenta.
fn tail_frequency(state: &StateSpec, mode: PhaseMode, params: &ModelParams, x: f64) -> f64 {
    let shift = match (mode, state) {
        (PhaseMode::Linearized, s) if s.xi().is_some() => s.xi().unwrap(),
        (_, StateSpec::Gaussian { x0, .. }) => *x0,
        _ => 0.0,
    };
    (x - shift).abs() / params.hbar()
}

/// `Psi(x) = (2 pi hbar)^(-1/2) int exp(i p x / hbar) psi(p) dp`.
pub fn position_amplitude(
    state: &StateSpec,
    mode: PhaseMode,
    params: &ModelParams,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    let hbar = params.hbar();
    let norm = (2.0 * PI * hbar).sqrt().recip();
    let kernel = |p: f64| Complex64::cis(p * x / hbar);

    if let Some(grid) = state.as_grid() {
        let (lo, hi) = grid.range();
        return try_integrate_interval(
            |p| Ok(kernel(p) * state.evaluate(params, p)?),
            lo,
            hi,
            grid.nodes(),
            &cfg.without_hint(),
        )
        .map(|r| r.scale(norm));
    }

    let omega = tail_frequency(state, mode, params, x);
    match state {
        StateSpec::KmmEigen { .. } => {
            return Err(Error::Divergent(
                "KMM eigenstates have constant modulus and no pointwise Fourier transform".into(),
            ))
        }
        StateSpec::SymEigen { .. } if omega * hbar / params.min_length() < MIN_EIGEN_OFFSET => {
            return Err(Error::Domain {
                what: "position_amplitude",
                value: x,
                domain: "eigenstate profile diverges logarithmically; keep the \
                         oscillation offset >= 0.05 hbar sqrt(beta)",
            })
        }
        _ => {}
    }

    let folded = |p: f64| {
        Ok(kernel(p) * momentum_amplitude(state, mode, params, p)?
            + kernel(-p) * momentum_amplitude(state, mode, params, -p)?)
    };
    let breaks: Vec<f64> = state.features().iter().map(|p| p.abs()).collect();
    let r = if omega > 0.0 {
        integrate_oscillatory_half_line(folded, omega, &breaks, cfg)?
    } else {
        try_integrate_half_line_at(folded, params, &breaks, &cfg.without_hint())?
    };
    Ok(r.scale(norm))
}

/// Amplitudes at each `x`, computed in parallel and returned in input order.
pub fn position_profile(
    state: &StateSpec,
    mode: PhaseMode,
    params: &ModelParams,
    xs: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<IntegralResult>> {
    xs.par_iter()
        .map(|&x| position_amplitude(state, mode, params, x, cfg))
        .collect()
}

/// `sqrt(2) / (beta^(1/4) pi sqrt(hbar)) K0(|x - xi| / (hbar sqrt(beta)))`.
pub fn eigen_position_closed_form(xi: f64, x: f64, params: &ModelParams) -> Result<f64> {
    let r = (x - xi).abs() / params.min_length();
    if r == 0.0 {
        return Err(Error::Domain {
            what: "eigen_position_closed_form",
            value: x,
            domain: "x != xi (logarithmic divergence)",
        });
    }
    let pref = std::f64::consts::SQRT_2 / (params.beta().powf(0.25) * PI * params.hbar().sqrt());
    Ok(pref * bessel_k0(r)?)
}

/// `beta^(-1/4) hbar^(-1/2) exp(-|x - xi| / (hbar sqrt(beta)))`.
pub fn ml_position_closed_form(xi: f64, x: f64, params: &ModelParams) -> f64 {
    let r = (x - xi).abs() / params.min_length();
    (-r).exp() / (params.beta().powf(0.25) * params.hbar().sqrt())
}

/// `int |Psi(x)|^2 dx` by the trapezoid rule on `count` points spanning
/// `xi +- half_width`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlancherelCheck {
    pub norm: f64,
    /// Sum of the per-point quadrature errors propagated through the rule.
    pub error_estimate: f64,
    pub xs: Vec<f64>,
    pub amplitudes: Vec<IntegralResult>,
}

pub fn plancherel_norm(
    state: &StateSpec,
    mode: PhaseMode,
    params: &ModelParams,
    half_width: f64,
    count: usize,
    cfg: &QuadratureConfig,
) -> Result<PlancherelCheck> {
    if count < 3 || !(half_width > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Plancherel window needs >= 3 points and positive width, got {count} and {half_width}"
        )));
    }
    let centre = state.xi().unwrap_or(0.0);
    let h = 2.0 * half_width / (count - 1) as f64;
    let xs: Vec<f64> = (0..count)
        .map(|i| centre - half_width + h * i as f64)
        .collect();
    let amplitudes = position_profile(state, mode, params, &xs, cfg)?;
    let mut norm = 0.0;
    let mut err = 0.0;
    for (i, a) in amplitudes.iter().enumerate() {
        let w = if i == 0 || i == count - 1 { 0.5 * h } else { h };
        norm += w * a.value.norm_sqr();
        err += w * 2.0 * a.value.norm() * a.error_estimate;
    }
    Ok(PlancherelCheck {
        norm,
        error_estimate: err,
        xs,
        amplitudes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const NAT: ModelParams = ModelParams::natural();

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn maxloc_profile_examples() {
        let s = StateSpec::max_loc(0.0);
        let v0 = position_amplitude(&s, PhaseMode::Exact, &NAT, 0.0, &cfg()).unwrap();
        assert!((v0.value - 1.0).norm() < 1e-9);
        let v1 = position_amplitude(&s, PhaseMode::Exact, &NAT, 1.0, &cfg()).unwrap();
        assert!(
            (v1.value.re - (-1.0f64).exp()).abs() < 1e-10,
            "{}",
            v1.value
        );
        assert!(v1.value.im.abs() < 1e-12);
    }

    #[test]
    fn eigen_profile_matches_bessel() {
        let s = StateSpec::sym_eigen(0.0);
        let v = position_amplitude(&s, PhaseMode::Exact, &NAT, 1.0, &cfg()).unwrap();
        let k = eigen_position_closed_form(0.0, 1.0, &NAT).unwrap();
        assert!((k - 0.189_527_585_624_494_8).abs() < 1e-12, "{k}");
        assert!((v.value.re - k).abs() < 1e-9 * k, "{} vs {k}", v.value.re);
    }

    #[test]
    fn eigen_profile_refuses_coincidence() {
        let s = StateSpec::sym_eigen(0.0);
        assert!(position_amplitude(&s, PhaseMode::Exact, &NAT, 0.01, &cfg()).is_err());
        assert!(eigen_position_closed_form(1.0, 1.0, &NAT).is_err());
        let k = StateSpec::kmm_eigen(0.0);
        assert!(position_amplitude(&k, PhaseMode::Exact, &NAT, 1.0, &cfg()).is_err());
    }

    #[test]
    fn closed_forms_are_translation_invariant() {
        let params = ModelParams::new(2.0, 0.5).unwrap();
        for &x in &[-2.0, 0.3, 4.0] {
            let a = eigen_position_closed_form(1.5, x, &params).unwrap();
            let b = eigen_position_closed_form(0.0, x - 1.5, &params).unwrap();
            assert!((a - b).abs() <= 1e-15 * a);
            let c = ml_position_closed_form(3.0, 3.0 + x, &params);
            assert!((c - ml_position_closed_form(0.0, x, &params)).abs() <= 1e-14 * c);
        }
        let l = params.min_length();
        let v = ml_position_closed_form(0.0, l, &params);
        assert!(
            (v - (-1.0f64).exp() / (params.beta().powf(0.25) * params.hbar().sqrt())).abs() < 1e-15
        );
    }

    #[test]
    fn eigen_profile_far_decay() {
        // K0(r) ~ sqrt(pi/(2r)) e^{-r}
        let a = eigen_position_closed_form(0.0, 10.0, &NAT).unwrap();
        let b = eigen_position_closed_form(0.0, 12.0, &NAT).unwrap();
        let predicted = (12.0f64 / 10.0).sqrt() * 2f64.exp();
        assert!(((a / b) / predicted - 1.0).abs() < 0.02);
    }

    #[test]
    fn linearized_mode_is_translation_covariant() {
        let s = StateSpec::max_loc(4.0);
        let v = position_amplitude(&s, PhaseMode::Linearized, &NAT, 5.0, &cfg()).unwrap();
        assert!((v.value.re - ml_position_closed_form(4.0, 5.0, &NAT)).abs() < 1e-10);
        let s = StateSpec::sym_eigen(-3.0);
        let v = position_amplitude(&s, PhaseMode::Linearized, &NAT, -1.0, &cfg()).unwrap();
        let k = eigen_position_closed_form(-3.0, -1.0, &NAT).unwrap();
        assert!((v.value.re - k).abs() < 1e-8 * k);
    }

    #[test]
    fn gaussian_transform() {
        // psi = pi^{-1/4} e^{-p^2/2}  =>  Psi = pi^{-1/4} e^{-x^2/2}
        let s = StateSpec::gaussian(1.0, 0.0, 0.0).unwrap();
        for &x in &[0.0, 0.7, 2.0] {
            let v = position_amplitude(&s, PhaseMode::Exact, &NAT, x, &cfg()).unwrap();
            assert!(
                (v.value.re - PI.powf(-0.25) * (-x * x / 2.0).exp()).abs() < 1e-11,
                "x={x}"
            );
        }
    }
}
