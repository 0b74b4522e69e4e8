//! Position and momentum operators acting on momentum-space states, and the
//! checks built on them: commutator, symmetry under each measure, and the
//! uncertainty bound.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ResultExt};
use crate::params::ModelParams;
use crate::quadrature::inner::weighted_integral;
use crate::quadrature::{IntegralResult, QuadratureConfig};
use crate::state::{GridState, Jet, Measure, StateSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorSpec {
    /// `i hbar (d/dp + beta p d/dp p)` = `i hbar [(1 + beta p^2) d/dp + beta p]`.
    XSym,
    /// `i hbar (1 + beta p^2) d/dp`.
    XKmm,
    P,
    PSquared,
    /// Multiplication by `1 + beta p^2`.
    OneBetaP2,
}

impl OperatorSpec {
    pub fn name(self) -> &'static str {
        match self {
            OperatorSpec::XSym => "x-sym",
            OperatorSpec::XKmm => "x-kmm",
            OperatorSpec::P => "p",
            OperatorSpec::PSquared => "p-squared",
            OperatorSpec::OneBetaP2 => "one-beta-p2",
        }
    }
}

/// `(O psi)(p)` from the value and derivative of `psi` at `p`.
pub fn apply_jet(op: OperatorSpec, params: &ModelParams, p: f64, jet: Jet) -> Complex64 {
    let i_hbar = Complex64::new(0.0, params.hbar());
    let w = params.deformation(p);
    match op {
        OperatorSpec::XSym => i_hbar * (jet.deriv * w + jet.value * (params.beta() * p)),
        OperatorSpec::XKmm => i_hbar * jet.deriv * w,
        OperatorSpec::P => jet.value * p,
        OperatorSpec::PSquared => jet.value * (p * p),
        OperatorSpec::OneBetaP2 => jet.value * w,
    }
}

pub fn apply(
    op: OperatorSpec,
    state: &StateSpec,
    params: &ModelParams,
    p: f64,
) -> Result<Complex64> {
    Ok(apply_jet(op, params, p, state.jet(params, p)?))
}

/// `([X, p] psi)(p) - i hbar (1 + beta p^2) psi(p)` for a position operator `X`.
pub fn commutator_residual(
    position: OperatorSpec,
    state: &StateSpec,
    params: &ModelParams,
    p: f64,
) -> Result<Complex64> {
    if !matches!(position, OperatorSpec::XSym | OperatorSpec::XKmm) {
        return Err(Error::InvalidParameter(format!(
            "commutator check needs a position operator, got {}",
            position.name()
        )));
    }
    let jet = state.jet(params, p)?;
    let x_of_p_psi = apply_jet(position, params, p, jet.times_p(p));
    let p_of_x_psi = apply_jet(position, params, p, jet) * p;
    let expected = Complex64::new(0.0, params.hbar() * params.deformation(p)) * jet.value;
    Ok(x_of_p_psi - p_of_x_psi - expected)
}

/// `<psi|O phi> - <O psi|phi>` under `measure`, integrated as one difference.
pub fn symmetry_defect(
    op: OperatorSpec,
    measure: Measure,
    psi: &StateSpec,
    phi: &StateSpec,
    params: &ModelParams,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    weighted_integral(psi, phi, params, cfg, |p| {
        let a = psi.jet(params, p)?;
        let b = phi.jet(params, p)?;
        let lhs = a.value.conj() * apply_jet(op, params, p, b);
        let rhs = apply_jet(op, params, p, a).conj() * b.value;
        Ok((lhs - rhs) * measure.weight(params, p))
    })
}

/// `<psi|O phi>` under `measure`.
pub fn matrix_element(
    op: OperatorSpec,
    measure: Measure,
    psi: &StateSpec,
    phi: &StateSpec,
    params: &ModelParams,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    weighted_integral(psi, phi, params, cfg, |p| {
        let b = phi.jet(params, p)?;
        Ok(psi.evaluate(params, p)?.conj()
            * apply_jet(op, params, p, b)
            * measure.weight(params, p))
    })
}

/// What integration by parts predicts for the KMM operator under the
/// standard measure: `-2 i hbar beta <psi|p|phi>`.
pub fn kmm_standard_defect_prediction(
    psi: &StateSpec,
    phi: &StateSpec,
    params: &ModelParams,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    let r = matrix_element(OperatorSpec::P, Measure::Standard, psi, phi, params, cfg)?;
    let factor = Complex64::new(0.0, -2.0 * params.hbar() * params.beta());
    Ok(IntegralResult {
        value: r.value * factor,
        error_estimate: r.error_estimate * factor.norm(),
        evaluations: r.evaluations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyReport {
    pub mean_x: f64,
    pub mean_p: f64,
    pub mean_p2: f64,
    pub delta_x: f64,
    pub delta_p: f64,
    /// `delta_x * delta_p`
    pub lhs: f64,
    /// `(hbar/2)(1 + beta <p^2>)`
    pub rhs: f64,
    pub errors: UncertaintyErrors,
}

/// Propagated quadrature error estimates for each report field.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct UncertaintyErrors {
    pub mean_x: f64,
    pub mean_p: f64,
    pub mean_p2: f64,
    pub delta_x: f64,
    pub delta_p: f64,
    pub lhs: f64,
    pub rhs: f64,
}

impl UncertaintyReport {
    /// `lhs - rhs`; non-negative for every physical state.
    pub fn slack(&self) -> f64 {
        self.lhs - self.rhs
    }
}

/// Moments of `X_sym` and `p` for `state` and the uncertainty bound they
/// must satisfy. Moments are normalized by the state's norm, and the
/// position spread is `||(X - <X>) psi||`.
pub fn gup_check(
    state: &StateSpec,
    params: &ModelParams,
    cfg: &QuadratureConfig,
) -> Result<UncertaintyReport> {
    let moment = |name: &str, f: &dyn Fn(f64, Jet) -> Complex64| {
        weighted_integral(state, state, params, cfg, |p| {
            Ok(f(p, state.jet(params, p)?))
        })
        .context_with(|| format!("moment {name}"))
    };

    let norm = moment("<1>", &|_, j| Complex64::new(j.value.norm_sqr(), 0.0))
        .map_err(|e| e.context("state is not normalizable"))?;
    let n = norm.value.re;
    if !(n > 0.0) {
        return Err(Error::InvalidParameter("state has zero norm".into()));
    }

    let mp = moment("<p>", &|p, j| Complex64::new(p * j.value.norm_sqr(), 0.0))?;
    let mean_p = mp.value.re / n;
    let mp2 = moment("<p^2>", &|p, j| {
        Complex64::new(p * p * j.value.norm_sqr(), 0.0)
    })?;
    let mean_p2 = mp2.value.re / n;
    let vp = moment("<(p-<p>)^2>", &|p, j| {
        let d = p - mean_p;
        Complex64::new(d * d * j.value.norm_sqr(), 0.0)
    })?;
    let delta_p = (vp.value.re / n).max(0.0).sqrt();

    let mx = moment("<X>", &|p, j| {
        j.value.conj() * apply_jet(OperatorSpec::XSym, params, p, j)
    })?;
    let mean_x = mx.value.re / n;
    let vx = moment("<(X-<X>)^2>", &|p, j| {
        let centred = apply_jet(OperatorSpec::XSym, params, p, j) - j.value * mean_x;
        Complex64::new(centred.norm_sqr(), 0.0)
    })?;
    let delta_x = (vx.value.re / n).max(0.0).sqrt();

    let lhs = delta_x * delta_p;
    let rhs = 0.5 * params.hbar() * (1.0 + params.beta() * mean_p2);

    // first-order propagation, including the normalization error
    let rel_n = norm.error_estimate / n;
    let err_of_ratio = |r: &IntegralResult| r.error_estimate / n + (r.value.re / n).abs() * rel_n;
    let err_sqrt = |r: &IntegralResult, root: f64| {
        if root > 0.0 {
            err_of_ratio(r) / (2.0 * root)
        } else {
            err_of_ratio(r).sqrt()
        }
    };
    let e_dx = err_sqrt(&vx, delta_x);
    let e_dp = err_sqrt(&vp, delta_p);
    let errors = UncertaintyErrors {
        mean_x: err_of_ratio(&mx),
        mean_p: err_of_ratio(&mp),
        mean_p2: err_of_ratio(&mp2),
        delta_x: e_dx,
        delta_p: e_dp,
        lhs: e_dx * delta_p + delta_x * e_dp,
        rhs: 0.5 * params.hbar() * params.beta() * err_of_ratio(&mp2),
    };

    Ok(UncertaintyReport {
        mean_x,
        mean_p,
        mean_p2,
        delta_x,
        delta_p,
        lhs,
        rhs,
        errors,
    })
}

/// Normalized odd state `c p exp(-p^2 / (2 sigma^2))`, sampled on
/// `|p| <= 12 sigma` with `count` points.
pub fn odd_gaussian_grid(sigma: f64, count: usize) -> Result<StateSpec> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "odd gaussian width must be > 0, got {sigma}"
        )));
    }
    let c = (2.0 / (sigma.powi(3) * std::f64::consts::PI.sqrt())).sqrt();
    let half = 12.0 * sigma;
    GridState::sample(-half, half, count, |p| {
        Complex64::new(c * p * (-p * p / (2.0 * sigma * sigma)).exp(), 0.0)
    })
    .map(StateSpec::Grid)
}

/// Named test states for the symmetry checks: Gaussians of different widths,
/// shifted centres and phases, and one odd sampled state so that
/// `<psi|p|phi>` can be non-zero.
pub fn symmetry_corpus(params: &ModelParams) -> Result<Vec<(&'static str, StateSpec)>> {
    let s = params.momentum_scale();
    let l = params.min_length();
    Ok(vec![
        ("gauss(1,0,0)", StateSpec::gaussian(s, 0.0, 0.0)?),
        ("gauss(2,0,0)", StateSpec::gaussian(2.0 * s, 0.0, 0.0)?),
        ("gauss(1,0.5,0)", StateSpec::gaussian(s, 0.5 * s, 0.0)?),
        (
            "gauss(0.7,-0.4,0.8)",
            StateSpec::gaussian(0.7 * s, -0.4 * s, 0.8 * l)?,
        ),
        ("grid:p*gauss(1)", odd_gaussian_grid(s, 2401)?),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    const NAT: ModelParams = ModelParams::natural();

    #[test]
    fn eigenvalue_equations() {
        for &xi in &[0.0, 1.0, -3.7] {
            let s = StateSpec::sym_eigen(xi);
            let k = StateSpec::kmm_eigen(xi);
            for i in 0..=200 {
                let p = -10.0 + 0.1 * i as f64;
                let a = apply(OperatorSpec::XSym, &s, &NAT, p).unwrap();
                assert!((a - s.evaluate(&NAT, p).unwrap() * xi).norm() <= 1e-14);
                let b = apply(OperatorSpec::XKmm, &k, &NAT, p).unwrap();
                assert!((b - k.evaluate(&NAT, p).unwrap() * xi).norm() <= 1e-14);
            }
        }
    }

    #[test]
    fn momentum_at_origin() {
        let g = StateSpec::gaussian(1.0, 0.0, 0.0).unwrap();
        assert_eq!(
            apply(OperatorSpec::P, &g, &NAT, 0.0).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn commutator_identity() {
        let g = StateSpec::gaussian(1.0, 0.0, 0.0).unwrap();
        let m = StateSpec::max_loc(2.0);
        for op in [OperatorSpec::XSym, OperatorSpec::XKmm] {
            assert!(commutator_residual(op, &g, &NAT, 0.5).unwrap().norm() <= 1e-12);
            assert!(commutator_residual(op, &m, &NAT, -1.3).unwrap().norm() <= 1e-12);
        }
        assert!(commutator_residual(OperatorSpec::P, &g, &NAT, 0.5).is_err());
    }

    #[test]
    fn maxloc_saturates_bound() {
        let cfg = QuadratureConfig::default();
        for &xi in &[0.0, 5.0] {
            let r = gup_check(&StateSpec::max_loc(xi), &NAT, &cfg).unwrap();
            assert!((r.delta_x - 1.0).abs() < 1e-6, "{r:?}");
            assert!((r.delta_p - 1.0).abs() < 1e-6);
            assert!((r.lhs - 1.0).abs() < 1e-6);
            assert!((r.rhs - 1.0).abs() < 1e-6);
            assert!((r.mean_x - xi).abs() < 1e-8);
            assert!(r.mean_p.abs() < 1e-10);
        }
    }

    #[test]
    fn gaussian_mean_momentum() {
        let cfg = QuadratureConfig::default();
        let g = StateSpec::gaussian(1.0, 0.5, 0.3).unwrap();
        let r = gup_check(&g, &NAT, &cfg).unwrap();
        // |psi|^2 has variance sigma^2 / 2
        assert!((r.mean_p - 0.5).abs() < 1e-10);
        assert!((r.delta_p - 0.5f64.sqrt()).abs() < 1e-10);
        assert!(r.slack() >= -1e-9);
    }

    #[test]
    fn sym_eigen_has_divergent_momentum_moment() {
        let cfg = QuadratureConfig {
            max_subdivisions: 300,
            ..Default::default()
        };
        let e = gup_check(&StateSpec::sym_eigen(0.0), &NAT, &cfg).unwrap_err();
        assert!(e.is_numerical());
        assert!(e.to_string().contains("<p^2>"), "{e}");
    }

    #[test]
    fn odd_grid_is_normalized() {
        let cfg = QuadratureConfig::default();
        let s = odd_gaussian_grid(1.0, 2401).unwrap();
        let n = crate::quadrature::norm_squared(&s, Measure::Standard, &NAT, &cfg).unwrap();
        assert!((n.value.re - 1.0).abs() < 1e-9, "{}", n.value.re);
    }
}
