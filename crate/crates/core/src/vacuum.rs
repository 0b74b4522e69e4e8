//! Vacuum energy density with and without the `(1 + beta p^2)^-3`
//! phase-space weight.
//!
//! The momentum integral is taken over all of three-dimensional momentum
//! space; the solid angle is done analytically, leaving
//! `rho = (1 / (4 pi^2)) int_0^L sqrt(p^2 + m^2) p^2 w(p) dp`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::quadrature::{
    try_integrate_half_line, try_integrate_interval, IntegralResult, QuadratureConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VacuumParams {
    /// Field mass, in momentum units (`c = 1`).
    pub mass: f64,
    /// Upper limit of the radial momentum integral.
    pub cutoff: Option<f64>,
}

impl VacuumParams {
    pub fn new(mass: f64, cutoff: Option<f64>) -> Result<Self> {
        let vp = Self { mass, cutoff };
        vp.validate()?;
        Ok(vp)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass.is_finite() && self.mass >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mass must be finite and >= 0, got {}",
                self.mass
            )));
        }
        if let Some(c) = self.cutoff {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "cutoff must be finite and > 0, got {c}"
                )));
            }
        }
        Ok(())
    }
}

const RADIAL_PREFACTOR: f64 = 1.0 / (4.0 * PI * PI);

pub fn vacuum_energy_density(
    vp: &VacuumParams,
    params: &ModelParams,
    modified: bool,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    vp.validate()?;
    let m2 = vp.mass * vp.mass;
    let integrand = |p: f64| {
        let w = if modified {
            params.deformation(p).powi(-3)
        } else {
            1.0
        };
        Ok(Complex64::new((p * p + m2).sqrt() * p * p * w, 0.0))
    };
    let cfg = cfg.without_hint();
    let r = match (vp.cutoff, modified) {
        (Some(c), _) => try_integrate_interval(integrand, 0.0, c, &[], &cfg)?,
        (None, true) => try_integrate_half_line(integrand, params, &cfg)?,
        (None, false) => {
            return Err(Error::Divergent(
                "the unweighted vacuum energy integral needs a momentum cutoff".into(),
            ))
        }
    };
    Ok(r.scale(RADIAL_PREFACTOR))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceScan {
    pub points: Vec<(f64, IntegralResult)>,
    /// Least-squares slope of `ln rho` against `ln cutoff`.
    pub slope: f64,
}

/// Densities at each cutoff and their log-log growth exponent.
pub fn divergence_scan(
    vp: &VacuumParams,
    params: &ModelParams,
    cutoffs: &[f64],
    modified: bool,
    cfg: &QuadratureConfig,
) -> Result<DivergenceScan> {
    if cutoffs.len() < 4 {
        return Err(Error::InvalidParameter(format!(
            "divergence scan needs at least 4 cutoffs, got {}",
            cutoffs.len()
        )));
    }
    if cutoffs
        .iter()
        .any(|&c| !(c.is_finite() && c > vp.mass && c > 0.0))
    {
        return Err(Error::InvalidParameter(
            "cutoffs must be finite and exceed the mass".into(),
        ));
    }
    let lo = cutoffs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = cutoffs.iter().copied().fold(0.0, f64::max);
    if hi / lo < 100.0 {
        return Err(Error::InvalidParameter(
            "cutoffs must span at least two decades".into(),
        ));
    }
    let points = cutoffs
        .iter()
        .map(|&c| {
            let r = vacuum_energy_density(
                &VacuumParams {
                    cutoff: Some(c),
                    ..*vp
                },
                params,
                modified,
                cfg,
            )?;
            Ok((c, r))
        })
        .collect::<Result<Vec<_>>>()?;
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(|(c, r)| (c.ln(), r.value.re.ln()))
        .collect();
    Ok(DivergenceScan {
        slope: least_squares_slope(&logs),
        points,
    })
}

fn least_squares_slope(xy: &[(f64, f64)]) -> f64 {
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = xy.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xy.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    const NAT: ModelParams = ModelParams::natural();

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn massless_modified_density() {
        // int_0^inf p^3 (1+p^2)^-3 dp = 1/4
        let r = vacuum_energy_density(&VacuumParams::new(0.0, None).unwrap(), &NAT, true, &cfg())
            .unwrap();
        let exact = 1.0 / (16.0 * PI * PI);
        assert!(((r.value.re - exact) / exact).abs() < 1e-10);
        assert!((r.value.re - 0.006_332_6).abs() < 1e-7);
    }

    #[test]
    fn massless_unmodified_quartic_law() {
        for &c in &[0.5, 3.0, 1e3] {
            let r = vacuum_energy_density(
                &VacuumParams::new(0.0, Some(c)).unwrap(),
                &NAT,
                false,
                &cfg(),
            )
            .unwrap();
            let exact = c.powi(4) / (16.0 * PI * PI);
            assert!(((r.value.re - exact) / exact).abs() < 1e-12);
        }
    }

    #[test]
    fn beta_scaling_at_zero_mass() {
        let vp = VacuumParams::new(0.0, None).unwrap();
        let b4 = ModelParams::new(4.0, 1.0).unwrap();
        let r = vacuum_energy_density(&vp, &b4, true, &cfg()).unwrap();
        let exact = 1.0 / (16.0 * PI * PI * 16.0);
        assert!(((r.value.re - exact) / exact).abs() < 1e-10);
    }

    #[test]
    fn unmodified_without_cutoff_is_refused() {
        let e = vacuum_energy_density(&VacuumParams::new(0.0, None).unwrap(), &NAT, false, &cfg())
            .unwrap_err();
        assert!(matches!(e, Error::Divergent(_)));
    }

    #[test]
    fn invalid_inputs() {
        assert!(VacuumParams::new(-1.0, None).is_err());
        assert!(VacuumParams::new(0.0, Some(0.0)).is_err());
        let vp = VacuumParams::new(0.0, None).unwrap();
        assert!(divergence_scan(&vp, &NAT, &[10.0, 20.0, 30.0, 40.0], false, &cfg()).is_err());
        assert!(divergence_scan(&vp, &NAT, &[10.0, 100.0, 1000.0], false, &cfg()).is_err());
    }

    #[test]
    fn scan_slopes() {
        let cutoffs = [10.0, 1e2, 1e3, 1e4];
        let s0 = divergence_scan(
            &VacuumParams::new(0.0, None).unwrap(),
            &NAT,
            &cutoffs,
            false,
            &cfg(),
        )
        .unwrap();
        assert!((s0.slope - 4.0).abs() < 1e-6, "{}", s0.slope);
        let s1 = divergence_scan(
            &VacuumParams::new(1.0, None).unwrap(),
            &NAT,
            &cutoffs,
            false,
            &cfg(),
        )
        .unwrap();
        assert!(s1.slope > 3.99 && s1.slope < 4.01, "{}", s1.slope);
    }

    #[test]
    fn modified_cutoff_sequence_converges() {
        let vp = VacuumParams::new(0.0, None).unwrap();
        let full = vacuum_energy_density(&vp, &NAT, true, &cfg())
            .unwrap()
            .value
            .re;
        let mut prev = 0.0;
        for &c in &[1.0, 10.0, 100.0, 1000.0] {
            let r = vacuum_energy_density(
                &VacuumParams {
                    cutoff: Some(c),
                    ..vp
                },
                &NAT,
                true,
                &cfg(),
            )
            .unwrap()
            .value
            .re;
            assert!(r > prev && r < full);
            // tail: int_c^inf p^3 (1+p^2)^-3 dp = 1/(2u) - 1/(4u^2), u = 1 + c^2
            let u = 1.0 + c * c;
            let tail = RADIAL_PREFACTOR * (0.5 / u - 0.25 / (u * u));
            assert!(((full - r) - tail).abs() <= 1e-10 * full, "c={c}");
            prev = r;
        }
    }
}
