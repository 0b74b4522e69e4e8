use num_complex::Complex64;

use super::{try_integrate_interval, try_integrate_real_line_at, IntegralResult, QuadratureConfig};
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::state::{Measure, StateSpec};

/// `<a|b>` = `int conj(a(p)) b(p) w(p) dp` with `w` set by `measure`.
///
/// Closed-form pairs are integrated over the whole line in the angle
/// variable; the oscillation hint is taken from the eigen-label separation
/// unless `cfg` already carries one. A sampled state has no amplitude outside
/// its sample range, so pairs involving one are integrated over the common
/// sample range with the sample momenta as breakpoints.
pub fn inner_product(
    a: &StateSpec,
    b: &StateSpec,
    measure: Measure,
    params: &ModelParams,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    let integrand = |p: f64| {
        let w = measure.weight(params, p);
        Ok(a.evaluate(params, p)?.conj() * b.evaluate(params, p)? * w)
    };
    weighted_integral(a, b, params, cfg, integrand)
}

pub fn norm_squared(
    a: &StateSpec,
    measure: Measure,
    params: &ModelParams,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    inner_product(a, a, measure, params, cfg).map(|mut r| {
        r.value.im = 0.0;
        r
    })
}

/// Integrates an arbitrary bilinear integrand built from `a` and `b` over
/// the domain both states are defined on.
pub(crate) fn weighted_integral<F>(
    a: &StateSpec,
    b: &StateSpec,
    params: &ModelParams,
    cfg: &QuadratureConfig,
    integrand: F,
) -> Result<IntegralResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    match support(a, b)? {
        Some((lo, hi, breaks)) => {
            try_integrate_interval(integrand, lo, hi, &breaks, &cfg.without_hint())
        }
        None => {
            let cfg = match (cfg.oscillation_hint, a.xi(), b.xi()) {
                (None, Some(xa), Some(xb)) => cfg.with_hint((xb - xa).abs() / params.min_length()),
                _ => *cfg,
            };
            let mut breaks = a.features();
            breaks.extend(b.features());
            try_integrate_real_line_at(integrand, params, &breaks, &cfg)
        }
    }
}

fn support(a: &StateSpec, b: &StateSpec) -> Result<Option<(f64, f64, Vec<f64>)>> {
    let grids: Vec<_> = [a, b].into_iter().filter_map(StateSpec::as_grid).collect();
    if grids.is_empty() {
        return Ok(None);
    }
    let lo = grids
        .iter()
        .map(|g| g.range().0)
        .fold(f64::NEG_INFINITY, f64::max);
    let hi = grids
        .iter()
        .map(|g| g.range().1)
        .fold(f64::INFINITY, f64::min);
    if !(hi > lo) {
        return Err(Error::InvalidParameter(
            "sampled states have disjoint momentum ranges".into(),
        ));
    }
    let mut breaks: Vec<f64> = grids
        .iter()
        .flat_map(|g| g.nodes().iter().copied())
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    Ok(Some((lo, hi, breaks)))
}
