//! Adaptive 7/15-point Gauss-Kronrod integration on a finite interval.

#![allow(clippy::excessive_precision)] // published 30-digit tables

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use super::{IntegralResult, QuadratureConfig};
use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub(crate) struct Panel {
    pub a: f64,
    pub b: f64,
    pub value: Complex64,
    pub error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // Largest error first; ties go to the leftmost panel.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// One 15-point Kronrod estimate with `|K15 - G7|` as the error.
pub(crate) fn gk15<F>(f: &F, a: f64, b: f64) -> Result<Panel>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = checked(f, centre)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = checked(f, centre - dx)? + checked(f, centre + dx)?;
        kronrod += sum * WGK[j];
        if j % 2 == 1 {
            gauss += sum * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    Ok(Panel { a, b, value, error })
}

fn checked<F>(f: &F, x: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let v = f(x)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Divergent(format!("integrand is not finite at {x}")))
    }
}

/// Adaptive bisection starting from the given breakpoints (sorted, at least two).
pub(crate) fn adaptive<F>(
    f: &F,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    debug_assert!(breakpoints.len() >= 2);
    let mut heap = BinaryHeap::with_capacity(cfg.max_subdivisions.max(breakpoints.len()) + 1);
    let mut evaluations = 0usize;
    for w in breakpoints.windows(2) {
        if w[1] > w[0] {
            heap.push(gk15(f, w[0], w[1])?);
            evaluations += 15;
        }
    }
    if heap.is_empty() {
        return Ok(IntegralResult {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            evaluations,
        });
    }

    loop {
        let (value, error) = totals(&heap);
        if error <= cfg.target(value.norm()) {
            return Ok(IntegralResult {
                value,
                error_estimate: error,
                evaluations,
            });
        }
        let worst = *heap.peek().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        let too_narrow = !(mid > worst.a && mid < worst.b)
            || (worst.b - worst.a) <= 64.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs());
        if heap.len() >= cfg.max_subdivisions || too_narrow {
            return Err(Error::Convergence {
                best: value,
                error_estimate: error,
                evaluations,
            });
        }
        heap.pop();
        heap.push(gk15(f, worst.a, mid)?);
        heap.push(gk15(f, mid, worst.b)?);
        evaluations += 30;
    }
}

// Sum in interval order so the result does not depend on heap layout.
fn totals(heap: &BinaryHeap<Panel>) -> (Complex64, f64) {
    let mut panels: Vec<&Panel> = heap.iter().collect();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    panels
        .iter()
        .fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), p| {
            (v + p.value, e + p.error)
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_kronrod_weights_integrate_constants() {
        let kw: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        let gw: f64 = 2.0 * WG[..3].iter().sum::<f64>() + WG[3];
        assert!((kw - 2.0).abs() < 1e-15);
        assert!((gw - 2.0).abs() < 1e-15);
    }

    #[test]
    fn single_panel_is_exact_for_polynomials() {
        let f = |x: f64| Ok(Complex64::new(x.powi(13) + 3.0 * x.powi(4), x.powi(6)));
        let p = gk15(&f, -1.0, 2.0).unwrap();
        let exact_re = (2f64.powi(14) - 1.0) / 14.0 + 3.0 * (32.0 + 1.0) / 5.0;
        let exact_im = (128.0 + 1.0) / 7.0;
        assert!((p.value.re - exact_re).abs() < 1e-11 * exact_re);
        assert!((p.value.im - exact_im).abs() < 1e-13 * exact_im);
    }
}
