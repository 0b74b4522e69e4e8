//! Closed-form momentum-space states and their pointwise evaluation.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// A momentum-space wavefunction.
///
/// The three eigen-type variants share the phase
/// `exp[-i xi arctan(sqrt(beta) p) / (hbar sqrt(beta))]` and differ only in
/// their real envelope.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    /// Eigenstate of the symmetrized position operator, envelope `(1+beta p^2)^(-1/2)`.
    SymEigen { xi: f64 },
    /// Eigenstate of the KMM position operator, constant envelope.
    KmmEigen { xi: f64 },
    /// Maximally localized state, envelope `(1+beta p^2)^(-1)`.
    MaxLoc { xi: f64 },
    /// Normalized Gaussian `pi^(-1/4) sigma^(-1/2) exp(-(p-p0)^2/(2 sigma^2)) exp(-i p x0/hbar)`.
    Gaussian { sigma: f64, p0: f64, x0: f64 },
    /// Sampled amplitude, interpolated between samples.
    Grid(GridState),
}

impl StateSpec {
    pub fn sym_eigen(xi: f64) -> Self {
        StateSpec::SymEigen { xi }
    }

    pub fn kmm_eigen(xi: f64) -> Self {
        StateSpec::KmmEigen { xi }
    }

    pub fn max_loc(xi: f64) -> Self {
        StateSpec::MaxLoc { xi }
    }

    pub fn gaussian(sigma: f64, p0: f64, x0: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gaussian width must be finite and > 0, got {sigma}"
            )));
        }
        if !(p0.is_finite() && x0.is_finite()) {
            return Err(Error::InvalidParameter(
                "gaussian centre must be finite".into(),
            ));
        }
        Ok(StateSpec::Gaussian { sigma, p0, x0 })
    }

    /// Momenta around which the amplitude varies on a scale that may be
    /// narrower than the default integration panels.
    pub fn features(&self) -> Vec<f64> {
        match *self {
            StateSpec::Gaussian { sigma, p0, .. } => {
                [-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0]
                    .iter()
                    .map(|k| p0 + k * sigma)
                    .collect()
            }
            _ => Vec::new(),
        }
    }

    /// Position label of the eigen-type variants.
    pub fn xi(&self) -> Option<f64> {
        match *self {
            StateSpec::SymEigen { xi } | StateSpec::KmmEigen { xi } | StateSpec::MaxLoc { xi } => {
                Some(xi)
            }
            _ => None,
        }
    }

    /// Same family, moved to a new position label. `None` for non eigen-type states.
    pub fn with_xi(&self, xi: f64) -> Option<Self> {
        match self {
            StateSpec::SymEigen { .. } => Some(StateSpec::SymEigen { xi }),
            StateSpec::KmmEigen { .. } => Some(StateSpec::KmmEigen { xi }),
            StateSpec::MaxLoc { .. } => Some(StateSpec::MaxLoc { xi }),
            _ => None,
        }
    }

    pub fn as_grid(&self) -> Option<&GridState> {
        match self {
            StateSpec::Grid(g) => Some(g),
            _ => None,
        }
    }

    /// `psi(p)`.
    pub fn evaluate(&self, params: &ModelParams, p: f64) -> Result<Complex64> {
        Ok(self.jet(params, p)?.value)
    }

    /// `d psi / dp`. Analytic for closed forms; for grid states this is the
    /// derivative of the interpolant, whose node slopes are second-order
    /// finite differences.
    pub fn evaluate_derivative(&self, params: &ModelParams, p: f64) -> Result<Complex64> {
        Ok(self.jet(params, p)?.deriv)
    }

    /// Value and first derivative at `p`.
    pub fn jet(&self, params: &ModelParams, p: f64) -> Result<Jet> {
        match self {
            StateSpec::Grid(g) => g.jet(p),
            StateSpec::Gaussian { sigma, p0, x0 } => {
                let hbar = params.hbar();
                let d = p - p0;
                let env =
                    (PI.sqrt() * sigma).sqrt().recip() * (-d * d / (2.0 * sigma * sigma)).exp();
                let value = Complex64::from_polar(env, -p * x0 / hbar);
                let log_deriv = Complex64::new(-d / (sigma * sigma), -x0 / hbar);
                Ok(Jet {
                    value,
                    deriv: value * log_deriv,
                })
            }
            _ => {
                let xi = self.xi().expect("eigen-type variant");
                let (env, env_deriv) = self.envelope(params, p);
                let phase = eigen_phase(params, xi, p);
                // d/dp of the phase exponent: -i xi / (hbar (1 + beta p^2)).
                let phase_rate = Complex64::new(0.0, -xi / (params.hbar() * params.deformation(p)));
                let value = phase * env;
                Ok(Jet {
                    value,
                    deriv: phase * env_deriv + value * phase_rate,
                })
            }
        }
    }

    /// Real envelope of an eigen-type state and its p-derivative. Panics for
    /// other variants.
    pub fn envelope(&self, params: &ModelParams, p: f64) -> (f64, f64) {
        let beta = params.beta();
        let w = params.deformation(p);
        match self {
            StateSpec::SymEigen { .. } => {
                let n = sym_norm(params);
                let a = n / w.sqrt();
                (a, -beta * p * a / w)
            }
            StateSpec::MaxLoc { .. } => {
                let n = maxloc_norm(params);
                let a = n / w;
                (a, -2.0 * beta * p * a / w)
            }
            StateSpec::KmmEigen { .. } => (sym_norm(params), 0.0),
            _ => panic!("envelope is defined for eigen-type states only"),
        }
    }
}

/// `sqrt(sqrt(beta)/pi)`, shared by the symmetrized and KMM eigenstates.
pub fn sym_norm(params: &ModelParams) -> f64 {
    (params.sqrt_beta() / PI).sqrt()
}

/// `sqrt(2 sqrt(beta)/pi)`.
pub fn maxloc_norm(params: &ModelParams) -> f64 {
    (2.0 * params.sqrt_beta() / PI).sqrt()
}

/// `exp[-i xi arctan(sqrt(beta) p) / (hbar sqrt(beta))]`.
pub fn eigen_phase(params: &ModelParams, xi: f64, p: f64) -> Complex64 {
    Complex64::cis(-xi * params.angle(p) / params.min_length())
}

/// Value and first derivative of a function at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: Complex64,
    pub deriv: Complex64,
}

impl Jet {
    /// Jet of `p * f(p)` given the jet of `f`.
    pub fn times_p(self, p: f64) -> Jet {
        Jet {
            value: self.value * p,
            deriv: self.value + self.deriv * p,
        }
    }
}

/// Which inner product on momentum space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    /// Lebesgue measure `dp`.
    Standard,
    /// `dp / (1 + beta p^2)`.
    Kmm,
}

impl Measure {
    pub fn weight(self, params: &ModelParams, p: f64) -> f64 {
        match self {
            Measure::Standard => 1.0,
            Measure::Kmm => params.deformation(p).recip(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Measure::Standard => "standard",
            Measure::Kmm => "kmm",
        }
    }
}

/// A sampled amplitude on strictly increasing momenta.
///
/// Between samples the amplitude is a piecewise cubic Hermite interpolant
/// whose node slopes come from three-point differences, so the interpolant is
/// continuously differentiable. Evaluation outside the sampled range is an
/// error.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    p: Vec<f64>,
    values: Vec<Complex64>,
    slopes: Vec<Complex64>,
}

impl GridState {
    pub fn new(samples: Vec<(f64, Complex64)>) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::InvalidParameter(format!(
                "grid state needs at least 3 samples, got {}",
                samples.len()
            )));
        }
        let (p, values): (Vec<f64>, Vec<Complex64>) = samples.into_iter().unzip();
        if p.iter().any(|x| !x.is_finite()) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "grid samples must be finite".into(),
            ));
        }
        if p.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "grid momenta must be strictly increasing".into(),
            ));
        }
        let slopes = node_slopes(&p, &values);
        Ok(Self { p, values, slopes })
    }

    /// Samples `f` on `count` equally spaced momenta in `[lo, hi]`.
    pub fn sample(lo: f64, hi: f64, count: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        if count < 3 || !(hi > lo) {
            return Err(Error::InvalidParameter(format!(
                "cannot sample {count} points on [{lo}, {hi}]"
            )));
        }
        let h = (hi - lo) / (count - 1) as f64;
        let samples = (0..count)
            .map(|i| {
                let p = if i == count - 1 {
                    hi
                } else {
                    lo + h * i as f64
                };
                (p, f(p))
            })
            .collect();
        Self::new(samples)
    }

    pub fn range(&self) -> (f64, f64) {
        (self.p[0], *self.p.last().unwrap())
    }

    pub fn nodes(&self) -> &[f64] {
        &self.p
    }

    pub fn jet(&self, p: f64) -> Result<Jet> {
        let (lo, hi) = self.range();
        if !(p >= lo && p <= hi) {
            return Err(Error::OutOfRange { p, lo, hi });
        }
        let i = self
            .p
            .partition_point(|&x| x <= p)
            .clamp(1, self.p.len() - 1)
            - 1;
        let h = self.p[i + 1] - self.p[i];
        let s = (p - self.p[i]) / h;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);

        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        let value = y0 * h00 + m0 * h10 + y1 * h01 + m1 * h11;

        let d00 = 6.0 * s2 - 6.0 * s;
        let d10 = 3.0 * s2 - 4.0 * s + 1.0;
        let d01 = -6.0 * s2 + 6.0 * s;
        let d11 = 3.0 * s2 - 2.0 * s;
        let deriv = (y0 * d00 + m0 * d10 + y1 * d01 + m1 * d11) / h;
        Ok(Jet { value, deriv })
    }
}

fn node_slopes(p: &[f64], y: &[Complex64]) -> Vec<Complex64> {
    let n = p.len();
    let mut m = vec![Complex64::new(0.0, 0.0); n];
    for i in 1..n - 1 {
        let (h0, h1) = (p[i] - p[i - 1], p[i + 1] - p[i]);
        m[i] =
            ((y[i + 1] - y[i]) * (h0 * h0) + (y[i] - y[i - 1]) * (h1 * h1)) / (h0 * h1 * (h0 + h1));
    }
    // one-sided three-point differences at the ends
    let one_sided = |x0: f64, x1: f64, x2: f64, f0: Complex64, f1: Complex64, f2: Complex64| {
        let (h0, h1) = (x1 - x0, x2 - x1);
        f0 * (-(2.0 * h0 + h1) / (h0 * (h0 + h1)))
            + f1 * ((h0 + h1) / (h0 * h1))
            + f2 * (-h0 / (h1 * (h0 + h1)))
    };
    m[0] = one_sided(p[0], p[1], p[2], y[0], y[1], y[2]);
    // mirror the grid so the same formula yields the right-end slope
    m[n - 1] = -one_sided(
        -p[n - 1],
        -p[n - 2],
        -p[n - 3],
        y[n - 1],
        y[n - 2],
        y[n - 3],
    );
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    const NAT: ModelParams = ModelParams::natural();

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn sym_eigen_at_origin_is_prefactor() {
        let v = StateSpec::sym_eigen(0.0).evaluate(&NAT, 0.0).unwrap();
        assert!(close(
            v,
            Complex64::new(0.564_189_583_547_756_3, 0.0),
            1e-15
        ));
    }

    #[test]
    fn maxloc_at_unit_momentum() {
        let v = StateSpec::max_loc(0.0).evaluate(&NAT, 1.0).unwrap();
        assert!(close(
            v,
            Complex64::new((2.0 / PI).sqrt() / 2.0, 0.0),
            1e-15
        ));
        assert!((v.re - 0.398_942_3).abs() < 1e-7);
    }

    #[test]
    fn sym_eigen_phase_quarter_turn() {
        // 0.5641896/sqrt(2) * exp(-i pi/2)
        let v = StateSpec::sym_eigen(2.0).evaluate(&NAT, 1.0).unwrap();
        let expected = Complex64::new(0.0, -(1.0 / PI).sqrt() / 2f64.sqrt());
        assert!(close(v, expected, 1e-15), "{v}");
    }

    #[test]
    fn derivative_examples() {
        let d = StateSpec::sym_eigen(0.0)
            .evaluate_derivative(&NAT, 0.0)
            .unwrap();
        assert_eq!(d, Complex64::new(0.0, 0.0));
        let d = StateSpec::max_loc(0.0)
            .evaluate_derivative(&NAT, 1.0)
            .unwrap();
        assert!(close(
            d,
            Complex64::new(-2.0 / 4.0 * (2.0 / PI).sqrt(), 0.0),
            1e-15
        ));
    }

    #[test]
    fn kmm_eigen_has_constant_modulus() {
        let params = ModelParams::new(2.5, 0.7).unwrap();
        let s = StateSpec::kmm_eigen(1.3);
        let n = sym_norm(&params);
        for k in -200..=200 {
            let p = k as f64 * 0.37;
            let v = s.evaluate(&params, p).unwrap();
            assert!((v.norm() - n).abs() <= 1e-15 * n);
        }
    }

    #[test]
    fn envelopes_decay() {
        let params = ModelParams::new(0.3, 1.7).unwrap();
        let sym = StateSpec::sym_eigen(-2.0);
        let ml = StateSpec::max_loc(4.0);
        for k in -500..=500 {
            let p = k as f64 * 0.1;
            let w = params.deformation(p);
            let a = sym.evaluate(&params, p).unwrap().norm();
            let b = ml.evaluate(&params, p).unwrap().norm();
            assert!(a <= sym_norm(&params) / w.sqrt() * (1.0 + 1e-14));
            assert!(b <= maxloc_norm(&params) / w * (1.0 + 1e-14));
        }
    }

    #[test]
    fn continuity_on_dense_grid() {
        let params = ModelParams::new(1.7, 0.9).unwrap();
        let states = [
            StateSpec::sym_eigen(3.0),
            StateSpec::kmm_eigen(-1.0),
            StateSpec::max_loc(0.5),
            StateSpec::gaussian(0.8, 0.2, -1.0).unwrap(),
        ];
        let h = 1e-4;
        for s in &states {
            let mut prev = s.evaluate(&params, -20.0).unwrap();
            let mut p = -20.0;
            while p < 20.0 {
                p += h;
                let v = s.evaluate(&params, p).unwrap();
                assert!(v.is_finite());
                let slope = s.evaluate_derivative(&params, p).unwrap().norm();
                assert!((v - prev).norm() <= 2.0 * h * (slope + 1.0));
                prev = v;
            }
        }
    }

    #[test]
    fn derivative_matches_central_differences() {
        let h = 1e-5;
        for &beta in &[0.25, 1.0, 4.0] {
            let params = ModelParams::new(beta, 1.3).unwrap();
            let states = [
                StateSpec::sym_eigen(2.0 * params.min_length()),
                StateSpec::kmm_eigen(-3.0 * params.min_length()),
                StateSpec::max_loc(0.7 * params.min_length()),
                StateSpec::gaussian(params.momentum_scale(), 0.3, 0.4).unwrap(),
            ];
            for s in &states {
                for k in -100..=100 {
                    let p = k as f64 * 0.1 / params.sqrt_beta();
                    let fd = (s.evaluate(&params, p + h).unwrap()
                        - s.evaluate(&params, p - h).unwrap())
                        / (2.0 * h);
                    let d = s.evaluate_derivative(&params, p).unwrap();
                    let scale = d.norm().max(s.evaluate(&params, p).unwrap().norm());
                    assert!((fd - d).norm() <= 1e-7 * scale, "{s:?} p={p}: {fd} vs {d}");
                }
            }
        }
    }

    #[test]
    fn fd_cross_check_at_point_seven() {
        let h = 1e-5;
        let s = StateSpec::max_loc(1.0);
        let fd =
            (s.evaluate(&NAT, 0.7 + h).unwrap() - s.evaluate(&NAT, 0.7 - h).unwrap()) / (2.0 * h);
        let d = s.evaluate_derivative(&NAT, 0.7).unwrap();
        assert!((fd - d).norm() <= 1e-8 * d.norm());
    }

    #[test]
    fn grid_rejects_bad_samples() {
        let c = Complex64::new(1.0, 0.0);
        assert!(GridState::new(vec![(0.0, c), (1.0, c)]).is_err());
        assert!(GridState::new(vec![(0.0, c), (1.0, c), (1.0, c)]).is_err());
        assert!(GridState::new(vec![(0.0, c), (2.0, c), (1.0, c)]).is_err());
    }

    #[test]
    fn grid_reproduces_quadratics_and_refuses_extrapolation() {
        let f = |p: f64| Complex64::new(p * p - 2.0 * p, 0.5 * p);
        let g = GridState::sample(-2.0, 2.0, 41, f).unwrap();
        for k in 0..=400 {
            let p = -2.0 + 0.01 * k as f64;
            let j = g.jet(p).unwrap();
            assert!((j.value - f(p)).norm() < 1e-12, "p={p}");
            assert!((j.deriv - Complex64::new(2.0 * p - 2.0, 0.5)).norm() < 1e-10);
        }
        assert!(matches!(g.jet(2.0 + 1e-9), Err(Error::OutOfRange { .. })));
        assert!(matches!(g.jet(-2.1), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn grid_interpolation_converges() {
        // node slopes are second order, so the interpolant error is O(h^3)
        let s = StateSpec::gaussian(1.0, 0.0, 0.0).unwrap();
        let max_err = |count: usize| {
            let g = GridState::sample(-8.0, 8.0, count, |p| s.evaluate(&NAT, p).unwrap()).unwrap();
            (0..1000)
                .map(|k| {
                    let p = -7.9 + 0.0158 * k as f64;
                    (g.jet(p).unwrap().value - s.evaluate(&NAT, p).unwrap()).norm()
                })
                .fold(0.0, f64::max)
        };
        let coarse = max_err(401);
        let fine = max_err(801);
        assert!(fine < 1e-6, "{fine}");
        assert!(coarse / fine > 6.0, "{coarse} / {fine}");
    }
}
