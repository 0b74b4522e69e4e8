//! Physical constants that fix every scale in the model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deformation strength `beta` (inverse momentum squared) and the reduced
/// Planck constant `hbar`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    beta: f64,
    hbar: f64,
}

impl ModelParams {
    pub fn new(beta: f64, hbar: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "beta must be finite and > 0, got {beta}"
            )));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "hbar must be finite and > 0, got {hbar}"
            )));
        }
        Ok(Self { beta, hbar })
    }

    /// Natural units, `beta = hbar = 1`.
    pub const fn natural() -> Self {
        Self {
            beta: 1.0,
            hbar: 1.0,
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn sqrt_beta(&self) -> f64 {
        self.beta.sqrt()
    }

    /// Minimal length `hbar * sqrt(beta)`; also the natural unit of `xi` and `x`.
    pub fn min_length(&self) -> f64 {
        self.hbar * self.beta.sqrt()
    }

    /// Momentum spread `1/sqrt(beta)` at which the minimal length is reached.
    pub fn momentum_scale(&self) -> f64 {
        1.0 / self.beta.sqrt()
    }

    /// `1 + beta p^2`.
    #[inline]
    pub fn deformation(&self, p: f64) -> f64 {
        1.0 + self.beta * p * p
    }

    /// `arctan(sqrt(beta) p)`, the variable in which eigenstate phases are linear.
    #[inline]
    pub fn angle(&self, p: f64) -> f64 {
        (self.sqrt_beta() * p).atan()
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::natural()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_constants() {
        assert!(ModelParams::new(0.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, -1.0).is_err());
        assert!(ModelParams::new(f64::NAN, 1.0).is_err());
        assert!(ModelParams::new(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn derived_scales() {
        let m = ModelParams::new(4.0, 0.5).unwrap();
        assert_eq!(m.min_length(), 1.0);
        assert_eq!(m.momentum_scale(), 0.5);
        assert_eq!(m.deformation(1.0), 5.0);
    }
}
