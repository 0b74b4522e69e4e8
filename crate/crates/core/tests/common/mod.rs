//! Independent reference values shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;

/// `<f|g>` for two momentum Gaussians `(sigma, p0, x0)`, by completing the square.
pub fn gaussian_overlap(a: (f64, f64, f64), b: (f64, f64, f64), hbar: f64) -> Complex64 {
    let ((s1, p1, x1), (s2, p2, x2)) = (a, b);
    let norm = PI.powf(-0.5) / (s1 * s2).sqrt();
    let q = 0.5 / (s1 * s1) + 0.5 / (s2 * s2);
    let lin = Complex64::new(p1 / (s1 * s1) + p2 / (s2 * s2), (x1 - x2) / hbar);
    let c = p1 * p1 / (2.0 * s1 * s1) + p2 * p2 / (2.0 * s2 * s2);
    norm * (PI / q).sqrt() * (lin * lin / (4.0 * q) - c).exp()
}

/// `K0(x) = int_0^inf exp(-x cosh t) dt` by the trapezoid rule.
pub fn k0_integral(x: f64) -> f64 {
    let h: f64 = 1.0 / 128.0;
    let mut sum = 0.5 * (-x).exp();
    let mut t = h;
    loop {
        let term = (-x * t.cosh()).exp();
        sum += term;
        if term < 1e-300 || term < 1e-18 * sum {
            break;
        }
        t += h;
    }
    sum * h
}
